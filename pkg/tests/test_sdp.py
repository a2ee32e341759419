import json

import numpy as np
import pytest

from sdperc.clusters import has_open_circuit
from sdperc.lattice import (DomainError, RandomSource, Rect, SiteConfig, ball,
                            outer_boundary, sample_config, strip_R, strip_S)
from sdperc.sdp import (burn_boundary_clusters, check_config, chi_set, sdp_sample,
                        tilde_config, tilde_enhanced)
from oracles import P4, bfs, enumerate_cycles_winding


def test_burn_examples():
    h = Rect(0, 5, 0, 5)
    assert burn_boundary_clusters(SiteConfig.filled(h, 1), h).bits.sum() == 0
    one = SiteConfig.from_sites(h, [(2, 2)])
    assert burn_boundary_clusters(one, h) == one
    with pytest.raises(DomainError):
        burn_boundary_clusters(one, Rect(0, 9, 0, 9))


def test_burn_vs_bfs():
    h = Rect(0, 31, 0, 31)
    for seed in range(30):
        c = sample_config(h, 0.55, RandomSource(seed))
        op = c.open_sites()
        edge = [s for s in h.sites() if s[0] in (0, 31) or s[1] in (0, 31)]
        burned = bfs(op, edge, P4)
        assert burn_boundary_clusters(c, h).open_sites() == op - burned


def test_sdp_sample_invariants():
    h = ball((0, 0), 12)
    for i in range(10):
        s = sdp_sample(0.6, 0.1, h, RandomSource(1), i)
        assert np.all(s.omega_bar.bits <= s.omega.bits)
        assert np.array_equal(s.omega_bar_delta.bits, s.omega_bar.bits | s.sigma.bits)
    s = sdp_sample(0.6, 0.0, h, RandomSource(2))
    assert s.omega_bar_delta == s.omega_bar
    s = sdp_sample(0.0, 0.3, h, RandomSource(3))
    assert s.omega_bar_delta == s.sigma


def test_subcritical_burning_recedes():
    win = ball((0, 0), 4)
    fr = []
    for L in (8, 16, 32, 64):
        h = ball((0, 0), L)
        diff = 0
        for i in range(300):
            s = sdp_sample(0.5, 0.0, h, RandomSource(L), i)
            diff += not np.array_equal(s.omega.window(win), s.omega_bar.window(win))
        fr.append(diff / 300)
    assert fr[0] >= fr[1] >= fr[2] >= fr[3]
    assert fr[3] < fr[0] / 4


def test_dump(tmp_path):
    s = sdp_sample(0.6, 0.1, ball((0, 0), 5), RandomSource(1))
    s.dump(tmp_path / "x", n=2, seed=1, stream=0)
    meta = json.loads((tmp_path / "x.json").read_text())
    assert meta["p"] == 0.6 and meta["n"] == 2
    again = SiteConfig.from_bytes((tmp_path / "x.omega_bar.bin").read_bytes())
    assert again == s.omega_bar


def _chi_oracle(c, n):
    s = strip_S(n)
    op = {p for p in s.sites() if c[p]}
    L = bfs(op, [p for p in op if p[0] == s.x_min], P4)
    R = bfs(op, [p for p in op if p[0] == s.x_max], P4)
    return L & R


def test_chi_examples():
    n = 2
    s = strip_S(n)
    assert chi_set(SiteConfig.filled(s, 0), n) == set()
    assert chi_set(SiteConfig.filled(s, 1), n) == set(s.sites())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_chi_and_tilde_vs_oracle(n):
    s = strip_S(n)
    for seed in range(100):
        c = sample_config(s, 0.75, RandomSource(seed, n))
        chi = _chi_oracle(c, n)
        assert chi_set(c, n) == chi
        killed = (chi | outer_boundary(chi)) & set(s.sites())
        t = tilde_config(c, n)
        assert t.open_sites() == set(s.sites()) - killed
        assert t[(s.x_max + 1, 0)] == 0


def test_tilde_examples():
    n = 2
    s = strip_S(n)
    none = SiteConfig.filled(s, 0)
    assert tilde_config(none, n).bits.all()
    assert tilde_config(SiteConfig.filled(s, 1), n).bits.sum() == 0
    # hand-built single crossing on the middle row
    row = SiteConfig.from_sites(s, [(x, 1) for x in range(s.x_min, s.x_max + 1)])
    t = tilde_config(row, n)
    assert t.open_sites() == {p for p in s.sites() if p[1] not in (0, 1, 2)}


def test_tilde_enhanced():
    n = 2
    s = strip_S(n)
    r = strip_R(n)
    t = tilde_config(SiteConfig.filled(s, 1), n)
    assert tilde_enhanced(t, SiteConfig.filled(s, 0), n) == t
    e = tilde_enhanced(t, SiteConfig.filled(s, 1), n)
    assert e.open_sites() == set(r.sites())
    for seed in range(20):
        om = sample_config(s, 0.7, RandomSource(seed))
        sg = sample_config(s, 0.3, RandomSource(seed, 1))
        t = tilde_config(om, n)
        e = tilde_enhanced(t, sg, n)
        enh = {x for x in r.sites() if t[x] == 0 and sg[x] == 1}
        assert {x for x in s.sites() if e[x] != t[x]} == enh


def test_check_examples():
    n = 2
    d = ball((0, 0), 6 * n)
    full = SiteConfig.filled(d, 1)
    assert check_config(full, n).bits.sum() == 0
    c = sample_config(d, 0.3, RandomSource(4))
    if not has_open_circuit(c, n):
        assert check_config(c, n) == c


def test_check_vs_cycle_oracle():
    n = 2
    d = ball((0, 0), 6 * n)
    changed = 0
    for seed in range(60):
        c = sample_config(d, 0.6, RandomSource(seed, 5))
        op = c.open_sites()
        want = set(op)
        left = set(op)
        while left:
            s0 = next(iter(left))
            comp = bfs(op, [s0], P4)
            left -= comp
            if enumerate_cycles_winding(comp, (0, 0), n):
                want -= comp
        got = check_config(c, n).open_sites()
        assert got == want
        changed += got != op
    assert changed > 0


def test_bar_below_check_when_connected():
    n = 3
    d = ball((0, 0), 6 * n)
    seen = 0
    for seed in range(200):
        c = sample_config(d, 0.62, RandomSource(seed, 6))
        ring = [p for p in ball((0, 0), n).sites() if max(abs(p[0]), abs(p[1])) == n]
        edge = [p for p in d.sites() if max(abs(p[0]), abs(p[1])) == 6 * n]
        reach = bfs(c.open_sites(), ring, P4)
        if not (reach & set(edge)):
            continue
        seen += 1
        bar = burn_boundary_clusters(c, d)
        chk = check_config(c, n)
        assert np.all(bar.bits <= chk.bits)
        assert np.all(chk.bits <= c.bits)
    assert seen > 20


def test_enhancement_monotone_coupling():
    h = ball((0, 0), 10)
    g = np.random.default_rng(0)
    for _ in range(20):
        u = g.random(h.shape)
        v = g.random(h.shape)
        from sdperc.sdp import sdp_from_uniforms
        a = sdp_from_uniforms(u, v, 0.55, 0.1, h).omega_bar_delta.bits
        b = sdp_from_uniforms(u, v, 0.55, 0.3, h).omega_bar_delta.bits
        assert np.all(a <= b)

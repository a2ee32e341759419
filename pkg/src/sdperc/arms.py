"""Arm events: plain, half-plane and defected.

Arms are pairwise vertex-disjoint paths inside the annulus B_N(u) minus
B_n(u), each joining the outer boundary of B_n(u) (the ring at distance
n+1 without its four corners) to the ring at distance N.  Open arms are
primal paths of open sites, closed arms are matching paths of closed sites,
and the arm starts must appear counter-clockwise in the order of the color
sequence (cyclically for the full plane, from the right for half-planes).

Plain detection
---------------
Open and closed arms never share a site, and two distinct crossing clusters
cannot interleave along the inner ring: a path of one cluster between two
of its start sites, closed up through B_n, cuts off everything between them
on the side not winding around B_n, and paths of the other clusters cannot
cross it.  Each crossing cluster therefore owns a contiguous block of start
sites.  Its capacity (the most disjoint arms it can carry) is a vertex-disjoint
max-flow, and the event holds iff the cyclic (or linear) sequence of blocks
can absorb the color sequence, which a greedy scan over rotations decides.

Defected detection
------------------
A modification confined to B_3(w) is the same as declaring the sites of
B_3(w) usable by either color (each by at most one arm).  The detector
first tries the plain event, then the two constant rewrites of each ball,
discards centres failing a necessary per-color flow bound, and settles the
rest with an integer program whose solutions are re-verified as explicit
path systems.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .lattice import Coord, DomainError, ParameterError, RandomSource, Rect, SiteConfig, ball
from .stats import Estimate

FULL = "full-plane"
ABOVE = "half-plane-above"
BELOW = "half-plane-below"
VARIANTS = (FULL, ABOVE, BELOW)

_CANONICAL = {
    "Arm1": (1,),
    "Arm3hp": (1, 0, 1),
    "Arm4hp": (1, 0, 0, 1),
    "Arm5": (1, 0, 0, 1, 0),
    "Arm6": (0, 1, 0, 0, 1, 0),
}

# the variant each canonical name is meant for
CANONICAL_VARIANT = {"Arm1": FULL, "Arm3hp": ABOVE, "Arm4hp": ABOVE, "Arm5": FULL, "Arm6": FULL}


def canonical_sequences() -> dict[str, tuple[int, ...]]:
    """Named color sequences; 1 is an open arm, 0 a closed one.

    The five-arm sequence (1,0,0,1,0) is registered as ``Arm5``.
    """
    return dict(_CANONICAL)


@dataclass(frozen=True)
class ColorSequence:
    colors: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(int(c) for c in self.colors)
        if not cols or any(c not in (0, 1) for c in cols):
            raise ParameterError(f"bad color sequence {self.colors!r}")
        object.__setattr__(self, "colors", cols)

    def __len__(self):
        return len(self.colors)

    @classmethod
    def of(cls, s) -> "ColorSequence":
        if isinstance(s, ColorSequence):
            return s
        if isinstance(s, str):
            if s in _CANONICAL:
                return cls(_CANONICAL[s])
            return cls(tuple(int(c) for c in s.replace(",", "").strip()))
        return cls(tuple(s))


@dataclass(frozen=True)
class ArmQuery:
    """Arm event around ``center`` between radii ``inner`` and ``outer``.

    ``normalize`` applies the small-radius convention (inner radius raised
    to |sigma| when it does not exceed it); ``defect_radius`` is the radius
    of the modifiable ball for defected events.
    """

    center: tuple
    inner: int
    outer: int
    sequence: ColorSequence
    variant: str = FULL
    allow_defect: bool = False
    normalize: bool = True
    defect_radius: int = 3

    def __post_init__(self):
        object.__setattr__(self, "sequence", ColorSequence.of(self.sequence))
        object.__setattr__(self, "center", Coord(*self.center))
        if self.variant not in VARIANTS:
            raise ParameterError(f"unknown variant {self.variant!r}")
        if self.inner < 0 or self.outer < 0:
            raise ParameterError("radii must be non-negative")
        if self.defect_radius < 0:
            raise ParameterError("defect radius must be non-negative")

    def radii(self) -> tuple[int, int] | None:
        """Effective (n, N), or None when the event is the full event."""
        n, N = self.inner, self.outer
        k = len(self.sequence)
        if self.normalize and n <= k:
            n = k
        if n >= N:
            return None
        return n, N


def _half(variant: str) -> bool:
    return variant != FULL


def arm_window(config: SiteConfig, center, N: int, variant: str = FULL) -> np.ndarray:
    """The (2N+1)^2 window around ``center`` in arm orientation.

    For ``BELOW`` the rows are mirrored so that the lower half-plane becomes
    the upper one.  Raises if the part of B_N(center) used by the variant is
    not inside the configuration's domain.
    """
    b = ball(center, N)
    need = b
    if variant == ABOVE:
        need = Rect(b.x_min, b.x_max, center[1], b.y_max)
    elif variant == BELOW:
        need = Rect(b.x_min, b.x_max, b.y_min, center[1])
    if not config.domain.contains_rect(need):
        raise DomainError(f"annulus region {need} not inside {config.domain}")
    win = config.window(b)
    if variant == BELOW:
        win = win[::-1]
    return np.ascontiguousarray(win, dtype=np.uint8)


def _longest_run(colors: Sequence[int], c: int, cyclic: bool) -> int:
    k = len(colors)
    if all(x == c for x in colors):
        return k
    best = run = 0
    seq = list(colors) + (list(colors) if cyclic else [])
    for x in seq:
        run = run + 1 if x == c else 0
        best = max(best, run)
    return min(best, k)


def _embed(blocks, colors, cyclic: bool) -> bool:
    """Whether the color sequence can be laid over the blocks in order."""
    k = len(colors)
    m = len(blocks)
    if m == 0:
        return False
    rots = range(k) if cyclic else (0,)
    firsts = range(m) if cyclic else (0,)
    for r in rots:
        s = colors[r:] + colors[:r]
        for b0 in firsts:
            i = 0
            for t in range(m):
                col, cap = blocks[(b0 + t) % m]
                take = 0
                while i < k and s[i] == col and take < cap:
                    i += 1
                    take += 1
                if i == k:
                    return True
    return False


def blocks_from_window(win: np.ndarray, n: int, colors, half: bool):
    """Cyclic (or linear) list of ``(color, capacity)`` blocks along the inner ring."""
    colors = tuple(colors)
    cyclic = not half
    cap1 = _longest_run(colors, 1, cyclic) if 1 in colors else 0
    cap0 = _longest_run(colors, 0, cyclic) if 0 in colors else 0
    _, sc, col, cap = kernels.annulus_structure(win, n, half, cap1, cap0)
    order = []
    for c in sc:
        if c >= 0 and (not order or order[-1] != c):
            order.append(int(c))
    if cyclic and len(order) > 1 and order[0] == order[-1]:
        order.pop()
    if len(set(order)) != len(order):
        raise RuntimeError("crossing clusters interleave along the inner ring")
    return [(int(col[c]), int(cap[c])) for c in order]


def plain_event_window(win: np.ndarray, n: int, colors, half: bool) -> bool:
    """Plain arm event on an oriented window (no normalization)."""
    colors = tuple(colors)
    N = (win.shape[0] - 1) // 2
    if n >= N:
        return True
    blocks = blocks_from_window(win, n, colors, half)
    if len(set(colors)) == 1:
        c = colors[0]
        return sum(cap for col, cap in blocks if col == c) >= len(colors)
    return _embed(blocks, list(colors), not half)


def _region_masks(N: int, n: int, half: bool):
    size = 2 * N + 1
    region = kernels.annulus_region(N, n, half)
    src = np.zeros((size, size), dtype=np.uint8)
    for s in kernels.start_sites(N, n, half):
        src[s // size, s % size] = 1
    yy, xx = np.mgrid[0:size, 0:size]
    snk = (region & (np.maximum(abs(xx - N), abs(yy - N)) == N)).astype(np.uint8)
    return region, src, snk


def max_disjoint_crossings(config: SiteConfig, u, n: int, N: int, color: int,
                           variant: str = FULL) -> int:
    """Maximum number of vertex-disjoint arms of one color (no normalization)."""
    if n >= N:
        raise ParameterError("need n < N")
    win = arm_window(config, u, N, variant)
    region, src, snk = _region_masks(N, n, _half(variant))
    allowed = region & (win if color == 1 else 1 - win)
    return int(kernels.vd_maxflow(allowed.astype(np.uint8), src, snk, color == 0, 1 << 30))


def has_arm_event(config: SiteConfig, q: ArmQuery) -> bool:
    rad = q.radii()
    if rad is None:
        return True
    n, N = rad
    win = arm_window(config, q.center, N, q.variant)
    return plain_event_window(win, n, q.sequence.colors, _half(q.variant))


# --------------------------------------------------------------------------- defects

def _defect_centres(N: int, n: int, half: bool, radius: int):
    """Window-coordinate centres whose ball meets the (half-)annulus."""
    out = []
    lo = -radius
    hi = 2 * N + radius
    for cy in range(lo, hi + 1):
        if half and cy + radius < N:
            continue
        for cx in range(lo, hi + 1):
            # the ball must reach distance > n from the centre of the window
            far = max(abs(cx - N), abs(cy - N)) + radius
            if far <= n:
                continue
            out.append((cx, cy))
    return out


def _ball_mask(size: int, cx: int, cy: int, radius: int) -> np.ndarray:
    m = np.zeros((size, size), dtype=np.uint8)
    m[max(cy - radius, 0):max(min(cy + radius + 1, size), 0),
      max(cx - radius, 0):max(min(cx + radius + 1, size), 0)] = 1
    return m


def defected_event_window(win: np.ndarray, n: int, colors, half: bool,
                          radius: int = 3, return_witness: bool = False):
    """Defected arm event on an oriented window (no normalization).

    Returns a bool, or ``(bool, witness)`` where the witness is ``None`` or a
    dict with the defect centre (window coordinates) and, when found by the
    integer program, the arm paths.
    """
    colors = tuple(colors)
    N = (win.shape[0] - 1) // 2

    def done(ok, wit=None):
        return (ok, wit) if return_witness else ok

    if n >= N:
        return done(True, {"centre": None})
    if plain_event_window(win, n, colors, half):
        return done(True, {"centre": None})
    size = win.shape[0]
    region, src, snk = _region_masks(N, n, half)
    ones = sum(colors)
    zeros = len(colors) - ones
    seen = set()
    survivors = []
    for cx, cy in _defect_centres(N, n, half, radius):
        wm = _ball_mask(size, cx, cy, radius) & region
        key = wm.tobytes()
        if key in seen:
            continue
        seen.add(key)
        if not wm.any():
            continue
        for fill in (1, 0):
            alt = np.where(wm != 0, fill, win).astype(np.uint8)
            if plain_event_window(alt, n, colors, half):
                return done(True, {"centre": (cx, cy), "fill": fill})
        if ones:
            allowed = (region & (win | wm)).astype(np.uint8)
            if kernels.vd_maxflow(allowed, src, snk, False, ones) < ones:
                continue
        if zeros:
            allowed = (region & ((1 - win) | wm)).astype(np.uint8)
            if kernels.vd_maxflow(allowed, src, snk, True, zeros) < zeros:
                continue
        survivors.append(((cx, cy), wm))
    if not survivors:
        return done(False)
    sol = wildcard_ilp(win, n, colors, half, [wm for _, wm in survivors])
    if sol is None:
        return done(False)
    centre = survivors[sol["ball"]][0]
    sol["centre"] = centre
    return done(True, sol)


def has_defected_arm_event(config: SiteConfig, q: ArmQuery) -> bool:
    rad = q.radii()
    if rad is None:
        return True
    n, N = rad
    win = arm_window(config, q.center, N, q.variant)
    return bool(defected_event_window(win, n, q.sequence.colors, _half(q.variant),
                                      q.defect_radius))


def arm_event(config: SiteConfig, q: ArmQuery) -> bool:
    """Dispatch on ``q.allow_defect``."""
    return has_defected_arm_event(config, q) if q.allow_defect else has_arm_event(config, q)


def wildcard_ilp(win: np.ndarray, n: int, colors, half: bool, wild_masks):
    """Exact search for arms when one of ``wild_masks`` may be used by both colors.

    Integer program with, per color, unit vertex-capacity flows on the
    annulus; one-hot choice of the wildcard ball; start-site assignment in
    strictly increasing counter-clockwise position; one-hot rotation of the
    color sequence (full plane only).  A feasible point is decoded into
    explicit paths and checked before being reported.  Returns ``None`` when
    infeasible, else a dict with ``ball`` (index into ``wild_masks``) and
    ``paths`` (list of (color, [window (x, y) sites])).
    """
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    colors = tuple(colors)
    k = len(colors)
    size = win.shape[0]
    N = (size - 1) // 2
    region, src, snk = _region_masks(N, n, half)
    starts = [int(s) for s in kernels.start_sites(N, n, half)]
    nb = len(wild_masks)
    wild_any = np.zeros_like(region)
    for wm in wild_masks:
        wild_any |= wm
    cover = {}
    for b, wm in enumerate(wild_masks):
        for i in np.flatnonzero(wm):
            cover.setdefault(int(i), []).append(b)
    flat_win = win.ravel()
    flat_region = region.ravel()
    flat_snk = snk.ravel()

    def allowed(v, c):
        return flat_region[v] and (flat_win[v] == c or v in cover)

    nvar = 0
    names = {}

    def var(key):
        nonlocal nvar
        names[key] = nvar
        nvar += 1
        return nvar - 1

    steps = {1: [(1, 0), (0, 1), (-1, 0), (0, -1)],
             0: [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)]}
    sites = [int(v) for v in np.flatnonzero(flat_region)]
    arcs = {0: [], 1: []}
    for c in (0, 1):
        for v in sites:
            if not allowed(v, c):
                continue
            var(("t", c, v))
            if flat_snk[v]:
                var(("s", c, v))
            y, x = divmod(v, size)
            for dx, dy in steps[c]:
                xx, yy = x + dx, y + dy
                if 0 <= xx < size and 0 <= yy < size:
                    w = yy * size + xx
                    if allowed(w, c):
                        arcs[c].append((v, w))
                        var(("f", c, v, w))
    pos = {s: i for i, s in enumerate(starts)}
    for s in starts:
        for j in range(k):
            var(("a", s, j))
            var(("b", s, j))
    rots = list(range(k)) if not half else [0]
    for t in rots:
        var(("r", t))
    for b in range(nb):
        var(("z", b))

    rows, cols, vals, lo, hi = [], [], [], [], []
    nrow = 0

    def add(terms, lb, ub):
        nonlocal nrow
        for key, coef in terms:
            if key in names:
                rows.append(nrow)
                cols.append(names[key])
                vals.append(coef)
        lo.append(lb)
        hi.append(ub)
        nrow += 1

    def kappa_terms(j, sign=1.0):
        return [(("r", t), sign * colors[(t + j) % k]) for t in rots]

    # start assignment
    for j in range(k):
        add([(("a", s, j), 1.0) for s in starts], 1, 1)
    for j in range(k - 1):
        add([(("a", s, j), float(pos[s])) for s in starts]
            + [(("a", s, j + 1), -float(pos[s])) for s in starts], -np.inf, -1)
    add([(("r", t), 1.0) for t in rots], 1, 1)
    if nb:
        add([(("z", b), 1.0) for b in range(nb)], 0, 1)
    # b = a * kappa
    for s in starts:
        for j in range(k):
            add([(("b", s, j), 1.0), (("a", s, j), -1.0)], -np.inf, 0)
            add([(("b", s, j), 1.0)] + kappa_terms(j, -1.0), -np.inf, 0)
            add([(("b", s, j), 1.0), (("a", s, j), -1.0)] + kappa_terms(j, -1.0), -1, np.inf)
    # flow conservation
    inflow = {0: {}, 1: {}}
    outflow = {0: {}, 1: {}}
    for c in (0, 1):
        for v, w in arcs[c]:
            outflow[c].setdefault(v, []).append(("f", c, v, w))
            inflow[c].setdefault(w, []).append(("f", c, v, w))
    for c in (0, 1):
        for v in sites:
            if ("t", c, v) not in names:
                continue
            terms = [(key, 1.0) for key in inflow[c].get(v, [])] + [(("t", c, v), -1.0)]
            if v in pos:
                for j in range(k):
                    if c == 1:
                        terms.append((("b", v, j), 1.0))
                    else:
                        terms.append((("a", v, j), 1.0))
                        terms.append((("b", v, j), -1.0))
            add(terms, 0, 0)
            terms = [(("t", c, v), 1.0)] + [(key, -1.0) for key in outflow[c].get(v, [])]
            if ("s", c, v) in names:
                terms.append((("s", c, v), -1.0))
            add(terms, 0, 0)
    # a start that is not allowed for a color cannot host an arm of that color
    for s in starts:
        for c in (0, 1):
            if ("t", c, s) in names:
                continue
            for j in range(k):
                if c == 1:
                    add([(("b", s, j), 1.0)], 0, 0)
                else:
                    add([(("a", s, j), 1.0), (("b", s, j), -1.0)], 0, 0)
    # vertex capacity shared between colors and wildcard gating
    for v in sites:
        add([(("t", 0, v), 1.0), (("t", 1, v), 1.0)], -np.inf, 1)
        for c in (0, 1):
            if ("t", c, v) in names and flat_win[v] != c:
                add([(("t", c, v), 1.0)] + [(("z", b), -1.0) for b in cover.get(v, [])],
                    -np.inf, 0)
    A = coo_matrix((vals, (rows, cols)), shape=(nrow, nvar)).tocsr()
    res = milp(c=np.zeros(nvar), constraints=LinearConstraint(A, lo, hi),
               integrality=np.ones(nvar), bounds=Bounds(0, 1))
    if res.status != 0 or res.x is None:
        if res.status not in (0, 2):
            raise RuntimeError(f"integer program failed: {res.message}")
        return None
    x = np.round(res.x).astype(int)

    def val(key):
        return x[names[key]] if key in names else 0

    ball_idx = next((b for b in range(nb) if val(("z", b))), None)
    arms = []
    for j in range(k):
        s = next(s for s in starts if val(("a", s, j)))
        c = 1 if val(("b", s, j)) else 0
        path = [s]
        v = s
        while True:
            nxt = [w for (key) in outflow[c].get(v, []) if val(key) for w in (key[3],)]
            if not nxt:
                break
            v = nxt[0]
            path.append(v)
        arms.append((c, path))
    wild = wild_masks[ball_idx].ravel() if ball_idx is not None else np.zeros(size * size, np.uint8)
    _verify_arms(win.ravel(), wild, region.ravel(), src.ravel(), snk.ravel(), size, arms,
                 colors, starts, half)
    return {"ball": ball_idx if ball_idx is not None else 0,
            "paths": [(c, [(v % size, v // size) for v in p]) for c, p in arms]}


def _verify_arms(win, wild, region, src, snk, size, arms, colors, starts, half):
    used = set()
    for c, path in arms:
        if not src[path[0]] or not snk[path[-1]]:
            raise RuntimeError("decoded arm has bad endpoints")
        for a, b in zip(path, path[1:]):
            ay, ax = divmod(a, size)
            by, bx = divmod(b, size)
            d = max(abs(ax - bx), abs(ay - by))
            if d != 1 or (c == 1 and abs(ax - bx) + abs(ay - by) != 1):
                raise RuntimeError("decoded arm is not a path")
        for v in path:
            if v in used or not region[v] or not (win[v] == c or wild[v]):
                raise RuntimeError("decoded arms overlap or use a wrong site")
            used.add(v)
    pos = {s: i for i, s in enumerate(starts)}
    p = [pos[path[0]] for _, path in arms]
    if any(p[i] >= p[i + 1] for i in range(len(p) - 1)):
        raise RuntimeError("decoded arms are out of order")
    got = [c for c, _ in arms]
    k = len(colors)
    rots = range(k) if not half else (0,)
    if not any(list(colors[r:] + colors[:r]) == got for r in rots):
        raise RuntimeError("decoded arm colors do not match the sequence")


# --------------------------------------------------------------------------- estimation

def estimate_arm_probability(q: ArmQuery, p: float, samples: int, rng,
                             threads: int = 1) -> Estimate:
    """Monte Carlo frequency of the (defected) arm event under P_p."""
    from .harness import parallel_map

    if samples < 1:
        raise ParameterError("samples must be >= 1")
    src = rng if isinstance(rng, RandomSource) else RandomSource(int(rng))
    rad = q.radii()
    spec = {"kind": "arm", "sequence": list(q.sequence.colors), "variant": q.variant,
            "inner": q.inner, "outer": q.outer, "defect": q.allow_defect, "p": p}
    if rad is None:
        return Estimate.from_hits(samples, samples, src.seed, spec)
    box = ball(q.center, rad[1])

    def one(i):
        gen = src.generator(i)
        cfg = SiteConfig(box, (gen.random(box.shape) < p).astype(np.uint8))
        return arm_event(cfg, q)

    hits = sum(parallel_map(one, range(samples), threads))
    return Estimate.from_hits(int(hits), samples, src.seed, spec)

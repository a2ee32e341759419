"""Monte Carlo estimators and experiment orchestration.

Sample ``i`` of an estimator always draws from ``RandomSource(seed,
stream).generator(i)``, and per-sample results are merged in index order, so
outputs depend only on (seed, parameters) and never on the thread count.
"""
from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .arms import ArmQuery, CANONICAL_VARIANT, arm_event
from .clusters import HORIZONTAL, VERTICAL, crosses_mask, dist_grid
from .lattice import (DomainError, ParameterError, RandomSource, Rect, SiteConfig,
                      ball, box, check_probability, strip_R, strip_S)
from .passage import passage_arrays
from .sdp import burn_mask, check_config
from .stats import Z95, Estimate, fit_power_law, wilson

KINDS = ("crossing", "theorem_cross", "annulus_recovery", "theta", "delta_c_scan",
         "arm_scaling", "pc_bisect")


def parallel_map(fn, items, threads: int = 1) -> list:
    """``[fn(i) for i in items]`` on a thread pool, results in input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _source(rng, stream: int = 0) -> RandomSource:
    if isinstance(rng, RandomSource):
        return rng
    return RandomSource(int(rng), stream)


def _check_samples(samples: int) -> None:
    if samples < 1:
        raise ParameterError("samples must be >= 1")


# --------------------------------------------------------------------------- p_c

def crossing_thresholds(m: int, n: int, samples: int, rng, threads: int = 1) -> np.ndarray:
    """Per-sample threshold t* such that Box(m, n) is crossed left-right iff p >= t*.

    Sites share one uniform each, so the crossing indicator at any p is
    ``t* <= p`` (the monotone coupling).
    """
    _check_samples(samples)
    src = _source(rng)
    shape = box(m, n).shape

    def one(i):
        return kernels.crossing_threshold_lr(src.generator(i).random(shape))

    return np.asarray(parallel_map(one, range(samples), threads), dtype=np.float64)


def bisect_pc(n: int, samples: int, tol: float = 1e-4, rng=0, threads: int = 1) -> Estimate:
    """p at which the estimated square-crossing probability P_p(Ch(n, n)) is 1/2.

    Bisection runs on the coupled empirical crossing curve; the interval comes
    from the binomial order statistics of the thresholds.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    src = _source(rng)
    t = np.sort(crossing_thresholds(n, n, samples, src, threads))
    lo, hi = 0.0, 1.0
    trace = []
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        q = float(np.searchsorted(t, mid, side="right")) / samples
        trace.append((mid, q))
        if q < 0.5:
            lo = mid
        else:
            hi = mid
    value = 0.5 * (lo + hi)
    half = Z95 * math.sqrt(samples) / 2
    k_lo = max(int(math.floor(samples / 2 - half)), 0)
    k_hi = min(int(math.ceil(samples / 2 + half)), samples - 1)
    ci_lo = min(float(t[k_lo]), value)
    ci_hi = max(float(t[k_hi]), value)
    spec = {"kind": "pc_bisect", "n": n, "tol": tol, "trace": trace}
    return Estimate(value, ci_lo, ci_hi, samples, src.seed, spec)


# --------------------------------------------------------------------------- crossings

def estimate_crossing(p: float, m: int, n: int, samples: int, rng, threads: int = 1,
                      direction: str = HORIZONTAL) -> Estimate:
    """P_p(Ch(m, n)) (or Cv) on Box(m, n)."""
    check_probability(p)
    _check_samples(samples)
    src = _source(rng)
    shape = box(m, n).shape

    def one(i):
        a = (src.generator(i).random(shape) < p).astype(np.uint8)
        return crosses_mask(a, direction, False)

    hits = sum(parallel_map(one, range(samples), threads))
    spec = {"kind": "crossing", "p": p, "m": m, "n": n, "direction": direction}
    return Estimate.from_hits(int(hits), samples, src.seed, spec)


def estimate_sdp_crossing(p: float, delta: float, n: int, samples: int, rng,
                          threads: int = 1, horizon_factor: int = 2) -> Estimate:
    """P_{p,delta}(omega_bar^delta crosses the square [-n/2, n/2]^2 horizontally).

    Burning acts on the clusters reaching the boundary of the horizon box
    B_{horizon_factor * n}.
    """
    check_probability(p)
    check_probability(delta, "delta")
    _check_samples(samples)
    src = _source(rng)
    hz = ball((0, 0), horizon_factor * n)
    sq = Rect(-(n // 2), n - n // 2, -(n // 2), n - n // 2)
    sl = sq.slices(hz)

    def one(i):
        gen = src.generator(i)
        u = gen.random(hz.shape)
        v = gen.random(hz.shape)
        om = (u < p).astype(np.uint8)
        bar = om & (1 - burn_mask(om))
        bd = bar | (v < delta)
        return crosses_mask(np.ascontiguousarray(bd[sl]), HORIZONTAL, False)

    hits = sum(parallel_map(one, range(samples), threads))
    spec = {"kind": "sdp_crossing", "p": p, "delta": delta, "n": n,
            "horizon": horizon_factor * n}
    return Estimate.from_hits(int(hits), samples, src.seed, spec)


def theorem_cross_sample(gen: np.random.Generator, p: float, delta: float, n: int,
                         sigma_draws: int = 1) -> float:
    """Conditional frequency of {omega in Ch(S_n), omega_tilde^delta in Cv(R_n)} given omega.

    omega is drawn once; when it crosses S_n horizontally, ``sigma_draws``
    independent sigma fields are tried and the fraction of vertical crossings
    of R_n is returned (0 otherwise).  With one draw this is the plain
    indicator.
    """
    s = strip_S(n)
    om = (gen.random(s.shape) < p).astype(np.uint8)
    sg = (gen.random(s.shape) < delta).astype(np.uint8)
    if not kernels.crosses_lr(om, False):
        return 0.0
    til, tdel, _, _, _, _ = passage_arrays(om, sg, n)
    sl = strip_R(n).slices(s)
    til_r = np.ascontiguousarray(til[sl])
    hits = int(crosses_mask(np.ascontiguousarray(tdel[sl]), VERTICAL, False))
    for _ in range(sigma_draws - 1):
        sr = (gen.random(til_r.shape) < delta).astype(np.uint8)
        hits += int(crosses_mask(til_r | sr, VERTICAL, False))
    return hits / sigma_draws


def _mean_estimate(vals, seed, spec) -> Estimate:
    vals = np.asarray(vals, dtype=np.float64)
    S = len(vals)
    if np.all((vals == 0) | (vals == 1)):
        return Estimate.from_hits(int(vals.sum()), S, seed, spec)
    m = float(vals.mean())
    half = Z95 * float(vals.std(ddof=1)) / math.sqrt(S)
    return Estimate(m, max(m - half, 0.0), min(m + half, 1.0), S, seed, spec)


def estimate_theorem_cross(p: float, delta: float, n: int, samples: int, rng,
                           threads: int = 1, sigma_draws: int = 1) -> Estimate:
    """P_{p,delta}(omega in Ch(S_n) and omega_tilde^delta in Cv(R_n)).

    ``sigma_draws > 1`` switches to conditional Monte Carlo over sigma, which
    keeps the estimator unbiased and cuts the variance when the horizontal
    crossing of S_n is rare; the interval is then a normal one.
    """
    check_probability(p)
    check_probability(delta, "delta")
    _check_samples(samples)
    if sigma_draws < 1:
        raise ParameterError("sigma_draws must be >= 1")
    src = _source(rng)
    vals = parallel_map(lambda i: theorem_cross_sample(src.generator(i), p, delta, n,
                                                       sigma_draws),
                        range(samples), threads)
    spec = {"kind": "theorem_cross", "p": p, "delta": delta, "n": n,
            "sigma_draws": sigma_draws}
    return _mean_estimate(vals, src.seed, spec)


def annulus_recovery_sample(gen: np.random.Generator, p: float, delta: float, n: int) -> bool:
    """One draw of {boundary of B_{n-1} joined to boundary of B_{2n} in omega_check^delta}.

    omega is drawn on B_{6n}; the check configuration is computed there.
    """
    dom = ball((0, 0), 6 * n)
    om = SiteConfig(dom, (gen.random(dom.shape) < p).astype(np.uint8))
    sg = gen.random(dom.shape) < delta
    chk = check_config(om, n)
    bd = chk.bits | sg
    return annulus_connects(bd, dom, n)


def annulus_connects(bits: np.ndarray, dom: Rect, n: int) -> bool:
    """Open path inside B_{2n+1} from the outer boundary of B_{n-1} to that of B_{2n}."""
    out = ball((0, 0), 2 * n + 1)
    a = np.ascontiguousarray(bits[out.slices(dom)], dtype=np.uint8)
    d = dist_grid(out.width)
    c = n * 2 + 1
    yy, xx = np.mgrid[0:out.width, 0:out.width]
    corner = (abs(xx - c) == abs(yy - c))
    inner = ((d == n) & ~corner).astype(np.uint8)
    outer = ((d == 2 * n + 1) & ~corner)
    seen = kernels.reach(a, inner, False)
    return bool((seen.astype(bool) & outer).any())


def estimate_annulus_recovery(p: float, delta: float, n: int, samples: int, rng,
                              threads: int = 1) -> Estimate:
    check_probability(p)
    check_probability(delta, "delta")
    _check_samples(samples)
    if n < 1:
        raise ParameterError("n must be >= 1")
    src = _source(rng)
    hits = sum(parallel_map(lambda i: annulus_recovery_sample(src.generator(i), p, delta, n),
                            range(samples), threads))
    spec = {"kind": "annulus_recovery", "p": p, "delta": delta, "n": n}
    return Estimate.from_hits(int(hits), samples, src.seed, spec)


# --------------------------------------------------------------------------- theta

def theta_sample(gen: np.random.Generator, p: float, deltas, m: int, horizon: int):
    """Proxy indicators {0 joined to distance m in omega_bar^delta} for each delta.

    One pair of uniform fields serves every delta, so the indicators are
    pointwise non-decreasing in delta.
    """
    hz = ball((0, 0), horizon)
    u = gen.random(hz.shape)
    v = gen.random(hz.shape)
    om = (u < p).astype(np.uint8)
    bar = om & (1 - burn_mask(om))
    win = ball((0, 0), m)
    sl = win.slices(hz)
    d = dist_grid(win.width)
    seed = np.zeros(win.shape, dtype=np.uint8)
    seed[m, m] = 1
    out = []
    for delta in deltas:
        bd = np.ascontiguousarray((bar | (v < delta))[sl], dtype=np.uint8)
        if bd[m, m] == 0:
            out.append(False)
            continue
        seen = kernels.reach(bd, seed, False)
        out.append(bool((seen.astype(bool) & (d == m)).any()))
    return out


def estimate_theta(p: float, delta: float, m: int, horizon: int, samples: int, rng,
                   threads: int = 1) -> Estimate:
    """Finite proxy of theta(p, delta): origin joined to distance m, horizon B_horizon."""
    check_probability(p)
    check_probability(delta, "delta")
    _check_samples(samples)
    if m > horizon:
        raise DomainError("B_m must lie inside the horizon box")
    src = _source(rng)
    res = parallel_map(lambda i: theta_sample(src.generator(i), p, (delta,), m, horizon)[0],
                       range(samples), threads)
    spec = {"kind": "theta", "p": p, "delta": delta, "m": m, "horizon": horizon}
    return Estimate.from_hits(int(sum(res)), samples, src.seed, spec)


def theta_grid(p: float, deltas, m: int, horizon: int, samples: int, rng,
               threads: int = 1) -> list[Estimate]:
    """theta proxy on a delta grid from coupled samples."""
    _check_samples(samples)
    src = _source(rng)
    deltas = list(deltas)
    res = np.asarray(parallel_map(lambda i: theta_sample(src.generator(i), p, deltas, m,
                                                          horizon),
                                  range(samples), threads), dtype=bool).reshape(samples, -1)
    return [Estimate.from_hits(int(res[:, j].sum()), samples, src.seed,
                               {"kind": "theta", "p": p, "delta": d, "m": m,
                                "horizon": horizon})
            for j, d in enumerate(deltas)]


def scan_delta_c(p_grid, delta_grid, m: int, horizon: int, samples: int, rng,
                 pc: float, threads: int = 1, level: float | None = None) -> list[dict]:
    """Empirical delta_c(p) on a grid, with the closed-form comparison curves.

    ``delta_hat`` is the smallest grid delta whose theta-proxy lower bound
    exceeds ``level``.  At finite m every delta > 0 gives a positive proxy, so
    the default level is the plain critical one-arm value P_pc(0 joined to
    distance m), read off the proxy at (p, delta) = (0, pc) where omega_bar^delta
    is just sigma.
    """
    if not list(p_grid) or not list(delta_grid):
        raise ParameterError("grids must be nonempty")
    src = _source(rng)
    if level is None:
        level = theta_grid(0.0, [pc], m, horizon, samples, src.substream(10 ** 6),
                           threads)[0].value
    rows = []
    for k, p in enumerate(p_grid):
        ests = theta_grid(p, delta_grid, m, horizon, samples, src.substream(k + 1), threads)
        hat = next((d for d, e in zip(delta_grid, ests) if e.ci_lo > level), None)
        rows.append({"p": p, "delta_hat": hat,
                     "closed_form": max((pc - p) / (1 - p), 0.0) if p < 1 else 0.0,
                     "linear_lower": max((p - pc) / p, 0.0) if p > 0 else 0.0,
                     "level": level,
                     "theta": [e.value for e in ests]})
    return rows


# --------------------------------------------------------------------------- arms

def _shell_indices(Ns, size: int):
    """Flat indices (within the B_{max N} array) of B_{N_0}, B_{N_1} minus B_{N_0}, ..."""
    c = (size - 1) // 2
    yy, xx = np.mgrid[0:size, 0:size]
    d = np.maximum(abs(xx - c), abs(yy - c)).ravel()
    out = []
    prev = -1
    for N in Ns:
        out.append(np.nonzero((d > prev) & (d <= N))[0])
        prev = N
    return out


def arm_scaling(sequence, n: int, Ns, p: float, samples: int, rng, threads: int = 1,
                variant: str | None = None, defect: bool = False) -> list[Estimate]:
    """pi_sigma(n, N) for every N in ``Ns`` from shared samples on B_{max N}.

    Sample i fills the shells B_{N_j} minus B_{N_(j-1)} from separate
    substreams (i, j), testing N from the smallest upward; the event is
    decreasing in N, so a sample stops at its first failure without drawing
    the outer shells.
    """
    _check_samples(samples)
    Ns = sorted(int(N) for N in Ns)
    src = _source(rng)
    name = sequence if isinstance(sequence, str) else None
    if variant is None:
        variant = CANONICAL_VARIANT.get(name, "full-plane")
    dom = ball((0, 0), Ns[-1])
    shells = _shell_indices(Ns, dom.width)
    queries = [ArmQuery((0, 0), n, N, sequence, variant, allow_defect=defect) for N in Ns]
    mask64 = (1 << 64) - 1

    def one(i):
        a = np.zeros(dom.area, dtype=np.uint8)
        cfg = SiteConfig(dom, a.reshape(dom.shape))
        out = [False] * len(Ns)
        for j, q in enumerate(queries):
            ss = np.random.SeedSequence(entropy=src.seed & mask64,
                                        spawn_key=(src.stream_id & mask64, i, j))
            u = np.random.Generator(np.random.PCG64(ss)).random(len(shells[j]))
            a[shells[j]] = u < p
            cfg = SiteConfig(dom, a.reshape(dom.shape))
            if not arm_event(cfg, q):
                break
            out[j] = True
        return out

    res = np.asarray(parallel_map(one, range(samples), threads), dtype=bool)
    spec = {"kind": "arm_scaling", "sequence": str(sequence), "variant": variant, "n": n,
            "p": p, "defect": defect}
    return [Estimate.from_hits(int(res[:, j].sum()), samples, src.seed, {**spec, "N": N})
            for j, N in enumerate(Ns)]


def arm_exponent(ests, n: int) -> tuple[float, float]:
    """Decay exponent of pi(n, N) in N/n from a list of scaling estimates."""
    pts = [(e.spec["N"] / n, e.value, (e.ci_lo, e.ci_hi)) for e in ests]
    return fit_power_law(pts)


# --------------------------------------------------------------------------- experiments

@dataclass
class ExperimentSpec:
    kind: str
    params: dict = field(default_factory=dict)
    out: str | None = None

    _REQUIRED = {
        "crossing": ("p", "m", "n"),
        "theorem_cross": ("p", "delta", "ns"),
        "annulus_recovery": ("p", "delta", "ns"),
        "theta": ("p", "delta", "m", "horizon"),
        "delta_c_scan": ("p_grid", "delta_grid", "m", "horizon", "pc"),
        "arm_scaling": ("sequence", "n", "Ns", "p"),
        "pc_bisect": ("ns",),
    }

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown experiment kind {self.kind!r}")
        missing = [k for k in self._REQUIRED[self.kind] if k not in self.params]
        if missing:
            raise ParameterError(f"{self.kind} needs parameters {missing}")


def _git_revision() -> str | None:
    try:
        r = subprocess.run(["git", "rev-parse", "HEAD"], capture_output=True, text=True,
                           cwd=Path(__file__).resolve().parent, timeout=10)
        return r.stdout.strip() or None
    except (OSError, subprocess.SubprocessError):
        return None


def _rows(spec: ExperimentSpec, seed: int, samples: int, threads: int) -> list[dict]:
    P = spec.params
    src = RandomSource(seed)
    k = spec.kind
    if k == "crossing":
        e = estimate_crossing(P["p"], P["m"], P["n"], samples, src, threads,
                              P.get("direction", HORIZONTAL))
        return [_erow(e, p=P["p"], m=P["m"], n=P["n"])]
    if k == "theorem_cross":
        return [_erow(estimate_theorem_cross(P["p"], P["delta"], n, samples,
                                             src.substream(j), threads,
                                             int(P.get("sigma_draws", 1))), n=n)
                for j, n in enumerate(P["ns"])]
    if k == "annulus_recovery":
        return [_erow(estimate_annulus_recovery(P["p"], P["delta"], n, samples,
                                                src.substream(j), threads), n=n)
                for j, n in enumerate(P["ns"])]
    if k == "theta":
        deltas = P["delta"] if isinstance(P["delta"], (list, tuple)) else [P["delta"]]
        es = theta_grid(P["p"], deltas, P["m"], P["horizon"], samples, src, threads)
        return [_erow(e, p=P["p"], delta=d) for d, e in zip(deltas, es)]
    if k == "delta_c_scan":
        rows = scan_delta_c(P["p_grid"], P["delta_grid"], P["m"], P["horizon"], samples, src,
                            P["pc"], threads)
        for r in rows:
            r["theta"] = " ".join(f"{t:.6f}" for t in r["theta"])
        return rows
    if k == "arm_scaling":
        es = arm_scaling(P["sequence"], P["n"], P["Ns"], P["p"], samples, src, threads,
                         P.get("variant"), bool(P.get("defect", False)))
        return [{"n": P["n"], "N": e.spec["N"], "hits": e.hits, "samples": e.samples,
                 "p_hat": f"{e.value:.10g}", "ci_lo": f"{e.ci_lo:.10g}",
                 "ci_hi": f"{e.ci_hi:.10g}"} for e in es]
    if k == "pc_bisect":
        return [_erow(bisect_pc(n, samples, P.get("tol", 1e-4), src.substream(j), threads), n=n)
                for j, n in enumerate(P["ns"])]
    raise ParameterError(k)


def _erow(e: Estimate, **keys) -> dict:
    row = dict(keys)
    row.update(value=f"{e.value:.10g}", ci_lo=f"{e.ci_lo:.10g}", ci_hi=f"{e.ci_hi:.10g}",
               samples=e.samples)
    if e.hits is not None:
        row["hits"] = e.hits
    return row


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    cols = list(rows[0])
    for r in rows[1:]:
        cols += [c for c in r if c not in cols]
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def run_experiment(spec: ExperimentSpec, seed: int, samples: int, threads: int = 1,
                   out: str | Path | None = None) -> tuple[str, dict]:
    """Run ``spec``; write ``<out>.csv`` and ``<out>.json`` when a path is given.

    The CSV holds only data, so it is byte-identical for any thread count;
    timing and provenance go to the JSON sidecar.
    """
    t0 = time.perf_counter()
    text = rows_to_csv(_rows(spec, seed, samples, threads))
    meta = {"kind": spec.kind, "params": spec.params, "seed": seed, "samples": samples,
            "threads": threads, "git_revision": _git_revision(),
            "runtime_s": round(time.perf_counter() - t0, 3)}
    out = out or spec.out
    if out:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.with_suffix(".csv").write_text(text)
        out.with_suffix(".json").write_text(json.dumps(meta, indent=1, default=str))
    return text, meta


def coverage_check(q: float, samples: int, reps: int, rng) -> float:
    """Empirical coverage of the Wilson 95% interval on Bernoulli(q) streams."""
    src = _source(rng)
    hit = 0
    for r in range(reps):
        k = int(src.generator(r).binomial(samples, q))
        lo, hi = wilson(k, samples)
        hit += lo <= q <= hi
    return hit / reps


def spec_dict(spec: ExperimentSpec) -> dict:
    return asdict(spec)

"""Passage points and the local arm geometry around them.

A passage point is an enhanced site (closed in the crossing-killed
configuration, opened by sigma inside R_n) lying on the chosen minimal
vertical crossing of S_n.  The crossing is the one returned by a 0-1 BFS
from the top side scanned left to right, exploring neighbours in the order
left, down, up, right, and ending at the left-most bottom site of minimal
cost; that fixed convention makes it unique.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .arms import ABOVE, BELOW, FULL, ArmQuery, arm_event
from .lattice import (Coord, DomainError, ParameterError, SiteConfig, ball, linf_dist,
                      strip_R, strip_S)
from .sdp import chi_mask_bits, r_mask


def _strip(cfg: SiteConfig, n: int) -> np.ndarray:
    s = strip_S(n)
    if cfg.domain.contains_rect(s):
        return np.ascontiguousarray(cfg.bits[s.slices(cfg.domain)])
    return cfg.window(s)


def _mask_from_sites(n: int, sites) -> np.ndarray:
    s = strip_S(n)
    if isinstance(sites, np.ndarray):
        if sites.shape != s.shape:
            raise DomainError("enhanced mask must cover S_n")
        return sites.astype(np.uint8)
    m = np.zeros(s.shape, dtype=np.uint8)
    for x, y in sites:
        if s.contains((x, y)):
            m[y - s.y_min, x - s.x_min] = 1
    return m


def _coords(n: int, flat) -> list[Coord]:
    s = strip_S(n)
    w = s.width
    return [Coord(int(i % w) + s.x_min, int(i // w) + s.y_min) for i in flat]


def min_enhanced_crossing_cost(omega_tilde_delta: SiteConfig, enhanced, n: int):
    """Fewest enhanced sites on an open vertical crossing of S_n, or None."""
    cost, _ = kernels.zero_one_crossing(_strip(omega_tilde_delta, n),
                                        _mask_from_sites(n, enhanced))
    return None if cost < 0 else int(cost)


def leftmost_minimal_crossing(omega_tilde_delta: SiteConfig, enhanced, n: int):
    """The canonical minimal crossing as a top-to-bottom list of sites, or None."""
    cost, path = kernels.zero_one_crossing(_strip(omega_tilde_delta, n),
                                           _mask_from_sites(n, enhanced))
    if cost < 0:
        return None
    return _coords(n, path[::-1])


@dataclass(frozen=True, eq=False)
class PassageSample:
    n: int
    omega: SiteConfig
    sigma: SiteConfig
    omega_tilde: SiteConfig
    omega_tilde_delta: SiteConfig
    enhanced: frozenset
    gamma: tuple | None
    X: frozenset
    cost: int | None
    horizontal: bool = False
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        rec = {"n": self.n, "seed": self.seed, "size": len(self.X),
               "X": sorted([list(p) for p in self.X]), "cost": self.cost,
               "gamma_length": None if self.gamma is None else len(self.gamma)}
        return json.dumps(rec)


def passage_arrays(om: np.ndarray, sg: np.ndarray, n: int):
    """Array pipeline on S_n: returns (tilde, tilde_delta, enhanced, crosses_h, cost, path)."""
    chi = chi_mask_bits(om)
    horizontal = bool(chi.any())
    til = (1 - _dilate(chi)).astype(np.uint8)
    rm = r_mask(n)
    tdel = til | (sg & rm)
    enh = (rm & (1 - til) & tdel).astype(np.uint8)
    cost, path = kernels.zero_one_crossing(tdel, enh)
    return til, tdel, enh, horizontal, int(cost), path


def _dilate(m):
    out = m.copy()
    out[1:, :] |= m[:-1, :]
    out[:-1, :] |= m[1:, :]
    out[:, 1:] |= m[:, :-1]
    out[:, :-1] |= m[:, 1:]
    return out


def passage_set(omega: SiteConfig, sigma: SiteConfig, n: int, seed=None) -> PassageSample:
    """Run chi -> tilde -> enhanced tilde -> crossing -> passage points."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    s = strip_S(n)
    om = _strip(omega, n)
    sg = _strip(sigma, n)
    til, tdel, enh, horizontal, cost, path = passage_arrays(om, sg, n)
    ys, xs = np.nonzero(enh)
    enhanced = frozenset(Coord(int(x) + s.x_min, int(y) + s.y_min) for x, y in zip(xs, ys))
    if cost < 0:
        gamma = None
        X = frozenset()
        c = None
    else:
        gamma = tuple(_coords(n, path[::-1]))
        c = cost
        X = frozenset(p for p in gamma if p in enhanced) if horizontal else frozenset()
    return PassageSample(n, omega, sigma, SiteConfig(s, til), SiteConfig(s, tdel), enhanced,
                         gamma, X, c, horizontal, seed)


# --------------------------------------------------------------------------- geometry

@dataclass(frozen=True)
class EventGeometry:
    u: Coord
    v: Coord
    r: int
    R: int
    r_prime: int
    R_prime: int


def diam(A) -> int:
    A = list(A)
    return max((linf_dist(a, b) for a in A for b in A), default=0)


def _sup_ball_inside(center, allowed, limit: int) -> int | None:
    """Largest s <= limit with B_s(center) inside ``allowed`` (None if even s=0 fails)."""
    cx, cy = center
    if (cx, cy) not in allowed:
        return None
    s = 0
    while s < limit:
        t = s + 1
        ring = [(cx + dx, cy + dy) for dx in range(-t, t + 1) for dy in range(-t, t + 1)
                if max(abs(dx), abs(dy)) == t]
        if not all(p in allowed for p in ring):
            break
        s = t
    return s


def event_geometry(A, B, n: int) -> EventGeometry:
    """Centres and radii attached to a pair A subset of B (n/2 read as floor(n/2))."""
    A = {Coord(*a) for a in A}
    B = {Coord(*b) for b in B}
    rn = strip_R(n)
    if not A or not A <= B:
        raise ParameterError("need nonempty A contained in B")
    if not any(rn.contains(a) for a in A) or not any(rn.contains(b) for b in B):
        raise ParameterError("A and B must intersect R_n")
    half = n // 2
    r = math.ceil(diam(A) / 2)
    xs = [a.x for a in A]
    ys = [a.y for a in A]
    u = Coord(max(xs) - r, max(ys) - r)
    v = Coord(u.x, 0) if abs(u.y) <= n / 2 else Coord(u.x, n)
    s_n = strip_S(n)
    in_both = {b for b in B if s_n.contains(b)}
    sup = _sup_ball_inside(u, in_both, len(B) + 1)
    R = r if sup is None else max(sup, r)
    r_prime = min(linf_dist(u, v) + R, half)
    sup_v = _sup_ball_inside(v, B, len(B) + 1)
    R_prime = r_prime if sup_v is None else max(min(sup_v, half), r_prime)
    return EventGeometry(u, v, r, R, r_prime, R_prime)


# --------------------------------------------------------------------------- lemma

def lemma_case(sample: PassageSample, u, r: int, R: int) -> str:
    """Which part of the six/four-arm lemma applies, validating its premises."""
    n = sample.n
    u = Coord(*u)
    if r < 0 or r > R:
        raise ParameterError("need 0 <= r <= R")
    s = strip_S(n)
    if s.contains_rect(ball(u, R)):
        case = "six"
    elif u.y in (0, n) and R <= n // 2:
        case = "four"
    else:
        raise ParameterError("B_R(u) must lie in S_n, or u on a long side with R <= n/2")
    dists = [linf_dist(u, x) for x in sample.X]
    if not any(d <= r for d in dists):
        raise ParameterError("B_r(u) holds no passage point")
    if any(r < d <= R for d in dists):
        raise ParameterError("B_R(u) \\ B_r(u) holds a passage point")
    return case


def lemma_query(sample: PassageSample, u, r: int, R: int, normalize: bool = True) -> ArmQuery:
    case = lemma_case(sample, u, r, R)
    u = Coord(*u)
    if case == "six":
        return ArmQuery(u, r, R, "Arm6", FULL, allow_defect=True, normalize=normalize)
    variant = ABOVE if u.y == 0 else BELOW
    return ArmQuery(u, r, R, "Arm4hp", variant, allow_defect=True, normalize=normalize)


def verify_lemma_arms(sample: PassageSample, u, r: int, R: int, normalize: bool = True) -> bool:
    """Defected six-arm (interior) or half-plane four-arm (boundary) verdict on omega."""
    return arm_event(sample.omega, lemma_query(sample, u, r, R, normalize))


def composite_event(sample: PassageSample, A, B) -> bool:
    """The event E(A, B): defected six arms around u and half-plane four arms around v."""
    g = event_geometry(A, B, sample.n)
    six = ArmQuery(g.u, g.r, g.R, "Arm6", FULL, allow_defect=True)
    variant = ABOVE if g.v.y == 0 else BELOW
    four = ArmQuery(g.v, g.r_prime, g.R_prime, "Arm4hp", variant, allow_defect=True)
    return arm_event(sample.omega, six) and arm_event(sample.omega, four)


def harvest_instances(sample: PassageSample, rng: np.random.Generator, per_point: int = 2,
                      boundary: bool = True):
    """Random admissible (u, r, R) triples for the lemma from one sample.

    For an interior centre u near a passage point, r is the distance to some
    passage point and R the largest radius keeping B_R(u) in S_n and free of
    further passage points.  Boundary centres are projections onto y = 0 or
    y = n with R <= n/2.
    """
    n = sample.n
    X = sorted(sample.X)
    if not X:
        return []
    s = strip_S(n)
    out = []
    for x in X:
        for _ in range(per_point):
            # interior centre
            ux = x.x + int(rng.integers(-2, 3))
            uy = int(rng.integers(0, n + 1))
            u = Coord(ux, uy)
            rmax = min(u.y - s.y_min, s.y_max - u.y, u.x - s.x_min, s.x_max - u.x)
            tri = _radii(u, X, rmax)
            if tri is not None:
                out.append((u, *tri))
            if boundary:
                u = Coord(x.x + int(rng.integers(-2, 3)), 0 if rng.random() < 0.5 else n)
                tri = _radii(u, X, n // 2)
                if tri is not None:
                    out.append((u, *tri))
    return out


def _radii(u, X, rmax):
    if rmax < 0:
        return None
    ds = sorted({linf_dist(u, x) for x in X})
    r = ds[0]
    if r > rmax:
        return None
    nxt = next((d for d in ds if d > r), None)
    R = rmax if nxt is None else min(nxt - 1, rmax)
    return (r, R) if R >= r else None

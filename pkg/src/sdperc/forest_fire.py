"""The N-parameter forest-fire process on a finite box.

Sites open at rate 1; as soon as an opening creates an open cluster of size
at least N (sites by default, or L-infinity diameter) the whole cluster
burns, i.e. closes, and its sites restart their exponential clocks.
Boundary conditions are free.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .lattice import (Coord, DomainError, ParameterError, RandomSource, Rect, SiteConfig,
                      ball)

SITES = "sites"
DIAMETER = "diameter"


@dataclass(frozen=True)
class FireEvent:
    time: float
    cluster_size: int
    bbox: Rect
    sites: frozenset

    def touches(self, m: int, center=(0, 0)) -> bool:
        b = ball(center, m)
        if self.bbox.intersect(b) is None:
            return False
        return any(b.contains(s) for s in self.sites)


@dataclass(frozen=True, eq=False)
class FireLog:
    box: Rect
    N: int
    t_max: float
    events: tuple
    final: SiteConfig
    max_cluster: int
    size_metric: str = SITES

    def overshoot_ok(self) -> bool:
        """Largest cluster ever formed respects the single-opening bound 4(N-1)+1."""
        if self.size_metric != SITES:
            return True
        return self.max_cluster <= 4 * (self.N - 1) + 1

    def to_jsonl(self, radii=(), center=(0, 0)) -> str:
        lines = []
        for e in self.events:
            b = e.bbox
            rec = {"time": e.time, "size": e.cluster_size,
                   "bbox": [b.x_min, b.x_max, b.y_min, b.y_max],
                   "touches": {str(m): e.touches(m, center) for m in radii}}
            lines.append(json.dumps(rec))
        return "\n".join(lines) + ("\n" if lines else "")


def _seed_of(rng, index: int) -> int:
    if isinstance(rng, RandomSource):
        gen = rng.generator(index)
    elif isinstance(rng, np.random.Generator):
        gen = rng
    else:
        gen = RandomSource(int(rng)).generator(index)
    return int(gen.integers(0, 2 ** 31 - 1))


def simulate(box: Rect, N: int, t_max: float, rng, index: int = 0,
             size_metric: str = SITES, max_events: int = 10 ** 7) -> FireLog:
    """Run one trajectory up to time ``t_max``; deterministic given (rng, index)."""
    if N < 2:
        raise ParameterError("threshold N must be >= 2")
    if not t_max > 0:
        raise ParameterError("t_max must be positive")
    if size_metric not in (SITES, DIAMETER):
        raise ParameterError(f"unknown size metric {size_metric!r}")
    h, w = box.shape
    times, sizes, bb, ptr, sites, state, max_size, ne = kernels.forest_fire(
        h, w, N, float(t_max), _seed_of(rng, index), size_metric == DIAMETER, max_events)
    events = []
    for e in range(ne):
        flat = sites[ptr[e]:ptr[e + 1]]
        pts = frozenset(Coord(int(i % w) + box.x_min, int(i // w) + box.y_min) for i in flat)
        r = Rect(int(bb[e, 0]) + box.x_min, int(bb[e, 1]) + box.x_min,
                 int(bb[e, 2]) + box.y_min, int(bb[e, 3]) + box.y_min)
        events.append(FireEvent(float(times[e]), int(sizes[e]), r, pts))
    final = SiteConfig(box, state.reshape(h, w).astype(np.uint8))
    return FireLog(box, N, float(t_max), tuple(events), final, int(max_size), size_metric)


def fires_in_ball(log: FireLog, m: int, t: float, center=(0, 0)) -> int:
    """Number of fires up to time ``t`` whose burned cluster meets B_m(center)."""
    if not log.box.contains_rect(ball(center, m)):
        raise DomainError(f"B_{m} not inside {log.box}")
    return sum(1 for e in log.events if e.time <= t and e.touches(m, center))


def first_fire_time(log: FireLog) -> float:
    return log.events[0].time if log.events else math.inf


def critical_time(pc: float) -> float:
    """t_c with 1 - exp(-t_c) = p_c."""
    if not 0.0 < pc < 1.0:
        raise ParameterError("p_c must lie in (0, 1)")
    return -math.log1p(-pc)

"""Cluster labeling, crossings and annulus circuits.

Open sites use primal (4-neighbour) adjacency and closed sites the matching
(8-neighbour) adjacency, which makes the two notions exactly dual.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import kernels
from .lattice import (MATCHING, PRIMAL, Coord, DomainError, ParameterError, Rect,
                      SiteConfig, ball)

OPEN = "open"
CLOSED = "closed"
HORIZONTAL = "horizontal"
VERTICAL = "vertical"


def _diag(adjacency: str) -> bool:
    if adjacency == PRIMAL:
        return False
    if adjacency == MATCHING:
        return True
    raise ParameterError(f"unknown adjacency {adjacency!r}")


def polarity_mask(config: SiteConfig, region: Rect, polarity: str) -> np.ndarray:
    """uint8 array over ``region``: 1 where the site has the given polarity."""
    if not config.domain.contains_rect(region):
        raise DomainError(f"{region} not inside {config.domain}")
    vals = config.bits[region.slices(config.domain)]
    if polarity == OPEN:
        return np.ascontiguousarray(vals)
    if polarity == CLOSED:
        return (1 - vals).astype(np.uint8)
    raise ParameterError(f"unknown polarity {polarity!r}")


@dataclass(frozen=True, eq=False)
class ClusterLabels:
    """Cluster labels of one polarity on a region; -1 marks other sites."""

    region: Rect
    adjacency: str
    polarity: str
    labels: np.ndarray
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.sizes)

    def label_of(self, c) -> int:
        if not self.region.contains(c):
            return -1
        return int(self.labels[c[1] - self.region.y_min, c[0] - self.region.x_min])

    def connected(self, a, b) -> bool:
        la = self.label_of(a)
        return la >= 0 and la == self.label_of(b)

    def sites(self, label: int) -> set[Coord]:
        ys, xs = np.nonzero(self.labels == label)
        return {Coord(int(x) + self.region.x_min, int(y) + self.region.y_min)
                for x, y in zip(xs, ys)}

    def bounding_boxes(self) -> np.ndarray:
        """Array of shape (count, 4): x_min, x_max, y_min, y_max per label."""
        out = np.empty((self.count, 4), dtype=np.int64)
        out[:, 0] = out[:, 2] = np.iinfo(np.int64).max
        out[:, 1] = out[:, 3] = np.iinfo(np.int64).min
        ys, xs = np.nonzero(self.labels >= 0)
        lab = self.labels[ys, xs]
        xs = xs + self.region.x_min
        ys = ys + self.region.y_min
        np.minimum.at(out[:, 0], lab, xs)
        np.maximum.at(out[:, 1], lab, xs)
        np.minimum.at(out[:, 2], lab, ys)
        np.maximum.at(out[:, 3], lab, ys)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "size", "x_min", "x_max", "y_min", "y_max"])
        for lab, (size, bb) in enumerate(zip(self.sizes, self.bounding_boxes())):
            w.writerow([lab, int(size), *map(int, bb)])
        return buf.getvalue()


def label_clusters(config: SiteConfig, region: Rect, adjacency: str = PRIMAL,
                   polarity: str = OPEN) -> ClusterLabels:
    mask = polarity_mask(config, region, polarity)
    labels, sizes = kernels.label_components(mask, _diag(adjacency))
    labels.setflags(write=False)
    sizes.setflags(write=False)
    return ClusterLabels(region, adjacency, polarity, labels, sizes)


def crosses_mask(mask: np.ndarray, direction: str, diag: bool) -> bool:
    if direction == HORIZONTAL:
        return bool(kernels.crosses_lr(mask, diag))
    if direction == VERTICAL:
        return bool(kernels.crosses_lr(np.ascontiguousarray(mask.T), diag))
    raise ParameterError(f"unknown direction {direction!r}")


def crosses(config: SiteConfig, rect: Rect, direction: str = HORIZONTAL,
            polarity: str = OPEN, adjacency: str = PRIMAL) -> bool:
    """Whether ``rect`` is crossed in ``direction`` by a path of the given polarity.

    The sides are the extreme columns (horizontal) or rows (vertical) of sites.
    """
    return crosses_mask(polarity_mask(config, rect, polarity), direction, _diag(adjacency))


def _site_mask(region: Rect, sites) -> np.ndarray:
    m = np.zeros(region.shape, dtype=np.uint8)
    for x, y in sites:
        if region.contains((x, y)):
            m[y - region.y_min, x - region.x_min] = 1
    return m


def connected_in(config: SiteConfig, region: Rect, A, B, polarity: str = OPEN,
                 adjacency: str = PRIMAL) -> bool:
    """Whether some site of A is joined to some site of B inside ``region``."""
    mask = polarity_mask(config, region, polarity)
    seen = kernels.reach(mask, _site_mask(region, A), _diag(adjacency))
    return bool((seen & _site_mask(region, B)).any())


def ring_mask(size: int, radius: int) -> np.ndarray:
    """Sites at L-infinity distance exactly ``radius`` from the centre of a size x size window."""
    c = (size - 1) // 2
    yy, xx = np.mgrid[0:size, 0:size]
    return (np.maximum(abs(xx - c), abs(yy - c)) == radius).astype(np.uint8)


def dist_grid(size: int) -> np.ndarray:
    c = (size - 1) // 2
    yy, xx = np.mgrid[0:size, 0:size]
    return np.maximum(abs(xx - c), abs(yy - c))


def has_open_circuit(config: SiteConfig, n: int, center=(0, 0)) -> bool:
    """Whether an open primal circuit in Ann(n, 2n) surrounds B_{n-1}.

    Decided by duality: there is such a circuit iff no closed matching path
    inside the annulus joins its inner ring (distance n) to its outer ring
    (distance 2n).
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    outer = ball(center, 2 * n)
    if not config.domain.contains_rect(outer):
        raise DomainError(f"B_2n {outer} not inside {config.domain}")
    closed = polarity_mask(config, outer, CLOSED)
    d = dist_grid(outer.width)
    closed = closed * (d >= n)
    seen = kernels.reach(closed.astype(np.uint8), (d == n).astype(np.uint8), True)
    return not bool((seen & (d == 2 * n)).any())


def framed_rects(n: int) -> tuple[Rect, Rect, Rect, Rect]:
    """The four 6n x n rectangles (bottom, top, left, right) around B_n."""
    return (Rect(-3 * n, 3 * n, -2 * n, -n), Rect(-3 * n, 3 * n, n, 2 * n),
            Rect(-2 * n, -n, -3 * n, 3 * n), Rect(n, 2 * n, -3 * n, 3 * n))


def framed_circuit_event(config: SiteConfig, n: int) -> bool:
    """Horizontal crossings of the bottom and top rectangles and vertical
    crossings of the left and right ones."""
    sb, st, sl, sr = framed_rects(n)
    for r in (sb, st, sl, sr):
        if not config.domain.contains_rect(r):
            raise DomainError(f"{r} not inside {config.domain}")
    return (crosses(config, sb, HORIZONTAL) and crosses(config, st, HORIZONTAL)
            and crosses(config, sl, VERTICAL) and crosses(config, sr, VERTICAL))

"""Lattice geometry, site configurations and seeded randomness on Z^2.

Arrays are indexed ``[y - y_min, x - x_min]`` so that a row-major flattening
starts at ``(x_min, y_min)`` and runs along x first.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np


class ParameterError(ValueError):
    """Raised when a numeric parameter is outside its admissible range."""


class DomainError(ValueError):
    """Raised when a region does not fit inside a configuration's domain."""


class Coord(NamedTuple):
    x: int
    y: int


PRIMAL = "primal"
MATCHING = "matching"

_PRIMAL_STEPS = ((1, 0), (0, 1), (-1, 0), (0, -1))
_MATCHING_STEPS = _PRIMAL_STEPS + ((1, 1), (-1, 1), (-1, -1), (1, -1))


def _steps(adjacency: str):
    if adjacency == PRIMAL:
        return _PRIMAL_STEPS
    if adjacency == MATCHING:
        return _MATCHING_STEPS
    raise ParameterError(f"unknown adjacency {adjacency!r}")


@dataclass(frozen=True)
class Rect:
    """Inclusive integer rectangle ``[x_min, x_max] x [y_min, y_max]``."""

    x_min: int
    x_max: int
    y_min: int
    y_max: int

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ParameterError(f"empty rectangle {self}")

    @property
    def width(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def height(self) -> int:
        return self.y_max - self.y_min + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def contains(self, c) -> bool:
        return self.x_min <= c[0] <= self.x_max and self.y_min <= c[1] <= self.y_max

    def contains_rect(self, other: "Rect") -> bool:
        return (self.x_min <= other.x_min and other.x_max <= self.x_max
                and self.y_min <= other.y_min and other.y_max <= self.y_max)

    def intersect(self, other: "Rect") -> "Rect | None":
        x0, x1 = max(self.x_min, other.x_min), min(self.x_max, other.x_max)
        y0, y1 = max(self.y_min, other.y_min), min(self.y_max, other.y_max)
        if x0 > x1 or y0 > y1:
            return None
        return Rect(x0, x1, y0, y1)

    def sites(self) -> Iterable[Coord]:
        for y in range(self.y_min, self.y_max + 1):
            for x in range(self.x_min, self.x_max + 1):
                yield Coord(x, y)

    def slices(self, inside: "Rect") -> tuple[slice, slice]:
        """Array slices selecting ``self`` within an array laid out over ``inside``."""
        if not inside.contains_rect(self):
            raise DomainError(f"{self} not contained in {inside}")
        return (slice(self.y_min - inside.y_min, self.y_max - inside.y_min + 1),
                slice(self.x_min - inside.x_min, self.x_max - inside.x_min + 1))

    def shifted(self, dx: int, dy: int) -> "Rect":
        return Rect(self.x_min + dx, self.x_max + dx, self.y_min + dy, self.y_max + dy)


def box(m: int, n: int) -> Rect:
    """``Box(m, n) = [0, m] x [0, n]``."""
    return Rect(0, m, 0, n)


def strip_S(n: int) -> Rect:
    return Rect(-3 * n, 3 * n, 0, n)


def strip_R(n: int) -> Rect:
    return Rect(-2 * n, 2 * n, 0, n)


def linf_dist(a, b) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def ball(center, radius: int) -> Rect:
    if radius < 0:
        raise ParameterError("radius must be non-negative")
    cx, cy = center
    return Rect(cx - radius, cx + radius, cy - radius, cy + radius)


def neighbors(c, adjacency: str = PRIMAL) -> list[Coord]:
    return [Coord(c[0] + dx, c[1] + dy) for dx, dy in _steps(adjacency)]


def outer_boundary(A, adjacency: str = PRIMAL) -> set[Coord]:
    A = {Coord(*a) for a in A}
    out = set()
    for a in A:
        for b in neighbors(a, adjacency):
            if b not in A:
                out.add(b)
    return out


def internal_boundary(A, adjacency: str = PRIMAL) -> set[Coord]:
    """Sites of ``A`` with a neighbour outside ``A`` (the boundary of the complement)."""
    A = {Coord(*a) for a in A}
    return {a for a in A if any(b not in A for b in neighbors(a, adjacency))}


@dataclass(frozen=True)
class RandomSource:
    """A (seed, stream) pair; each sample index gets its own independent generator.

    Generators come from ``numpy.random.SeedSequence`` with ``spawn_key =
    (stream_id, index)``, so results do not depend on how samples are
    scheduled across workers.
    """

    seed: int
    stream_id: int = 0

    def generator(self, index: int = 0) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed & ((1 << 64) - 1),
                                    spawn_key=(self.stream_id & ((1 << 64) - 1), index))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, stream_id: int) -> "RandomSource":
        return RandomSource(self.seed, stream_id)


@dataclass(frozen=True, eq=False)
class SiteConfig:
    """Immutable open (1) / closed (0) assignment over a rectangle.

    Sites outside ``domain`` read as ``outside`` (closed unless stated).
    """

    domain: Rect
    bits: np.ndarray
    outside: int = 0

    def __post_init__(self):
        arr = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if arr.shape != self.domain.shape:
            raise DomainError(f"bits shape {arr.shape} != domain shape {self.domain.shape}")
        if arr.size and arr.max() > 1:
            arr = (arr != 0).astype(np.uint8)
        arr = arr.copy() if arr is self.bits else arr
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @classmethod
    def filled(cls, domain: Rect, value: int, outside: int = 0) -> "SiteConfig":
        return cls(domain, np.full(domain.shape, 1 if value else 0, dtype=np.uint8), outside)

    @classmethod
    def from_sites(cls, domain: Rect, open_sites, outside: int = 0) -> "SiteConfig":
        arr = np.zeros(domain.shape, dtype=np.uint8)
        for x, y in open_sites:
            if domain.contains((x, y)):
                arr[y - domain.y_min, x - domain.x_min] = 1
        return cls(domain, arr, outside)

    def __getitem__(self, c) -> int:
        x, y = c
        d = self.domain
        if d.contains((x, y)):
            return int(self.bits[y - d.y_min, x - d.x_min])
        return self.outside

    def __eq__(self, other):
        if not isinstance(other, SiteConfig):
            return NotImplemented
        return (self.domain == other.domain and self.outside == other.outside
                and np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.domain, self.outside, self.bits.tobytes()))

    def window(self, rect: Rect) -> np.ndarray:
        """Values on ``rect`` (which may stick out of the domain) as a fresh array."""
        out = np.full(rect.shape, self.outside, dtype=np.uint8)
        inter = rect.intersect(self.domain)
        if inter is not None:
            out[inter.slices(rect)] = self.bits[inter.slices(self.domain)]
        return out

    def restrict(self, rect: Rect) -> "SiteConfig":
        return SiteConfig(rect, self.window(rect), self.outside)

    def open_sites(self) -> set[Coord]:
        ys, xs = np.nonzero(self.bits)
        return {Coord(int(x) + self.domain.x_min, int(y) + self.domain.y_min)
                for x, y in zip(xs, ys)}

    def with_values(self, values: dict) -> "SiteConfig":
        arr = self.bits.copy()
        d = self.domain
        for (x, y), v in values.items():
            if not d.contains((x, y)):
                raise DomainError(f"{(x, y)} outside {d}")
            arr[y - d.y_min, x - d.x_min] = 1 if v else 0
        return SiteConfig(d, arr, self.outside)

    def complement(self) -> "SiteConfig":
        return SiteConfig(self.domain, 1 - self.bits, 1 - self.outside)

    # serialization: b"SCFG" | version u8 | outside u8 | 4 x int32 bounds | packed bits
    _MAGIC = b"SCFG"

    def to_bytes(self) -> bytes:
        d = self.domain
        head = self._MAGIC + struct.pack("<BB4i", 1, self.outside, d.x_min, d.x_max,
                                         d.y_min, d.y_max)
        return head + np.packbits(self.bits.ravel(), bitorder="little").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "SiteConfig":
        if data[:4] != cls._MAGIC:
            raise ValueError("not a SiteConfig record")
        version, outside, x0, x1, y0, y1 = struct.unpack_from("<BB4i", data, 4)
        if version != 1:
            raise ValueError(f"unsupported version {version}")
        d = Rect(x0, x1, y0, y1)
        raw = np.frombuffer(data, dtype=np.uint8, offset=4 + struct.calcsize("<BB4i"))
        bits = np.unpackbits(raw, bitorder="little")[: d.area].reshape(d.shape)
        return cls(d, bits, outside)


def uniforms(domain: Rect, rng: np.random.Generator) -> np.ndarray:
    return rng.random(domain.shape)


def sample_config(domain: Rect, p: float, rng, index: int = 0) -> SiteConfig:
    """Bernoulli(p) site configuration; ``rng`` is a RandomSource or a Generator."""
    check_probability(p, "p")
    gen = rng.generator(index) if isinstance(rng, RandomSource) else rng
    return SiteConfig(domain, (gen.random(domain.shape) < p).astype(np.uint8))


def check_probability(p: float, name: str = "p") -> None:
    if not (0.0 <= p <= 1.0):
        raise ParameterError(f"{name}={p} outside [0, 1]")


def overlay(base: SiteConfig, mask: SiteConfig) -> SiteConfig:
    """Pointwise OR of ``mask`` onto ``base`` over ``base.domain``.

    Sites of ``base.domain`` outside ``mask.domain`` read ``mask.outside``.
    """
    if base.domain.intersect(mask.domain) is None:
        raise DomainError("overlay domains do not overlap")
    return SiteConfig(base.domain, base.bits | mask.window(base.domain),
                      base.outside | mask.outside)


def ring_sites(center, radius: int) -> list[Coord]:
    """Sites at L-infinity distance exactly ``radius`` in counter-clockwise order,
    starting at ``center + (radius, 0)``."""
    cx, cy = center
    if radius == 0:
        return [Coord(cx, cy)]
    r = radius
    out = []
    for y in range(0, r + 1):
        out.append(Coord(cx + r, cy + y))
    for x in range(r - 1, -r - 1, -1):
        out.append(Coord(cx + x, cy + r))
    for y in range(r - 1, -r - 1, -1):
        out.append(Coord(cx - r, cy + y))
    for x in range(-r + 1, r + 1):
        out.append(Coord(cx + x, cy - r))
    for y in range(-r + 1, 0):
        out.append(Coord(cx + r, cy + y))
    return out

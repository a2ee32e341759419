"""Configuration transforms of self-destructive percolation.

``omega_bar`` burns the clusters reaching a horizon box (the finite-volume
stand-in for infinite clusters), ``tilde_config`` kills the horizontal
crossing clusters of the strip S_n together with their boundary, and
``check_config`` closes every cluster carrying an open circuit of Ann(n, 2n).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .clusters import dist_grid
from .lattice import (Coord, DomainError, ParameterError, RandomSource, Rect, SiteConfig,
                      ball, check_probability, overlay, strip_R, strip_S)


def _edge_mask(shape) -> np.ndarray:
    m = np.zeros(shape, dtype=np.uint8)
    m[0, :] = m[-1, :] = 1
    m[:, 0] = m[:, -1] = 1
    return m


def burn_mask(bits: np.ndarray) -> np.ndarray:
    """Open cells whose primal cluster touches the array border."""
    return kernels.reach(bits, _edge_mask(bits.shape), False)


def burn_boundary_clusters(config: SiteConfig, horizon: Rect) -> SiteConfig:
    """Close the open clusters (within ``horizon``) touching its internal boundary."""
    if not config.domain.contains_rect(horizon):
        raise DomainError(f"horizon {horizon} not inside {config.domain}")
    sl = horizon.slices(config.domain)
    bits = config.bits.copy()
    bits[sl] &= 1 - burn_mask(np.ascontiguousarray(bits[sl]))
    return SiteConfig(config.domain, bits, config.outside)


@dataclass(frozen=True, eq=False)
class SdpSample:
    p: float
    delta: float
    horizon: Rect
    omega: SiteConfig
    sigma: SiteConfig
    omega_bar: SiteConfig
    omega_bar_delta: SiteConfig

    def dump(self, stem, n: int | None = None, seed: int | None = None,
             stream: int | None = None) -> None:
        """Write the four bitmaps as ``stem.<name>.bin`` plus a ``stem.json`` sidecar."""
        stem = Path(stem)
        for name in ("omega", "sigma", "omega_bar", "omega_bar_delta"):
            stem.with_suffix(f".{name}.bin").write_bytes(getattr(self, name).to_bytes())
        meta = {"p": self.p, "delta": self.delta, "n": n, "seed": seed, "stream": stream,
                "horizon": [self.horizon.x_min, self.horizon.x_max,
                            self.horizon.y_min, self.horizon.y_max]}
        stem.with_suffix(".json").write_text(json.dumps(meta, indent=1))


def sdp_from_uniforms(u: np.ndarray, v: np.ndarray, p: float, delta: float,
                      horizon: Rect) -> SdpSample:
    """Coupled construction: omega = {u < p}, sigma = {v < delta}."""
    omega = SiteConfig(horizon, (u < p).astype(np.uint8))
    sigma = SiteConfig(horizon, (v < delta).astype(np.uint8))
    bar = burn_boundary_clusters(omega, horizon)
    return SdpSample(p, delta, horizon, omega, sigma, bar, overlay(bar, sigma))


def sdp_sample(p: float, delta: float, horizon: Rect, rng, index: int = 0) -> SdpSample:
    check_probability(p, "p")
    check_probability(delta, "delta")
    gen = rng.generator(index) if isinstance(rng, RandomSource) else rng
    u = gen.random(horizon.shape)
    v = gen.random(horizon.shape)
    return sdp_from_uniforms(u, v, p, delta, horizon)


# --------------------------------------------------------------------------- strip

def _strip_bits(omega: SiteConfig, n: int) -> np.ndarray:
    if n < 1:
        raise ParameterError("n must be >= 1")
    s = strip_S(n)
    if not omega.domain.contains_rect(s):
        raise DomainError(f"S_n {s} not inside {omega.domain}")
    return np.ascontiguousarray(omega.bits[s.slices(omega.domain)])


def chi_mask_bits(bits: np.ndarray) -> np.ndarray:
    """Open cells joined inside the array to both its first and last column."""
    h, w = bits.shape
    left = np.zeros((h, w), dtype=np.uint8)
    left[:, 0] = 1
    right = np.zeros((h, w), dtype=np.uint8)
    right[:, -1] = 1
    return kernels.reach(bits, left, False) & kernels.reach(bits, right, False)


def primal_dilate(m: np.ndarray) -> np.ndarray:
    """``m`` together with its primal outer boundary (within the array)."""
    out = m.copy()
    out[1:, :] |= m[:-1, :]
    out[:-1, :] |= m[1:, :]
    out[:, 1:] |= m[:, :-1]
    out[:, :-1] |= m[:, 1:]
    return out


def chi_set(omega: SiteConfig, n: int) -> set[Coord]:
    s = strip_S(n)
    chi = chi_mask_bits(_strip_bits(omega, n))
    ys, xs = np.nonzero(chi)
    return {Coord(int(x) + s.x_min, int(y) + s.y_min) for x, y in zip(xs, ys)}


def tilde_bits(strip_bits: np.ndarray) -> np.ndarray:
    """0 on chi and its primal boundary, 1 elsewhere (array over S_n)."""
    return (1 - primal_dilate(chi_mask_bits(strip_bits))).astype(np.uint8)


def tilde_config(omega: SiteConfig, n: int) -> SiteConfig:
    """The crossing-killed configuration on S_n (closed outside S_n).

    Only the part of the boundary of chi inside S_n matters, as the result
    is 0 outside S_n anyway.
    """
    return SiteConfig(strip_S(n), tilde_bits(_strip_bits(omega, n)), 0)


def r_mask(n: int) -> np.ndarray:
    """Indicator of R_n inside the S_n array."""
    s, r = strip_S(n), strip_R(n)
    m = np.zeros(s.shape, dtype=np.uint8)
    m[r.slices(s)] = 1
    return m


def tilde_enhanced(omega_tilde: SiteConfig, sigma: SiteConfig, n: int) -> SiteConfig:
    """OR ``sigma`` into ``omega_tilde`` on R_n only."""
    s = strip_S(n)
    if not omega_tilde.domain.contains_rect(s):
        raise DomainError(f"S_n {s} not inside {omega_tilde.domain}")
    base = omega_tilde.window(s)
    sig = sigma.window(s)
    bits = base | (sig & r_mask(n))
    if omega_tilde.domain == s:
        return SiteConfig(s, bits, omega_tilde.outside)
    full = omega_tilde.bits.copy()
    full[s.slices(omega_tilde.domain)] = bits
    return SiteConfig(omega_tilde.domain, full, omega_tilde.outside)


# --------------------------------------------------------------------------- circuits

def circuit_clusters_mask(omega: SiteConfig, n: int, center=(0, 0)) -> np.ndarray:
    """Mask over ``omega.domain`` of the open sites whose cluster (inside the
    domain) contains an open circuit of Ann(n, 2n) around ``center``."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    outer = ball(center, 2 * n)
    d = omega.domain
    if not d.contains_rect(outer):
        raise DomainError(f"B_2n {outer} not inside {d}")
    ann = omega.bits[outer.slices(d)] * (dist_grid(outer.width) >= n)
    lab, winds = kernels.winding_clusters(np.ascontiguousarray(ann, dtype=np.uint8),
                                          2 * n, 2 * n, False)
    seeds_small = np.isin(lab, np.nonzero(winds)[0]) & (lab >= 0)
    if not seeds_small.any():
        return np.zeros(d.shape, dtype=np.uint8)
    seeds = np.zeros(d.shape, dtype=np.uint8)
    seeds[outer.slices(d)] = seeds_small
    return kernels.reach(omega.bits, seeds, False)


def check_config(omega: SiteConfig, n: int, center=(0, 0)) -> SiteConfig:
    """Close every site connected in ``omega`` to an open circuit of Ann(n, 2n).

    Connections are followed inside ``omega.domain``; B_{6n} is the
    customary choice of domain.
    """
    kill = circuit_clusters_mask(omega, n, center)
    return SiteConfig(omega.domain, omega.bits & (1 - kill), omega.outside)

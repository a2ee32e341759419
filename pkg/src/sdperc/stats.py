"""Estimates, Wilson intervals and log-log power-law fits."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

Z95 = float(sps.norm.ppf(0.975))


def wilson(hits: int, samples: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if samples <= 0:
        raise ValueError("samples must be >= 1")
    q = hits / samples
    z2 = z * z
    den = 1.0 + z2 / samples
    mid = (q + z2 / (2 * samples)) / den
    half = z * math.sqrt(q * (1 - q) / samples + z2 / (4 * samples * samples)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


@dataclass(frozen=True)
class Estimate:
    """Point estimate with a 95% interval (Wilson for frequencies)."""

    value: float
    ci_lo: float
    ci_hi: float
    samples: int
    seed: int | None = None
    spec: dict = field(default_factory=dict)
    hits: int | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not (self.ci_lo <= self.value <= self.ci_hi):
            raise ValueError(f"interval [{self.ci_lo}, {self.ci_hi}] misses {self.value}")

    @property
    def stderr(self) -> float:
        """Binomial standard error of a frequency estimate."""
        q = self.value
        return math.sqrt(max(q * (1 - q), 0.0) / self.samples)

    @classmethod
    def from_hits(cls, hits: int, samples: int, seed=None, spec=None) -> "Estimate":
        lo, hi = wilson(hits, samples)
        q = hits / samples
        return cls(q, min(lo, q), max(hi, q), samples, seed, dict(spec or {}), hits)


def fit_power_law(points) -> tuple[float, float]:
    """Weighted least-squares fit of log(value) against log(scale).

    ``points`` holds ``(scale, estimate, (ci_lo, ci_hi))`` tuples.  Weights are
    inverse variances of log(value), taken from the interval half-width.
    Nonpositive estimates are dropped with a warning.  Returns the slope
    magnitude ``-slope`` (the decay exponent) and its standard error.
    """
    xs, ys, ws = [], [], []
    for scale, value, ci in points:
        if value <= 0:
            warnings.warn(f"dropping nonpositive estimate at scale {scale}")
            continue
        lo, hi = ci
        sd = (hi - lo) / (2 * Z95)
        # delta method for log(value)
        sl = sd / value if sd > 0 else 0.0
        xs.append(math.log(scale))
        ys.append(math.log(value))
        ws.append(1.0 / sl ** 2 if sl > 0 else 0.0)
    if len(xs) < 3:
        raise ValueError("need at least 3 positive points")
    x = np.asarray(xs)
    y = np.asarray(ys)
    w = np.asarray(ws)
    if not np.all(w > 0):
        w = np.ones_like(x)
    X = np.column_stack([np.ones_like(x), x])
    W = np.diag(w)
    cov = np.linalg.inv(X.T @ W @ X)
    beta = cov @ X.T @ W @ y
    resid = y - X @ beta
    dof = len(x) - 2
    if dof > 0:
        # scale by the reduced chi-square when it exceeds one
        chi2 = float(resid @ W @ resid) / dof
        cov = cov * max(chi2, 1.0)
    slope = float(beta[1])
    se = float(math.sqrt(max(cov[1, 1], 0.0)))
    return -slope, se

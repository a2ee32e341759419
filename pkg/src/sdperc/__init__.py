"""Self-destructive percolation on the square lattice: configurations,
transforms, arm events, passage points, merger trees and forest fires."""
from .lattice import (Coord, DomainError, ParameterError, RandomSource, Rect, SiteConfig,
                      ball, box, linf_dist, overlay, sample_config, strip_R, strip_S)
from .stats import Estimate, fit_power_law, wilson

__all__ = ["Coord", "DomainError", "ParameterError", "RandomSource", "Rect", "SiteConfig",
           "ball", "box", "linf_dist", "overlay", "sample_config", "strip_R", "strip_S",
           "Estimate", "fit_power_law", "wilson"]
__version__ = "0.1.0"

"""Frequency-content analysis of positional encoders.

The sinusoidal encoder uses geometric frequencies w_k = rho**(-k/d); a
Gaussian kernel density estimate smears these onto the lattice frequency
grid omega_k = 2*pi*k/d (k = 0..d/2) to show how strongly the encoder
concentrates near zero frequency.  The DFT encoder spreads its energy
evenly: weight 1/d at the two endpoint bases and 2/d at every interior
frequency.  Two low-pass summaries quantify the concentration: the
continuous index where w_l crosses the smallest nonzero grid frequency,
and the discrete count of encoder frequencies below it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dft import Lattice
from .encoders import PEConfig

__all__ = [
    "KdeConfig",
    "FrequencyDistribution",
    "kde_distribution",
    "dft_distribution",
    "lowpass_index",
    "lowpass_count",
]


@dataclass(frozen=True)
class KdeConfig:
    """Gaussian bandwidth for smoothing encoder frequencies onto the grid."""

    sigma: float

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"bandwidth sigma must be positive, got {self.sigma}")

    @classmethod
    def from_multiplier(cls, d: int, multiplier: float = 4.0) -> "KdeConfig":
        """Bandwidth as a multiple of the grid spacing 2*pi/d."""
        return cls(sigma=multiplier * 2.0 * np.pi / Lattice(d).d)


@dataclass(frozen=True)
class FrequencyDistribution:
    """Nonnegative weights over the frequency grid omega_k, k = 0..d/2,
    normalized to sum to 1.  normalizer is the constant the raw weights
    were divided by."""

    weights: np.ndarray
    normalizer: float = 1.0

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 3:
            raise ValueError(f"weights must be a vector over the grid, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
        if not self.normalizer > 0:
            raise ValueError(f"normalizer must be positive, got {self.normalizer}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def grid_size(self) -> int:
        return self.weights.size

    @property
    def d(self) -> int:
        """Lattice size the grid belongs to (grid has d/2 + 1 points)."""
        return 2 * (self.weights.size - 1)


def kde_distribution(config: PEConfig, kde: KdeConfig) -> FrequencyDistribution:
    """Gaussian-KDE weights of the sinusoidal encoder frequencies on the grid.

    weight_k is proportional to the sum over l in {0, 2, ..., d-2} of
    exp(-(omega_k - w_l)^2 / (2*sigma^2)), normalized to sum to 1.
    """
    d, rho = config.d, config.rho
    grid = config.lattice.frequencies
    w = rho ** (-np.arange(0, d, 2) / d)
    sq = (grid[:, np.newaxis] - w[np.newaxis, :]) ** 2
    raw = np.exp(-sq / (2.0 * kde.sigma**2)).sum(axis=1)
    normalizer = raw.sum()
    return FrequencyDistribution(raw / normalizer, normalizer=float(normalizer))


def dft_distribution(lattice: Lattice) -> FrequencyDistribution:
    """Per-frequency energy of the DFT encoder: 1/d at the endpoints
    (frequencies 0 and pi), 2/d at each interior frequency."""
    d = lattice.d
    weights = np.full(d // 2 + 1, 2.0 / d)
    weights[0] = 1.0 / d
    weights[-1] = 1.0 / d
    return FrequencyDistribution(weights, normalizer=1.0)


def lowpass_index(d: int, rho: float) -> float:
    """Continuous index l where the encoder frequency rho**(-l/d) equals the
    smallest nonzero grid frequency 2*pi/d."""
    if not d > 2.0 * np.pi:
        raise ValueError(f"lattice size must exceed 2*pi for a positive index, got {d}")
    if not rho > 0 or rho == 1.0:
        raise ValueError(f"frequency base rho must be positive and != 1, got {rho}")
    return d * np.log(d / (2.0 * np.pi)) / np.log(rho)


def lowpass_count(config: PEConfig, threshold: float | None = None) -> int:
    """Number of encoder frequencies w_l, l in {0, 2, ..., d-2}, strictly
    below the threshold (default: the smallest nonzero grid frequency)."""
    d, rho = config.d, config.rho
    if threshold is None:
        threshold = 2.0 * np.pi / d
    w = rho ** (-np.arange(0, d, 2) / d)
    return int(np.count_nonzero(w < threshold))

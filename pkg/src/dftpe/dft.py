"""Real discrete Fourier transform on an even d-point lattice.

The basis on the lattice t = 0..d-1 consists of the constant function,
K = d/2 - 1 cosine/sine pairs at frequencies omega_k = 2*pi*k/d, and the
alternating-sign function cos(pi*t).  All d basis functions are unit norm
and mutually orthogonal, so the forward transform (projection onto the
basis) and the inverse transform (expansion in the basis) are exact
inverses and preserve the Euclidean norm.

Coefficients are stored in the canonical order

    [a_0, a_1, ..., a_K, b_1, ..., b_K, b_0]

where a_k multiplies the cosine at omega_k, b_k the sine at omega_k,
a_0 the constant, and b_0 the cos(pi*t) term.  Index l of a coefficient
vector always refers to basis function l in this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "Lattice",
    "Signal",
    "Spectrum",
    "basis_value",
    "basis_matrix",
    "dft_forward",
    "dft_inverse",
    "gram_matrix",
    "one_hot",
]


@dataclass(frozen=True)
class Lattice:
    """One-dimensional lattice t = 0..d-1 with d even and d >= 4."""

    d: int

    def __post_init__(self) -> None:
        if not isinstance(self.d, (int, np.integer)):
            raise ValueError(f"lattice size must be an integer, got {self.d!r}")
        if self.d < 4 or self.d % 2 != 0:
            raise ValueError(f"lattice size must be even and >= 4, got {self.d}")

    @property
    def k_max(self) -> int:
        """Number of interior cosine/sine pairs, K = d/2 - 1."""
        return self.d // 2 - 1

    def omega(self, k: int) -> float:
        """Lattice frequency omega_k = 2*pi*k/d."""
        return 2.0 * np.pi * k / self.d

    @property
    def frequencies(self) -> np.ndarray:
        """Frequency grid omega_k for k = 0..d/2, spanning [0, pi]."""
        return 2.0 * np.pi * np.arange(self.d // 2 + 1) / self.d


def _validated_vector(values, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 4 or arr.size % 2 != 0:
        raise ValueError(f"{what} length must be even and >= 4, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Signal:
    """Real-valued function on a lattice, sampled at t = 0..d-1."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _validated_vector(self.values, "signal"))

    @property
    def d(self) -> int:
        return self.values.size

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.d)


@dataclass(frozen=True)
class Spectrum:
    """Coefficient vector of a signal in the canonical basis order."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _validated_vector(self.coeffs, "spectrum"))

    @property
    def d(self) -> int:
        return self.coeffs.size

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.d)


def one_hot(s: int, lattice: Lattice) -> Signal:
    """Signal that is 1 at lattice point s and 0 elsewhere."""
    if not 0 <= s <= lattice.d - 1:
        raise ValueError(f"position {s} outside lattice 0..{lattice.d - 1}")
    values = np.zeros(lattice.d)
    values[s] = 1.0
    return Signal(values)


def basis_value(l: int, t: int, lattice: Lattice) -> float:
    """Evaluate basis function l at lattice point t.

    l = 0 is the constant 1/sqrt(d); l = 1..K are cosines at omega_l;
    l = K+1..2K are sines at omega_{l-K}; l = d-1 is cos(pi*t)/sqrt(d).
    """
    d = lattice.d
    K = lattice.k_max
    if not 0 <= l <= d - 1:
        raise ValueError(f"basis index {l} outside 0..{d - 1}")
    if not 0 <= t <= d - 1:
        raise ValueError(f"lattice point {t} outside 0..{d - 1}")
    if l == 0:
        return 1.0 / np.sqrt(d)
    if l <= K:
        return np.sqrt(2.0 / d) * np.cos(lattice.omega(l) * t)
    if l <= 2 * K:
        return np.sqrt(2.0 / d) * np.sin(lattice.omega(l - K) * t)
    return np.cos(np.pi * t) / np.sqrt(d)


@lru_cache(maxsize=32)
def _basis_matrix(d: int) -> np.ndarray:
    lattice = Lattice(d)
    K = lattice.k_max
    t = np.arange(d)
    B = np.empty((d, d))
    B[0] = 1.0 / np.sqrt(d)
    k = np.arange(1, K + 1)[:, np.newaxis]
    angles = 2.0 * np.pi * k * t / d
    B[1 : K + 1] = np.sqrt(2.0 / d) * np.cos(angles)
    B[K + 1 : 2 * K + 1] = np.sqrt(2.0 / d) * np.sin(angles)
    B[d - 1] = np.cos(np.pi * t) / np.sqrt(d)
    B.setflags(write=False)
    return B


def basis_matrix(lattice: Lattice) -> np.ndarray:
    """d x d matrix with entry (l, t) = basis function l at point t."""
    return _basis_matrix(lattice.d)


def dft_forward(f: Signal | np.ndarray) -> Spectrum:
    """Project a signal onto the basis: coefficient l is sum_t f(t)*phi_l(t)."""
    if not isinstance(f, Signal):
        f = Signal(f)
    B = basis_matrix(f.lattice)
    return Spectrum(B @ f.values)


def dft_inverse(c: Spectrum | np.ndarray) -> Signal:
    """Expand coefficients in the basis: value at t is sum_l c_l*phi_l(t)."""
    if not isinstance(c, Spectrum):
        c = Spectrum(c)
    B = basis_matrix(c.lattice)
    return Signal(B.T @ c.coeffs)


def gram_matrix(lattice: Lattice) -> np.ndarray:
    """Matrix of pairwise basis inner products; identity up to rounding."""
    B = basis_matrix(lattice)
    return B @ B.T

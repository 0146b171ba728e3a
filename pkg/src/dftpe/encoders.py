"""Positional encoders producing d x S matrices of per-position vectors.

Two encoders are provided.  The original sinusoidal encoder interleaves
(sin, cos) pairs at the geometric frequencies w_k = rho**(-k/d) for even k.
The DFT encoder takes the coefficient vector of the one-hot signal at the
position, so each column is a row of the orthonormal transform matrix and
position recovery is exact as long as S <= d.

Positions are 0-based throughout: position s corresponds to lattice point
t = s, which makes the one-hot correspondence exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dft import Lattice

__all__ = [
    "EncodingKind",
    "PEConfig",
    "EncodingMatrix",
    "original_pe_vector",
    "dft_pe_vector",
    "build_encoding_matrix",
    "inject",
]


class EncodingKind(enum.Enum):
    ORIGINAL = "original"
    DFT = "dft"

    @classmethod
    def coerce(cls, value: "EncodingKind | str") -> "EncodingKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown encoding kind {value!r} (choose from {choices})") from None


@dataclass(frozen=True)
class PEConfig:
    """Encoder configuration: dimension d (even, >= 4), sequence length S,
    and frequency base rho for the sinusoidal encoder."""

    d: int
    seq_len: int
    rho: float = 10000.0

    def __post_init__(self) -> None:
        Lattice(self.d)  # validates d
        if not isinstance(self.seq_len, (int, np.integer)) or self.seq_len < 1:
            raise ValueError(f"sequence length must be a positive integer, got {self.seq_len!r}")
        if not self.rho > 0:
            raise ValueError(f"frequency base rho must be positive, got {self.rho}")

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.d)


@dataclass(frozen=True)
class EncodingMatrix:
    """d x S matrix whose column s holds the encoding of position s.

    aliasing_warning is set when the DFT encoder is asked for more positions
    than lattice points; columns then repeat with period d and positions are
    no longer uniquely recoverable.
    """

    columns: np.ndarray
    kind: EncodingKind
    config: PEConfig
    aliasing_warning: bool

    def __post_init__(self) -> None:
        cols = np.array(self.columns, dtype=float)
        if cols.shape != (self.config.d, self.config.seq_len):
            raise ValueError(
                f"encoding matrix shape {cols.shape} does not match "
                f"(d, S) = ({self.config.d}, {self.config.seq_len})"
            )
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)


def _check_position(s: int) -> int:
    if not isinstance(s, (int, np.integer)) or s < 0:
        raise ValueError(f"position must be a nonnegative integer, got {s!r}")
    return int(s)


def original_pe_vector(s: int, config: PEConfig) -> np.ndarray:
    """Sinusoidal encoding of position s: pairs (sin(w_k s), cos(w_k s))
    for k = 0, 2, ..., d-2 with w_k = rho**(-k/d)."""
    s = _check_position(s)
    d, rho = config.d, config.rho
    k = np.arange(0, d, 2)
    w = rho ** (-k / d)
    out = np.empty(d)
    out[0::2] = np.sin(w * s)
    out[1::2] = np.cos(w * s)
    return out


def dft_pe_vector(s: int, lattice: Lattice) -> np.ndarray:
    """Coefficient vector of the one-hot signal at position s, in canonical
    order.  Unit norm for every integer s; positions s >= d alias modulo d."""
    s = _check_position(s)
    d = lattice.d
    K = lattice.k_max
    k = np.arange(1, K + 1)
    angles = 2.0 * np.pi * k * s / d
    out = np.empty(d)
    out[0] = 1.0 / np.sqrt(d)
    out[1 : K + 1] = np.sqrt(2.0 / d) * np.cos(angles)
    out[K + 1 : 2 * K + 1] = np.sqrt(2.0 / d) * np.sin(angles)
    out[d - 1] = np.cos(np.pi * s) / np.sqrt(d)
    return out


def build_encoding_matrix(kind: EncodingKind | str, config: PEConfig) -> EncodingMatrix:
    """Stack per-position encoder vectors into a d x S matrix."""
    kind = EncodingKind.coerce(kind)
    if kind is EncodingKind.ORIGINAL:
        cols = [original_pe_vector(s, config) for s in range(config.seq_len)]
    else:
        cols = [dft_pe_vector(s, config.lattice) for s in range(config.seq_len)]
    warn = kind is EncodingKind.DFT and config.seq_len > config.d
    return EncodingMatrix(np.column_stack(cols), kind, config, warn)


def inject(x: np.ndarray, enc: EncodingMatrix) -> np.ndarray:
    """Add the encoding to raw data column-wise: column s becomes x_s + e_s.

    Requires the data row dimension to equal the encoding dimension d."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape != enc.columns.shape:
        raise ValueError(
            f"data shape {x.shape} does not match encoding shape {enc.columns.shape}"
        )
    return x + enc.columns

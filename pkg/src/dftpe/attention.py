"""Single-layer multi-head self-attention with exact reverse-mode gradients.

Data matrices are column-based: an input X is D x S with one column per
position.  A head projects X to queries, keys, and values, forms the
row-stochastic attention matrix A = softmax(Q^T K / sqrt(d)) (softmax over
each row, the row index being the query), and filters Z = V A^T.  Heads
are concatenated along the feature axis.  Forward passes record enough
state to backpropagate an upstream gradient at Z to the three projection
matrices and to X.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "AttentionHeadParams",
    "AttentionOutput",
    "HeadGradients",
    "AttentionHead",
    "MultiHeadAttention",
    "attention_scores",
    "softmax_rows",
    "softmax_rows_vjp",
    "attention_filter",
    "multi_head",
]


def _as_matrix(x, what: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"{what} must be a matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{what} contains non-finite entries")
    return x


@dataclass(frozen=True)
class AttentionHeadParams:
    """Query/key/value projections, each d x D."""

    w_q: np.ndarray
    w_k: np.ndarray
    w_v: np.ndarray

    def __post_init__(self) -> None:
        w_q = _as_matrix(self.w_q, "w_q")
        w_k = _as_matrix(self.w_k, "w_k")
        w_v = _as_matrix(self.w_v, "w_v")
        if not (w_q.shape == w_k.shape == w_v.shape):
            raise ValueError(
                f"projection shapes differ: {w_q.shape}, {w_k.shape}, {w_v.shape}"
            )
        for name, w in (("w_q", w_q), ("w_k", w_k), ("w_v", w_v)):
            w = w.copy()
            w.setflags(write=False)
            object.__setattr__(self, name, w)

    @property
    def d(self) -> int:
        return self.w_q.shape[0]

    @property
    def input_dim(self) -> int:
        return self.w_q.shape[1]

    @classmethod
    def random(cls, d: int, input_dim: int, rng) -> "AttentionHeadParams":
        """Entries uniform on [-1/sqrt(D), 1/sqrt(D)] from the given seed
        or generator."""
        rng = np.random.default_rng(rng)
        bound = 1.0 / np.sqrt(input_dim)
        draw = lambda: rng.uniform(-bound, bound, size=(d, input_dim))
        return cls(w_q=draw(), w_k=draw(), w_v=draw())


@dataclass(frozen=True)
class AttentionOutput:
    """Attention matrix A (S x S, rows sum to 1) and filtered values Z."""

    weights: np.ndarray
    filtered: np.ndarray


@dataclass(frozen=True)
class HeadGradients:
    w_q: np.ndarray
    w_k: np.ndarray
    w_v: np.ndarray
    x: np.ndarray


def attention_scores(x: np.ndarray, params: AttentionHeadParams) -> np.ndarray:
    """Scaled query-key similarities B = Q^T K / sqrt(d)."""
    x = _as_matrix(x, "input")
    if x.shape[0] != params.input_dim:
        raise ValueError(
            f"input has {x.shape[0]} rows, projections expect {params.input_dim}"
        )
    q = params.w_q @ x
    k = params.w_k @ x
    return (q.T @ k) / np.sqrt(params.d)


def softmax_rows(scores: np.ndarray) -> np.ndarray:
    """Row-wise softmax, stabilized by subtracting each row maximum."""
    scores = _as_matrix(scores, "scores")
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_rows_vjp(weights: np.ndarray, grad_weights: np.ndarray) -> np.ndarray:
    """Backpropagate a gradient at A through the row softmax to the scores."""
    inner = (grad_weights * weights).sum(axis=1, keepdims=True)
    return weights * (grad_weights - inner)


def attention_filter(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Mix value columns with attention weights: Z = V A^T, so column s of Z
    is the weighted average of value columns under row s of A."""
    values = _as_matrix(values, "values")
    weights = _as_matrix(weights, "weights")
    if weights.shape[0] != weights.shape[1] or weights.shape[0] != values.shape[1]:
        raise ValueError(
            f"weights shape {weights.shape} incompatible with values shape {values.shape}"
        )
    return values @ weights.T


class AttentionHead:
    """One attention head; forward records state for a subsequent backward."""

    def __init__(self, params: AttentionHeadParams):
        self.params = params
        self._cache = None

    def forward(self, x: np.ndarray) -> AttentionOutput:
        x = _as_matrix(x, "input")
        p = self.params
        if x.shape[0] != p.input_dim:
            raise ValueError(
                f"input has {x.shape[0]} rows, projections expect {p.input_dim}"
            )
        q = p.w_q @ x
        k = p.w_k @ x
        v = p.w_v @ x
        a = softmax_rows((q.T @ k) / np.sqrt(p.d))
        z = v @ a.T
        self._cache = (x, q, k, v, a)
        return AttentionOutput(weights=a, filtered=z)

    def backward(self, grad_z: np.ndarray) -> HeadGradients:
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        x, q, k, v, a = self._cache
        p = self.params
        grad_z = _as_matrix(grad_z, "upstream gradient")
        if grad_z.shape != (p.d, x.shape[1]):
            raise ValueError(
                f"upstream gradient shape {grad_z.shape} does not match output "
                f"shape {(p.d, x.shape[1])}"
            )
        grad_v = grad_z @ a
        grad_a = grad_z.T @ v
        grad_b = softmax_rows_vjp(a, grad_a) / np.sqrt(p.d)
        grad_q = k @ grad_b.T
        grad_k = q @ grad_b
        grad_x = p.w_q.T @ grad_q + p.w_k.T @ grad_k + p.w_v.T @ grad_v
        return HeadGradients(
            w_q=grad_q @ x.T,
            w_k=grad_k @ x.T,
            w_v=grad_v @ x.T,
            x=grad_x,
        )


class MultiHeadAttention:
    """H heads applied to the same input, outputs stacked in head order."""

    def __init__(self, params: Sequence[AttentionHeadParams]):
        if len(params) < 1:
            raise ValueError("need at least one head")
        shapes = {p.w_q.shape for p in params}
        if len(shapes) != 1:
            raise ValueError(f"heads have inconsistent shapes: {sorted(shapes)}")
        self.heads = [AttentionHead(p) for p in params]

    @property
    def d(self) -> int:
        return self.heads[0].params.d

    def forward(self, x: np.ndarray) -> np.ndarray:
        return np.vstack([head.forward(x).filtered for head in self.heads])

    def backward(self, grad_z: np.ndarray) -> list[HeadGradients]:
        grad_z = _as_matrix(grad_z, "upstream gradient")
        d = self.d
        if grad_z.shape[0] != d * len(self.heads):
            raise ValueError(
                f"upstream gradient has {grad_z.shape[0]} rows, expected "
                f"{d * len(self.heads)}"
            )
        return [
            head.backward(grad_z[i * d : (i + 1) * d]) for i, head in enumerate(self.heads)
        ]


def multi_head(x: np.ndarray, params: Sequence[AttentionHeadParams]) -> np.ndarray:
    """Concatenated filtered outputs of all heads, a (d*H) x S matrix."""
    return MultiHeadAttention(params).forward(x)

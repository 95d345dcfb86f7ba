"""Kernel representations of complete LTI behaviors.

A behavior is the set of sequences ``w`` with ``R(sigma) w = 0`` where
``sigma`` is the forward shift ``(sigma w)(t) = w(t + 1)``.  Membership is
decided on finite windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import (DimensionMismatch, RankDeficient, ShapeMismatch,
                     SignalDimensionMismatch, WindowTooShort, ZeroMatrix)
from .laurent import LaurentMatrix, hermite_form, normal_rank

__all__ = [
    "KernelRepresentation", "TrajectoryWindow", "kernel_new", "kernel_reduce",
    "apply_shift", "is_member", "behaviors_equivalent", "intersect",
]


@dataclass(frozen=True)
class KernelRepresentation:
    """Full row normal rank kernel matrix ``R`` (``m x n``).

    Construct through :func:`kernel_new` or :func:`kernel_reduce`; the plain
    constructor does not validate.
    """

    matrix: LaurentMatrix

    @property
    def m(self) -> int:
        return self.matrix.rows

    @property
    def n(self) -> int:
        return self.matrix.cols

    @property
    def stencil(self) -> tuple[int, int]:
        """Lowest and highest shift ``(l, L)`` appearing in ``R``."""
        return self.matrix.low, self.matrix.high

    @property
    def width(self) -> int:
        lo, hi = self.stencil
        return hi - lo

    def __str__(self):
        return str(self.matrix)


@dataclass(frozen=True, eq=False)
class TrajectoryWindow:
    """Samples ``w(t1), ..., w(t2)`` of an ``n``-dimensional sequence.

    ``samples`` has shape ``(length, n)``; its dtype is ``object`` for exact
    (Fraction) data and ``float`` otherwise.
    """

    start_time: int
    samples: np.ndarray

    def __post_init__(self):
        s = self.samples
        if not isinstance(s, np.ndarray):
            s = _as_samples(s)
            object.__setattr__(self, "samples", s)
        if s.ndim != 2 or s.shape[0] == 0 or s.shape[1] == 0:
            raise ValueError("window must be a non-empty (length, n) array")

    @classmethod
    def scalar(cls, values, start_time: int = 0) -> "TrajectoryWindow":
        return cls(start_time, _as_samples([[v] for v in values]))

    @property
    def length(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def end_time(self) -> int:
        return self.start_time + self.length - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.start_time, self.start_time + self.length)

    def is_exact(self) -> bool:
        return self.samples.dtype == object

    def shifted(self, dt: int) -> "TrajectoryWindow":
        return TrajectoryWindow(self.start_time + dt, self.samples)

    def __eq__(self, other):
        if not isinstance(other, TrajectoryWindow):
            return NotImplemented
        return (self.start_time == other.start_time
                and self.samples.shape == other.samples.shape
                and bool(np.all(self.samples == other.samples)))


def _as_samples(values) -> np.ndarray:
    rows = [list(np.atleast_1d(v)) for v in values]
    flat = [x for r in rows for x in r]
    if flat and all(isinstance(x, Rational) and not isinstance(x, (bool, np.bool_))
                    for x in flat):
        return np.array([[Fraction(x) for x in r] for r in rows], dtype=object)
    return np.array(rows, dtype=float)


def kernel_new(M: LaurentMatrix) -> KernelRepresentation:
    """Validate ``M`` as a kernel representation without changing it."""
    zr = M.zero_rows()
    rank = normal_rank(M)
    if zr or rank < M.rows:
        raise RankDeficient(rank, M.rows)
    return KernelRepresentation(M)


def kernel_reduce(M: LaurentMatrix) -> KernelRepresentation:
    """Full row rank kernel of the same behavior: nonzero rows of the
    Hermite form of ``M``."""
    H = hermite_form(M).canonical
    keep = [i for i in range(H.rows) if i not in set(H.zero_rows())]
    if not keep:
        raise ZeroMatrix("the zero matrix has no full row rank kernel")
    return KernelRepresentation(H.submatrix(keep, range(H.cols)))


def _coefficient_blocks(K: KernelRepresentation, exact: bool):
    lo, hi = K.stencil
    dtype = object if exact else float
    return [K.matrix.coefficient(k, dtype=dtype) for k in range(lo, hi + 1)]


def apply_shift(K: KernelRepresentation, w: TrajectoryWindow) -> TrajectoryWindow:
    """Residual ``r(t) = sum_i R_i w(t + i)`` wherever the stencil fits.

    For a window on ``[t1, t2]`` and stencil ``[l, L]`` the output covers
    ``[t1 - l, t2 - L]``.
    """
    if w.dim != K.n:
        raise DimensionMismatch(f"window has dimension {w.dim}, kernel expects {K.n}")
    lo, hi = K.stencil
    out_len = w.length - (hi - lo)
    if out_len < 1:
        raise WindowTooShort(
            f"window of length {w.length} is shorter than the stencil "
            f"width {hi - lo + 1}")
    exact = w.is_exact() and K.matrix.is_exact()
    blocks = _coefficient_blocks(K, exact)
    x = w.samples if exact else w.samples.astype(float)
    res = np.zeros((out_len, K.m), dtype=object if exact else float)
    if exact:
        res[:] = Fraction(0)
    for i, R_i in enumerate(blocks):
        if exact and not any(c != 0 for c in R_i.flat):
            continue
        res = res + x[i:i + out_len].dot(R_i.T)
    return TrajectoryWindow(w.start_time - lo, res)


def is_member(K: KernelRepresentation, w: TrajectoryWindow, tol: float | None = None) -> bool:
    """Whether ``w`` satisfies ``R(sigma) w = 0`` on every admissible time.

    Default tolerance is 0 for exact windows and 1e-9 for float windows.
    """
    r = apply_shift(K, w)
    if tol is None:
        tol = 0 if r.is_exact() else 1e-9
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    return bool(np.all(np.abs(r.samples.astype(float) if not r.is_exact()
                              else r.samples) <= tol))


def behaviors_equivalent(K1: KernelRepresentation, K2: KernelRepresentation) -> bool:
    """True iff ``R1 = U R2`` for a Laurent unimodular ``U``."""
    if (K1.m, K1.n) != (K2.m, K2.n):
        raise ShapeMismatch(
            f"kernels have shapes {(K1.m, K1.n)} and {(K2.m, K2.n)}")
    return hermite_form(K1.matrix).canonical == hermite_form(K2.matrix).canonical


def intersect(K1: KernelRepresentation, K2: KernelRepresentation) -> KernelRepresentation:
    """Kernel of the intersection of the two behaviors."""
    if K1.n != K2.n:
        raise SignalDimensionMismatch(
            f"signal dimensions {K1.n} and {K2.n} differ")
    return kernel_reduce(LaurentMatrix.vstack(K1.matrix, K2.matrix))

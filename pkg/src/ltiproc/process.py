"""LTI stochastic processes as (kernel, noise law) pairs.

A process is described by ``R(sigma) w = e`` with ``e`` zero-mean,
unit-covariance Gaussian white noise.  Its fiber (the behavior its events
are invariant along) is ``ker R``.  Probability measures are never built
explicitly; the pair carries all the information.

Interconnection assumes the two processes are stochastically independent.
That cannot be checked from the models and is the caller's responsibility.
"""

from __future__ import annotations

from dataclasses import dataclass

from .behavior import KernelRepresentation
from .errors import NotComplementary, SignalDimensionMismatch
from .laurent import LaurentMatrix, is_unimodular, normal_rank

__all__ = ["NoiseSpec", "LtiProcessModel", "complementary", "interconnect",
           "has_full_event_algebra"]


@dataclass(frozen=True)
class NoiseSpec:
    """Zero-mean Gaussian white noise with identity covariance."""

    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("noise dimension must be at least 1")


@dataclass(frozen=True)
class LtiProcessModel:
    kernel: KernelRepresentation
    noise: NoiseSpec = None

    def __post_init__(self):
        if self.noise is None:
            object.__setattr__(self, "noise", NoiseSpec(self.kernel.m))
        if self.noise.dimension != self.kernel.m:
            raise ValueError(
                f"noise dimension {self.noise.dimension} does not match "
                f"kernel row count {self.kernel.m}")


def _stack(K1: KernelRepresentation, K2: KernelRepresentation) -> LaurentMatrix:
    if K1.n != K2.n:
        raise SignalDimensionMismatch(
            f"signal dimensions {K1.n} and {K2.n} differ")
    return LaurentMatrix.vstack(K1.matrix, K2.matrix)


def complementary(K1: KernelRepresentation, K2: KernelRepresentation) -> bool:
    """Event algebras are complementary iff the stacked kernel keeps full
    row normal rank ``m + p``."""
    S = _stack(K1, K2)
    if S.rows > S.cols:
        return False
    return normal_rank(S) == S.rows


def interconnect(P1: LtiProcessModel, P2: LtiProcessModel) -> LtiProcessModel:
    """Interconnection of two independent, complementary processes.

    The fiber is the intersection of the fibers (stacked kernel) and the
    noise is the pair of independent noises.
    """
    if not complementary(P1.kernel, P2.kernel):
        raise NotComplementary("stacked kernel is not of full row normal rank")
    S = _stack(P1.kernel, P2.kernel)
    return LtiProcessModel(KernelRepresentation(S),
                           NoiseSpec(P1.noise.dimension + P2.noise.dimension))


def has_full_event_algebra(P1, P2) -> bool:
    """Whether the interconnection carries every Borel event, i.e. the
    stacked kernel is square and unimodular.

    Accepts either process models or bare kernel representations.
    """
    K1 = getattr(P1, "kernel", P1)
    K2 = getattr(P2, "kernel", P2)
    return is_unimodular(_stack(K1, K2))

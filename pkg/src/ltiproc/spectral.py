"""Rational spectral densities of LTI processes.

Densities are held through a spectral factor ``W`` with ``Phi = W W*``,
where ``W*(z) = W^T(1/z)``.  Factors are rational matrices stored as a
Laurent polynomial numerator matrix over a common scalar denominator, and
are required to be stable with stable inverse: every finite pole and zero
lies strictly inside the unit disc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .behavior import KernelRepresentation
from .errors import (CircleRoot, DimensionMismatch, EvaluationSingular,
                     FactorizationError, NotCoercive, NotParahermitian,
                     NotScalar, NotSquare, RankDeficient, RootOnCircle,
                     SingularFactor, UnstableKernel)
from .laurent import (ONE, LaurentMatrix, LaurentPolynomial, adjugate,
                      determinant, is_unimodular, normal_rank, poly_gcd)

__all__ = [
    "RationalMatrix", "SpectralFactor", "SpectralDensity", "frequency_grid",
    "determinant_roots", "density_from_kernel", "density_eval",
    "scalar_spectral_factor", "factor_residual", "unimodular_equivalent", "shape_distance",
]

STABILITY_MARGIN = 1e-9
CIRCLE_TOL = 1e-8
PAIRING_TOL = 1e-8
SINGULAR_TOL = 1e-12
COERCIVITY_GRID = 512
DEFAULT_GRID = 1024


def frequency_grid(grid_size: int) -> np.ndarray:
    """``theta_k = 2 pi k / grid_size`` for ``k = 0 .. grid_size - 1``."""
    return 2 * np.pi * np.arange(grid_size) / grid_size


@dataclass(frozen=True)
class RationalMatrix:
    """``entries / denominator`` with a scalar Laurent denominator.

    Exact inputs are reduced on construction: the denominator is made monic
    with non-zero constant term and any common factor with the entries is
    cancelled.
    """

    entries: LaurentMatrix
    denominator: LaurentPolynomial = ONE

    def __post_init__(self):
        d = self.denominator
        if not isinstance(d, LaurentPolynomial):
            d = LaurentPolynomial.constant(d)
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        N = self.entries
        unit = LaurentPolynomial.monomial(1, -d.low) * _recip(d.ordinary().leading())
        N, d = N * unit, d * unit
        if d.is_exact() and N.is_exact() and d.span > 0:
            g = d
            for e in N.entries():
                if e:
                    g = poly_gcd(g, e)
                    if g.span == 0:
                        break
            if g.span > 0:
                d = d.exact_div(g)
                N = LaurentMatrix([[e.exact_div(g) for e in r] for r in N.tolist()])
                unit = LaurentPolynomial.monomial(1, -d.low) * _recip(d.ordinary().leading())
                N, d = N * unit, d * unit
        object.__setattr__(self, "entries", N)
        object.__setattr__(self, "denominator", d)

    @classmethod
    def scalar(cls, num: LaurentPolynomial, den: LaurentPolynomial = ONE) -> "RationalMatrix":
        return cls(LaurentMatrix([[num]]), den)

    @property
    def shape(self):
        return self.entries.shape

    def is_exact(self) -> bool:
        return self.entries.is_exact() and self.denominator.is_exact()

    def __matmul__(self, other):
        if isinstance(other, LaurentMatrix):
            return RationalMatrix(self.entries @ other, self.denominator)
        if isinstance(other, RationalMatrix):
            return RationalMatrix(self.entries @ other.entries,
                                  self.denominator * other.denominator)
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, LaurentMatrix):
            return RationalMatrix(other @ self.entries, self.denominator)
        return NotImplemented

    def scaled(self, c) -> "RationalMatrix":
        return RationalMatrix(self.entries * c, self.denominator)

    def star(self) -> "RationalMatrix":
        return RationalMatrix(self.entries.star(), self.denominator.star())

    def inverse(self) -> "RationalMatrix":
        """Inverse of a square matrix: ``den * adj(N) / det(N)``."""
        if not self.entries.is_square():
            raise NotSquare("only square rational matrices are invertible")
        det = determinant(self.entries)
        if det.is_zero():
            raise SingularFactor("matrix is singular")
        return RationalMatrix(adjugate(self.entries) * self.denominator, det)

    def evaluate_grid(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        den = self.denominator(zs)
        if np.any(np.abs(den) < SINGULAR_TOL):
            raise EvaluationSingular("denominator vanishes at an evaluation point")
        return self.entries.evaluate_grid(zs) / den[:, None, None]

    def __str__(self):
        return f"({self.entries}) / ({self.denominator})"


def _recip(c):
    return 1 / c


def _roots_report(p: LaurentPolynomial) -> np.ndarray:
    return p.ordinary().roots() if p else np.zeros(0, dtype=complex)


def _check_inside(roots):
    roots = np.asarray(roots)
    if roots.size and np.any(np.abs(roots) >= 1 - STABILITY_MARGIN):
        raise UnstableKernel(roots)


@dataclass(frozen=True)
class SpectralFactor:
    """Square rational ``W`` of full normal rank, analytic with analytic
    inverse outside the closed unit disc."""

    value: RationalMatrix

    def __post_init__(self):
        V = self.value
        if not V.entries.is_square():
            raise NotSquare(f"spectral factor must be square, got {V.shape}")
        det = determinant(V.entries)
        if det.is_zero():
            raise SingularFactor("spectral factor is not of full normal rank")
        _check_inside(_roots_report(V.denominator))
        _check_inside(_roots_report(det))

    @property
    def n(self) -> int:
        return self.value.shape[0]

    def times(self, V: LaurentMatrix) -> "SpectralFactor":
        """``W V`` for a Laurent polynomial matrix ``V`` (e.g. unimodular)."""
        return SpectralFactor(self.value @ V)

    def scaled(self, c) -> "SpectralFactor":
        return SpectralFactor(self.value.scaled(c))

    def __call__(self, zs) -> np.ndarray:
        return self.value.evaluate_grid(zs)

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class SpectralDensity:
    """``Phi = W W*`` held through its factor."""

    factor: SpectralFactor

    @property
    def n(self) -> int:
        return self.factor.n

    def rational(self) -> RationalMatrix:
        """``Phi`` expanded as a rational matrix."""
        W = self.factor.value
        return W @ W.star()

    def scaled(self, alpha) -> "SpectralDensity":
        """``alpha * Phi`` for ``alpha > 0``."""
        return SpectralDensity(self.factor.scaled(math.sqrt(alpha)))


def determinant_roots(K: KernelRepresentation) -> np.ndarray:
    """Finite non-zero roots of ``det R(z)`` (companion-matrix eigenvalues)."""
    if K.m != K.n:
        raise NotSquare(f"kernel is {K.m}x{K.n}; a square kernel is required")
    det = determinant(K.matrix)
    if det.is_zero():
        raise RankDeficient(normal_rank(K.matrix), K.m)
    return _roots_report(det)


def density_from_kernel(K: KernelRepresentation) -> SpectralDensity:
    """Density of ``w`` driven by unit white noise through ``R(sigma) w = e``,
    with factor ``W = R^{-1}``."""
    roots = determinant_roots(K)
    if roots.size and np.any(np.abs(np.abs(roots) - 1) < CIRCLE_TOL):
        raise CircleRoot(roots)
    _check_inside(roots)
    W = RationalMatrix(K.matrix).inverse()
    return SpectralDensity(SpectralFactor(W))


def density_eval(D: SpectralDensity, grid_size: int = DEFAULT_GRID) -> np.ndarray:
    """``Phi(e^{j theta_k})`` on the uniform grid, shape ``(grid_size, n, n)``."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    zs = np.exp(1j * frequency_grid(grid_size))
    W = D.factor(zs)
    return W @ np.conj(np.swapaxes(W, 1, 2))


def _as_scalar_rational(phi) -> RationalMatrix:
    if isinstance(phi, SpectralDensity):
        phi = phi.rational()
    elif isinstance(phi, LaurentPolynomial):
        phi = RationalMatrix.scalar(phi)
    elif isinstance(phi, LaurentMatrix):
        phi = RationalMatrix(phi)
    if phi.shape != (1, 1):
        raise NotScalar(f"expected a scalar density, got shape {phi.shape}")
    return phi


def _is_parahermitian(num: LaurentPolynomial, den: LaurentPolynomial) -> bool:
    lhs = num.star() * den
    rhs = num * den.star()
    if lhs.is_exact() and rhs.is_exact():
        return lhs == rhs
    diff = lhs - rhs
    if diff.is_zero():
        return True
    scale = max(np.max(np.abs(lhs.as_array())) if lhs else 0.0,
                np.max(np.abs(rhs.as_array())) if rhs else 0.0)
    return float(np.max(np.abs(diff.as_array()))) <= 1e-12 * scale


def _stable_half(roots: np.ndarray, what: str) -> np.ndarray:
    gap = np.abs(np.abs(roots) - 1)
    if roots.size and np.any(gap < CIRCLE_TOL):
        raise RootOnCircle(f"{what} has a root on the unit circle")

    def unpaired(msg):
        # repeated roots on the circle are split by roughly sqrt(eps)
        if np.any(gap < math.sqrt(CIRCLE_TOL)):
            return RootOnCircle(f"{what} has a (repeated) root on the unit circle")
        return FactorizationError(msg)

    inside = roots[np.abs(roots) < 1]
    outside = list(roots[np.abs(roots) > 1])
    if len(inside) != len(outside):
        raise unpaired(f"{what} roots do not pair as (r, 1/conj(r)): "
                       f"{len(inside)} inside vs {len(outside)} outside")
    for r in inside:
        mirror = 1 / np.conj(r)
        k = int(np.argmin([abs(mirror - s) for s in outside]))
        if abs(mirror - outside[k]) > PAIRING_TOL * abs(mirror) and \
                abs(r - 1 / np.conj(outside[k])) > PAIRING_TOL:
            raise unpaired(f"{what} root {r} has no mirror image")
        outside.pop(k)
    return inside


def _causal_poly(roots: np.ndarray) -> LaurentPolynomial:
    """``prod(1 - r z^-1)`` as a Laurent polynomial in ``z``."""
    return LaurentPolynomial.from_roots(roots).shift(-len(roots))


def factor_residual(phi, w: SpectralFactor) -> float:
    """Relative coefficient mismatch between ``w w*`` and ``phi``.

    Compares the cross-multiplied numerators ``b b* den`` and ``num a a*``
    for ``w = b / a`` and ``phi = num / den``.
    """
    phi = _as_scalar_rational(phi)
    b, a = w.value.entries[0, 0], w.value.denominator
    lhs = b * b.star() * phi.denominator
    rhs = phi.entries[0, 0] * a * a.star()
    diff = (lhs.to_float() - rhs.to_float())
    if diff.is_zero():
        return 0.0
    scale = max(np.max(np.abs(lhs.as_array())), np.max(np.abs(rhs.as_array())))
    return float(np.max(np.abs(diff.as_array())) / scale)


def scalar_spectral_factor(phi, tol: float = 1e-9) -> SpectralFactor:
    """Minimum-phase factor ``w`` of a scalar coercive parahermitian density.

    ``phi`` may be a 1x1 :class:`RationalMatrix`, a Laurent polynomial or a
    :class:`SpectralDensity`.  The result is
    ``g * prod(1 - z_i/z) / prod(1 - p_j/z)`` with the stable root of each
    mirror pair ``(r, 1/conj(r))`` and ``g`` chosen so that ``w(1) > 0``
    and ``w(1)^2 = phi(1)``.  Raises :class:`FactorizationError` when the
    expanded ``w w*`` misses ``phi`` by more than ``tol`` (relative).
    """
    phi = _as_scalar_rational(phi)
    num, den = phi.entries[0, 0], phi.denominator
    if num.is_zero():
        raise NotCoercive("density is identically zero")
    if not _is_parahermitian(num, den):
        raise NotParahermitian("phi*(z) != phi(z)")
    zs = np.exp(1j * frequency_grid(COERCIVITY_GRID))
    try:
        vals = phi.evaluate_grid(zs)[:, 0, 0]
    except EvaluationSingular:
        raise NotCoercive("density has a pole on the unit circle") from None
    if np.any(vals.real <= 0) or np.any(np.abs(vals.imag) > 1e-9 * np.abs(vals.real)):
        raise NotCoercive("density is not positive on the unit circle")

    zin = _stable_half(_roots_report(num), "numerator")
    pin = _stable_half(_roots_report(den), "denominator")
    b = _causal_poly(zin)
    a = _causal_poly(pin)
    phi_at_1 = float(np.real(phi.evaluate_grid([1.0])[0, 0, 0]))
    ratio = float(np.real(b(1.0) / a(1.0)))
    gain = math.sqrt(phi_at_1) / ratio
    w = SpectralFactor(RationalMatrix.scalar(b * gain, a))
    err = factor_residual(phi, w)
    if err > tol:
        raise FactorizationError(f"w w* differs from phi by {err:.3g} (relative)")
    return w


def unimodular_equivalent(W1: SpectralFactor, W2: SpectralFactor, tol: float = 1e-9) -> bool:
    """Whether ``W1 = W2 V`` for a Laurent unimodular ``V``.

    ``V = W2^{-1} W1`` is formed as a rational matrix; exact inputs are
    decided exactly, floating point ones with relative tolerance ``tol`` on
    division remainders and on the monomial test of ``det V``.
    """
    if W1.n != W2.n:
        raise DimensionMismatch(f"factor sizes {W1.n} and {W2.n} differ")
    N1, d1 = W1.value.entries, W1.value.denominator
    N2, d2 = W2.value.entries, W2.value.denominator
    det2 = determinant(N2)
    if det2.is_zero():
        raise SingularFactor("W2 is singular")
    P = (adjugate(N2) @ N1) * d2
    q = det2 * d1
    exact = P.is_exact() and q.is_exact()
    try:
        V = LaurentMatrix([[e.exact_div(q, None if exact else tol) for e in r]
                           for r in P.tolist()])
    except ArithmeticError:
        return False
    return is_unimodular(V, None if exact else tol)


def shape_distance(phi1: SpectralDensity, phi2: SpectralDensity,
                   grid_size: int = DEFAULT_GRID) -> float:
    """Mean-removed log-spectral L2 distance between scalar densities.

    ``sqrt(mean((r - mean r)^2))`` with ``r = log Phi1 - log Phi2`` on the
    uniform grid.  Insensitive to positive rescaling of either argument.
    """
    if phi1.n != 1 or phi2.n != 1:
        raise NotScalar("shape_distance is defined for scalar densities only")
    if grid_size < 64:
        raise ValueError("grid_size must be at least 64")
    v1 = density_eval(phi1, grid_size)[:, 0, 0].real
    v2 = density_eval(phi2, grid_size)[:, 0, 0].real
    r = np.log(v1) - np.log(v2)
    return float(np.sqrt(np.mean((r - r.mean()) ** 2)))

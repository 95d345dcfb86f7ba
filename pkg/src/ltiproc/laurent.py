"""Laurent polynomials and Laurent polynomial matrices.

Coefficients are held as :class:`fractions.Fraction` whenever the input is
exact (ints, Fractions, decimal literals parsed by :mod:`ltiproc.textio`).
Floats are accepted and propagate through the arithmetic, but the structural
decisions (rank, unimodularity, canonical forms) are only reliable on exact
input.

The indeterminate is ``z``; a polynomial is stored as a low exponent and the
dense coefficient list for exponents ``low .. high``.
"""

from __future__ import annotations

import cmath
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotSquare, NotUnimodular

__all__ = [
    "LaurentPolynomial", "LaurentMatrix", "HermiteResult", "Z", "ONE", "ZERO",
    "star", "determinant", "normal_rank", "rank_estimate", "is_unimodular",
    "hermite_form", "unimodular_inverse", "poly_gcd", "format_number",
]


def _coerce(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, bool):
        return Fraction(int(c))
    if isinstance(c, numbers.Integral):
        return Fraction(int(c))
    if isinstance(c, numbers.Real):
        return float(c)
    if isinstance(c, numbers.Complex):
        return complex(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def format_number(c) -> str:
    """Grammar-compatible text for a non-negative coefficient magnitude."""
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"
    return np.format_float_positional(float(c), unique=True, trim="-")


class LaurentPolynomial:
    """Finite sum ``sum_k c_k z^k`` with integer (possibly negative) ``k``.

    Instances are immutable and always trimmed: when non-zero, the first and
    last stored coefficients are non-zero.  The zero polynomial has no
    coefficients and ``low == 0``.
    """

    __slots__ = ("_low", "_coeffs", "_hash")

    def __init__(self, coeffs: Iterable = (), low: int = 0):
        cs = [_coerce(c) for c in coeffs]
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        stop = len(cs)
        while stop > start and cs[stop - 1] == 0:
            stop -= 1
        cs = cs[start:stop]
        self._coeffs = tuple(cs)
        self._low = int(low) + start if cs else 0
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def monomial(cls, coeff, exponent: int) -> "LaurentPolynomial":
        return cls([coeff], exponent)

    @classmethod
    def constant(cls, coeff) -> "LaurentPolynomial":
        return cls([coeff], 0)

    @classmethod
    def from_dict(cls, terms: dict) -> "LaurentPolynomial":
        terms = {k: v for k, v in terms.items() if v != 0}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls([terms.get(k, 0) for k in range(lo, hi + 1)], lo)

    @classmethod
    def from_roots(cls, roots, gain=1) -> "LaurentPolynomial":
        """``gain * prod(z - r)``; complex-conjugate roots give real output."""
        coeffs = np.poly(np.asarray(roots, dtype=complex)) if len(roots) else np.ones(1)
        if np.all(np.abs(np.imag(coeffs)) <= 1e-12 * max(1.0, np.max(np.abs(coeffs)))):
            coeffs = np.real(coeffs)
        return cls([gain * c for c in coeffs[::-1]], 0)

    # -- basic properties -------------------------------------------------
    @property
    def low(self) -> int:
        return self._low

    @property
    def high(self) -> int:
        return self._low + len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def span(self) -> int:
        """``high - low``; the Euclidean norm of the Laurent ring (-1 for zero)."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self._coeffs)

    def terms(self) -> dict:
        return {self._low + i: c for i, c in enumerate(self._coeffs) if c != 0}

    def coeff(self, k: int):
        i = k - self._low
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return Fraction(0)

    def leading(self):
        return self._coeffs[-1]

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            try:
                other = LaurentPolynomial.constant(other)
            except TypeError:
                return NotImplemented
        return self._low == other._low and self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._low, self._coeffs))
        return self._hash

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.high, self.low - 1, -1):
            c = self.coeff(k)
            if c == 0:
                continue
            neg = c < 0 if not isinstance(c, complex) else False
            mag = -c if neg else c
            if k == 0:
                body = format_number(mag)
            else:
                zp = "z" if k == 1 else f"z^{k}"
                body = zp if mag == 1 else f"{format_number(mag)}*{zp}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, LaurentPolynomial):
            return other
        return LaurentPolynomial.constant(other)

    def __add__(self, other):
        if not isinstance(other, (LaurentPolynomial, numbers.Number)):
            return NotImplemented
        other = self._lift(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self._low, other._low)
        hi = max(self.high, other.high)
        out = [Fraction(0)] * (hi - lo + 1)
        for i, c in enumerate(self._coeffs):
            out[self._low - lo + i] += c
        for i, c in enumerate(other._coeffs):
            out[other._low - lo + i] += c
        return LaurentPolynomial(out, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial([-c for c in self._coeffs], self._low)

    def __sub__(self, other):
        if not isinstance(other, (LaurentPolynomial, numbers.Number)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            c = _coerce(other)
            return LaurentPolynomial([c * a for a in self._coeffs], self._low)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        a, b = self._coeffs, other._coeffs
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return LaurentPolynomial(out, self._low + other._low)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent polynomial inverses")
            c = self._coeffs[0]
            inv = (Fraction(1) / c) if isinstance(c, Fraction) else 1.0 / c
            return LaurentPolynomial.monomial(inv ** -k, self._low * k)
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by ``z**k``."""
        if self.is_zero():
            return self
        return LaurentPolynomial(self._coeffs, self._low + k)

    def star(self) -> "LaurentPolynomial":
        """``p(1/z)``."""
        return LaurentPolynomial(self._coeffs[::-1], -self.high) if self else self

    def conj_star(self) -> "LaurentPolynomial":
        return LaurentPolynomial([c.conjugate() for c in self._coeffs[::-1]],
                                 -self.high) if self else self

    def ordinary(self) -> "LaurentPolynomial":
        """``z**(-low) * p``: an ordinary polynomial with non-zero constant term."""
        return self.shift(-self._low)

    def to_float(self) -> "LaurentPolynomial":
        return LaurentPolynomial([float(c) for c in self._coeffs], self._low)

    def as_array(self) -> np.ndarray:
        """Coefficients for exponents ``low .. high`` as floats (ascending)."""
        return np.array([complex(c) if isinstance(c, complex) else float(c)
                         for c in self._coeffs])

    def __call__(self, z):
        """Evaluate at ``z`` (scalar or numpy array, floating point)."""
        if self.is_zero():
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0.0
        z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
        val = np.polyval(self.as_array()[::-1], z)
        return val * z ** self._low

    def evaluate_exact(self, z: Fraction) -> Fraction:
        total = Fraction(0)
        for k, c in self.terms().items():
            total += c * Fraction(z) ** k
        return total

    def roots(self) -> np.ndarray:
        """Finite non-zero roots (companion-matrix eigenvalues)."""
        if self.span <= 0:
            return np.zeros(0, dtype=complex)
        return np.roots(self.as_array()[::-1])

    # -- division ---------------------------------------------------------
    def divmod(self, other: "LaurentPolynomial"):
        """Euclidean division in the Laurent ring.

        Returns ``(q, r)`` with ``self == q*other + r`` and
        ``r.span < other.span`` (``r`` zero when ``other`` is a monomial).
        """
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return ZERO, ZERO
        q0, r0 = _divmod_dense(list(self._coeffs), list(other._coeffs))
        q = LaurentPolynomial(q0, self._low - other._low)
        r = LaurentPolynomial(r0, self._low)
        return q, r

    def exact_div(self, other: "LaurentPolynomial", tol: float | None = None):
        """Quotient ``self / other`` in the Laurent ring.

        Raises ``ArithmeticError`` when the remainder is non-zero (exact
        coefficients) or its norm exceeds ``tol`` relative to ``self``.
        """
        q, r = self.divmod(other)
        if r.is_zero():
            return q
        if tol is not None:
            scale = max(float(np.max(np.abs(self.as_array()))), 1e-300)
            if float(np.max(np.abs(r.as_array()))) <= tol * scale:
                return q
        raise ArithmeticError(f"{other} does not divide {self}")

    def divides(self, other: "LaurentPolynomial") -> bool:
        try:
            other.exact_div(self)
        except ArithmeticError:
            return False
        return True

    def monic_normal(self) -> "LaurentPolynomial":
        """Unit-normalised associate: ordinary, non-zero constant, monic."""
        if self.is_zero():
            return self
        p = self.ordinary()
        return p * _reciprocal(p.leading())


def _reciprocal(c):
    return Fraction(1) / c if isinstance(c, Fraction) else 1.0 / c


def _divmod_dense(a: list, b: list):
    """Long division of dense ascending coefficient lists; ``b[-1] != 0``."""
    if len(a) < len(b):
        return [], a
    a = list(a)
    nb = len(b)
    inv_lead = _reciprocal(b[-1])
    q = [Fraction(0)] * (len(a) - nb + 1)
    for i in range(len(a) - nb, -1, -1):
        c = a[i + nb - 1] * inv_lead
        q[i] = c
        if c != 0:
            for j in range(nb):
                a[i + j] -= c * b[j]
        a[i + nb - 1] = Fraction(0)
    return q, a[:nb - 1]


ZERO = LaurentPolynomial()
ONE = LaurentPolynomial.constant(1)
Z = LaurentPolynomial.monomial(1, 1)


def poly_gcd(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """Monic ordinary gcd of two Laurent polynomials (exact coefficients)."""
    a, b = a.monic_normal(), b.monic_normal()
    while not b.is_zero():
        _, r = _divmod_poly(a, b)
        a, b = b, r.monic_normal()
    return a


def _divmod_poly(a: LaurentPolynomial, b: LaurentPolynomial):
    """Ordinary polynomial division; both arguments must have ``low >= 0``."""
    da = [Fraction(0)] * a.low + list(a.coeffs) if a else []
    db = [Fraction(0)] * b.low + list(b.coeffs)
    q, r = _divmod_dense(da, db)
    return LaurentPolynomial(q, 0), LaurentPolynomial(r, 0)


class LaurentMatrix:
    """Immutable ``p x n`` matrix with :class:`LaurentPolynomial` entries."""

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Sequence[Sequence]):
        grid = tuple(tuple(e if isinstance(e, LaurentPolynomial)
                           else LaurentPolynomial.constant(e) for e in row)
                     for row in rows)
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(grid[0])
        if any(len(r) != width for r in grid):
            raise ValueError("ragged rows")
        self._rows = grid
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, p: int, n: int) -> "LaurentMatrix":
        return cls([[ZERO] * n for _ in range(p)])

    @classmethod
    def from_coefficients(cls, coeffs: dict) -> "LaurentMatrix":
        """Build ``sum_k C_k z^k`` from a mapping exponent -> 2-D array."""
        mats = {k: [list(r) for r in np.atleast_2d(np.asarray(v, dtype=object))]
                for k, v in coeffs.items()}
        p, n = len(next(iter(mats.values()))), len(next(iter(mats.values()))[0])
        return cls([[LaurentPolynomial.from_dict({k: m[i][j] for k, m in mats.items()})
                     for j in range(n)] for i in range(p)])

    @staticmethod
    def vstack(*mats: "LaurentMatrix") -> "LaurentMatrix":
        if len({m.cols for m in mats}) != 1:
            raise DimensionMismatch("cannot stack matrices with different column counts")
        return LaurentMatrix([r for m in mats for r in m._rows])

    # -- shape / access ---------------------------------------------------
    @property
    def shape(self):
        return len(self._rows), len(self._rows[0])

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return len(self._rows[0])

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def tolist(self) -> list:
        return [list(r) for r in self._rows]

    def entries(self):
        return (e for r in self._rows for e in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_exact(self) -> bool:
        return all(e.is_exact() for e in self.entries())

    def zero_rows(self) -> list:
        return [i for i, r in enumerate(self._rows) if all(e.is_zero() for e in r)]

    @property
    def low(self) -> int:
        """Smallest exponent present (0 for the zero matrix)."""
        lows = [e.low for e in self.entries() if e]
        return min(lows) if lows else 0

    @property
    def high(self) -> int:
        highs = [e.high for e in self.entries() if e]
        return max(highs) if highs else 0

    def coefficient(self, k: int, dtype=object) -> np.ndarray:
        """Coefficient matrix of ``z**k``."""
        out = np.array([[e.coeff(k) for e in r] for r in self._rows], dtype=object)
        return out if dtype is object else out.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self):
        return f"LaurentMatrix({self})"

    def __str__(self):
        return "[ " + " ; ".join(" , ".join(str(e) for e in r)
                                 for r in self._rows) + " ]"

    # -- arithmetic -------------------------------------------------------
    def _check_same(self, other):
        if not isinstance(other, LaurentMatrix):
            raise TypeError("expected a LaurentMatrix")
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other):
        self._check_same(other)
        return LaurentMatrix([[a + b for a, b in zip(r, s)]
                              for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other):
        self._check_same(other)
        return LaurentMatrix([[a - b for a, b in zip(r, s)]
                              for r, s in zip(self._rows, other._rows)])

    def __neg__(self):
        return LaurentMatrix([[-a for a in r] for r in self._rows])

    def __matmul__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._rows))
        out = []
        for r in self._rows:
            row = []
            for c in cols:
                acc = ZERO
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out)

    def __mul__(self, scalar):
        """Entrywise scaling by a number or a Laurent polynomial."""
        if isinstance(scalar, LaurentMatrix):
            return NotImplemented
        return LaurentMatrix([[a * scalar for a in r] for r in self._rows])

    __rmul__ = __mul__

    @property
    def T(self) -> "LaurentMatrix":
        return LaurentMatrix(list(zip(*self._rows)))

    def star(self) -> "LaurentMatrix":
        return LaurentMatrix([[e.star() for e in r] for r in zip(*self._rows)])

    def to_float(self) -> "LaurentMatrix":
        return LaurentMatrix([[e.to_float() for e in r] for r in self._rows])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "LaurentMatrix":
        return LaurentMatrix([[self._rows[i][j] for j in cols] for i in rows])

    def __call__(self, z) -> np.ndarray:
        """Numeric value at a scalar ``z`` (complex ndarray of shape (p, n))."""
        return np.array([[complex(e(z)) if e else 0j for e in r]
                         for r in self._rows], dtype=complex)

    def evaluate_grid(self, zs: np.ndarray) -> np.ndarray:
        """Values at many points; returns shape ``(len(zs), p, n)``."""
        zs = np.asarray(zs, dtype=complex)
        out = np.zeros((len(zs), self.rows, self.cols), dtype=complex)
        for i, r in enumerate(self._rows):
            for j, e in enumerate(r):
                if e:
                    out[:, i, j] = e(zs)
        return out


def star(M: LaurentMatrix) -> LaurentMatrix:
    """``M^T(1/z)``: transpose and negate every exponent."""
    return M.star()


# -- fraction-free elimination -------------------------------------------

def _shift_rows_ordinary(M: LaurentMatrix):
    """Multiply each row by ``z**(-row_low)``; returns (rows, total shift)."""
    rows, total = [], 0
    for r in M.tolist():
        nz = [e.low for e in r if e]
        k = min(nz) if nz else 0
        total += k
        rows.append([e.shift(-k) for e in r])
    return rows, total


def _bareiss(rows: list):
    """Fraction-free (Bareiss) echelon reduction in place.

    Returns ``(rank, sign)``; ``sign`` tracks row swaps.  After a full-rank
    square reduction the last diagonal entry is the determinant.
    """
    m, n = len(rows), len(rows[0])
    prev = ONE
    r, sign = 0, 1
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, m):
            a = rows[i][c]
            for j in range(c + 1, n):
                num = p * rows[i][j]
                if a and rows[r][j]:
                    num = num - a * rows[r][j]
                rows[i][j] = num if prev == ONE else _div_exact(num, prev)
            rows[i][c] = ZERO
        prev = p
        r += 1
    return r, sign


def _div_exact(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    if a.is_zero():
        return a
    q, rem = a.divmod(b)
    if rem and a.is_exact() and b.is_exact():
        raise ArithmeticError("Bareiss division was not exact")
    return q


def determinant(M: LaurentMatrix) -> LaurentPolynomial:
    """Exact determinant of a square Laurent matrix."""
    if not M.is_square():
        raise NotSquare(f"determinant needs a square matrix, got {M.shape}")
    rows, total = _shift_rows_ordinary(M)
    n = len(rows)
    rank, sign = _bareiss(rows)
    if rank < n:
        return ZERO
    return (rows[n - 1][n - 1] * sign).shift(total)


def normal_rank(M: LaurentMatrix, fast: bool = False) -> int:
    """Rank of ``M`` over the field of rational functions.

    The exact path is fraction-free elimination.  With ``fast=True`` a
    numerical evaluation estimate is tried first; it is accepted only when it
    reports full rank (evaluation can only lose rank), otherwise the exact
    path decides.
    """
    if fast:
        est = rank_estimate(M)
        if est == min(M.shape):
            return est
    rows, _ = _shift_rows_ordinary(M)
    rank, _ = _bareiss(rows)
    return rank


_GOLDEN = (math.sqrt(5) - 1) / 2


def rank_estimate(M: LaurentMatrix, draws: int = 3, seed: int | None = None) -> int:
    """Max numerical rank of ``M(z0)`` over points on the unit circle.

    Points are spaced by an irrational fraction of a turn from a random start.
    """
    rng = np.random.default_rng(seed)
    start = rng.random()
    best = 0
    for k in range(draws):
        z0 = cmath.exp(2j * math.pi * ((start + k * _GOLDEN) % 1.0))
        best = max(best, int(np.linalg.matrix_rank(M(z0))))
    return best


def is_unimodular(M: LaurentMatrix, tol: float | None = None) -> bool:
    """True iff ``M`` is square with monomial determinant.

    ``tol`` enables a relative tolerance on the non-dominant determinant
    coefficients for floating point input.
    """
    if not M.is_square():
        return False
    d = determinant(M)
    if d.is_zero():
        return False
    if tol is None or d.is_exact():
        return d.is_monomial()
    mags = np.abs(d.as_array())
    return int(np.sum(mags > tol * mags.max())) == 1


def unimodular_inverse(U: LaurentMatrix) -> LaurentMatrix:
    """Exact inverse of a unimodular matrix (adjugate over the determinant)."""
    if not U.is_square():
        raise NotUnimodular("matrix is not square")
    d = determinant(U)
    if not d.is_monomial():
        raise NotUnimodular(f"determinant {d} is not a non-zero monomial")
    inv_d = d ** -1
    n = U.rows
    if n == 1:
        return LaurentMatrix([[inv_d]])
    idx = range(n)
    adj = [[ZERO] * n for _ in idx]
    for i in idx:
        for j in idx:
            minor = U.submatrix([r for r in idx if r != i], [c for c in idx if c != j])
            cof = determinant(minor)
            adj[j][i] = cof * inv_d if (i + j) % 2 == 0 else -cof * inv_d
    return LaurentMatrix(adj)


def adjugate(M: LaurentMatrix) -> LaurentMatrix:
    if not M.is_square():
        raise NotSquare(f"adjugate needs a square matrix, got {M.shape}")
    n = M.rows
    if n == 1:
        return LaurentMatrix([[ONE]])
    idx = range(n)
    adj = [[ZERO] * n for _ in idx]
    for i in idx:
        for j in idx:
            cof = determinant(M.submatrix([r for r in idx if r != i],
                                          [c for c in idx if c != j]))
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return LaurentMatrix(adj)


# -- Hermite canonical form ------------------------------------------------

@dataclass(frozen=True)
class HermiteResult:
    canonical: LaurentMatrix
    transform: LaurentMatrix
    pivots: tuple  # (row, col) of each pivot


def _row_axpy(rows, dst, src, q):
    """rows[dst] -= q * rows[src]"""
    rs = rows[src]
    rows[dst] = [a - q * b if b else a for a, b in zip(rows[dst], rs)]


def _residue_multiplier(a: LaurentPolynomial, p: LaurentPolynomial) -> LaurentPolynomial:
    """Multiplier ``q`` such that ``a - q*p`` is an ordinary polynomial of
    degree ``< deg p``.  ``p`` is ordinary with non-zero constant term."""
    q = ZERO
    p0 = p.coeffs[0]
    while a and a.low < 0:
        t = LaurentPolynomial.monomial(a.coeffs[0] * _reciprocal(p0), a.low)
        a = a - t * p
        q = q + t
    if a:
        q2, _ = _divmod_poly(a, p)
        q = q + q2
    return q


def hermite_form(M: LaurentMatrix) -> HermiteResult:
    """Row Hermite form over the Laurent polynomial ring.

    The result is an upper staircase matrix obtained by unimodular row
    operations.  Each pivot is the unit-normalised associate of itself: an
    ordinary monic polynomial with non-zero constant term (``z`` is a unit).
    Entries above a pivot are reduced to ordinary polynomials of smaller
    degree.  Zero rows collect at the bottom.  ``transform @ M == canonical``.
    """
    p, n = M.shape
    rows = [list(r) + [ONE if i == j else ZERO for j in range(p)]
            for i, r in enumerate(M.tolist())]
    r = 0
    pivots = []
    for c in range(n):
        if r == p:
            break
        while True:
            nz = [i for i in range(r, p) if rows[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: (rows[i][c].span, i))
            if piv != r:
                rows[r], rows[piv] = rows[piv], rows[r]
            clean = True
            for i in range(r + 1, p):
                if rows[i][c]:
                    q, _ = rows[i][c].divmod(rows[r][c])
                    _row_axpy(rows, i, r, q)
                    if rows[i][c]:
                        clean = False
            if clean:
                break
        if not rows[r][c]:
            continue
        pv = rows[r][c]
        unit = LaurentPolynomial.monomial(
            _reciprocal(pv.leading()), -pv.low)
        rows[r] = [e * unit for e in rows[r]]
        pv = rows[r][c]
        for i in range(r):
            if rows[i][c]:
                q = _residue_multiplier(rows[i][c], pv)
                if q:
                    _row_axpy(rows, i, r, q)
        pivots.append((r, c))
        r += 1
    canonical = LaurentMatrix([row[:n] for row in rows])
    transform = LaurentMatrix([row[n:] for row in rows])
    return HermiteResult(canonical, transform, tuple(pivots))

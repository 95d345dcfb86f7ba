from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from ltiproc.laurent import ONE, ZERO, LaurentMatrix, LaurentPolynomial
from ltiproc.textio import parse_matrix


def M(text):
    return parse_matrix(text)


def rand_rational(rng, lo=-9, hi=9, den=9, nonzero=False):
    while True:
        q = Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, den + 1)))
        if q or not nonzero:
            return q


def rand_poly(rng, max_span=2, low_range=(-1, 1), zero_prob=0.0):
    if rng.random() < zero_prob:
        return ZERO
    span = int(rng.integers(0, max_span + 1))
    low = int(rng.integers(low_range[0], low_range[1] + 1))
    return LaurentPolynomial([rand_rational(rng) for _ in range(span + 1)], low)


def rand_matrix(rng, p, n, **kw):
    return LaurentMatrix([[rand_poly(rng, **kw) for _ in range(n)] for _ in range(p)])


def rand_unimodular(rng, n, factors=4, max_span=1):
    """Product of elementary unimodular factors: swaps, unit scalings
    lambda z^k and row additions with Laurent multipliers."""
    U = LaurentMatrix.identity(n)
    for _ in range(factors):
        rows = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        kind = rng.integers(0, 3) if n > 1 else 1
        if kind == 0:
            i, j = rng.choice(n, 2, replace=False)
            rows[i], rows[j] = rows[j], rows[i]
        elif kind == 1:
            i = int(rng.integers(n))
            rows[i][i] = LaurentPolynomial.monomial(
                rand_rational(rng, nonzero=True), int(rng.integers(-2, 3)))
        else:
            i, j = rng.choice(n, 2, replace=False)
            rows[i][j] = rand_poly(rng, max_span=max_span)
        U = LaurentMatrix(rows) @ U
    return U


def leibniz_det(A: LaurentMatrix):
    """Brute-force determinant by permutation expansion."""
    n = A.rows
    total = ZERO
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = ONE
        for i in range(n):
            term = term * A[i, perm[i]]
        total = total + term * sign
    return total


def exact_rank(rows):
    """Rank of a rational matrix by Gaussian elimination."""
    A = [list(r) for r in rows]
    rank = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[rank], A[p] = A[p], A[rank]
        for i in range(rank + 1, len(A)):
            f = A[i][c] / A[rank][c]
            A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank


def rank_by_evaluation(A: LaurentMatrix, rng, points=6):
    """Max exact rank of A(z0) over random rational points z0 (oracle)."""
    best = 0
    for _ in range(points):
        z0 = Fraction(int(rng.integers(2, 1000)), int(rng.integers(1, 1000)))
        vals = [[e.evaluate_exact(z0) for e in A.row(i)] for i in range(A.rows)]
        best = max(best, exact_rank(vals))
    return best


def stable_scalar_poly(rng, degree):
    """Monic polynomial with rational roots in (-0.9, 0.9)."""
    p = ONE
    for _ in range(degree):
        r = Fraction(int(rng.integers(-9, 10)), 10)
        p = p * LaurentPolynomial([-r, 1])
    return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# -- acceptance report -----------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

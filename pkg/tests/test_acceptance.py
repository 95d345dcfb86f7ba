"""Acceptance gate.  Each criterion records one PASS/FAIL line (shown in the
terminal summary) before asserting."""

import time
from fractions import Fraction
from itertools import combinations

import numpy as np

from ltiproc.behavior import TrajectoryWindow, behaviors_equivalent, is_member, kernel_new
from ltiproc.errors import RankDeficient
from ltiproc.laurent import LaurentMatrix, LaurentPolynomial, Z
from ltiproc.process import (LtiProcessModel, complementary,
                             has_full_event_algebra, interconnect)
from ltiproc.sim import (SimConfig, compare_spectrum, residual_noise, simulate,
                         welch_spectrum)
from ltiproc.spectral import (SpectralDensity, density_eval, density_from_kernel,
                              scalar_spectral_factor, shape_distance,
                              unimodular_equivalent)

from conftest import (ACCEPTANCE_LINES, M, leibniz_det, rand_matrix,
                      rand_unimodular, stable_scalar_poly)


def record(tag, ok, detail):
    line = f"{tag} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


# -- shared sweep ---------------------------------------------------------------

def _poly_mul(p, q):
    """Coefficient lists, lowest power first."""
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def brute_stack_det(a1, b1, a2, b2):
    """det [[z + a1, z + b1], [z + b2, z + a2]] as a coefficient list."""
    main = _poly_mul([a1, 1], [a2, 1])
    anti = _poly_mul([b1, 1], [b2, 1])
    return [x - y for x, y in zip(main, anti)]


def sweep_tuples(n=1000, seed=7):
    """Random rationals in (-1, 1)^4; a quarter of the draws are steered
    onto the degenerate sets (equal sums and/or equal products)."""
    rng = np.random.default_rng(seed)

    def q():
        return Fraction(int(rng.integers(-99, 100)), 100)

    out = []
    for k in range(n):
        a1, b1, a2, b2 = q(), q(), q(), q()
        mode = k % 8
        if mode == 1:
            b1, b2 = a2, a1            # both coincide: det == 0
        elif mode == 2:
            b2 = a1 + a2 - b1          # equal sums: constant det
            if not -1 < b2 < 1:
                b2 = q()
        elif mode == 3 and b1 != 0:
            b2 = a1 * a2 / b1          # equal products: det ~ z
        out.append((a1, b1, a2, b2))
    return out


def kernels(a1, b1, a2, b2):
    K1 = kernel_new(LaurentMatrix([[Z + a1, Z + b1]]))
    K2 = kernel_new(LaurentMatrix([[Z + b2, Z + a2]]))
    return K1, K2


# -- criteria -------------------------------------------------------------------

def test_ac1_complementarity_sweep():
    t0 = time.perf_counter()
    tuples = sweep_tuples()
    agree, degenerate = 0, 0
    for tup in tuples:
        expected = any(c != 0 for c in brute_stack_det(*tup))
        degenerate += not expected
        agree += complementary(*kernels(*tup)) == expected
    h = Fraction(1, 2), Fraction(1, 5), Fraction(1, 10), Fraction(3, 10)
    fixture = complementary(*kernels(*h))
    P = interconnect(*(LtiProcessModel(K) for K in kernels(*h)))
    display = P.kernel.matrix == M("[z + 0.5, z + 0.2; z + 0.3, z + 0.1]")
    elapsed = time.perf_counter() - t0
    ok = agree == len(tuples) and fixture and display and elapsed < 10
    record("AC1", ok, f"{agree}/{len(tuples)} agree ({degenerate} rank-deficient), "
                      f"fixture={fixture}, stacked display={display}, {elapsed:.2f}s")


def test_ac2_full_event_algebra_sweep():
    t0 = time.perf_counter()
    tuples = sweep_tuples()
    agree, monomials = 0, 0
    for tup in tuples:
        expected = sum(c != 0 for c in brute_stack_det(*tup)) == 1
        monomials += expected
        agree += has_full_event_algebra(*kernels(*tup)) == expected
    fixture = has_full_event_algebra(*kernels(Fraction(2, 5), Fraction(1, 5),
                                             Fraction(1, 10), Fraction(1, 5)))
    elapsed = time.perf_counter() - t0
    ok = agree == len(tuples) and fixture and elapsed < 10
    record("AC2", ok, f"{agree}/{len(tuples)} agree ({monomials} monomial dets), "
                      f"fixture={fixture}, {elapsed:.2f}s")


def _division_oracle(R1: LaurentMatrix, R2: LaurentMatrix) -> bool:
    """R1 = U R2 with U unimodular, decided without canonical forms: pick a
    non-singular column block S of R2, divide R1_S adj(R2_S) by det(R2_S)
    exactly, then check U R2 = R1 and that det U is a monomial."""
    m, n = R2.shape
    for cols in combinations(range(n), m):
        B = R2.submatrix(range(m), cols)
        d = leibniz_det(B)
        if not d.is_zero():
            break
    else:
        raise AssertionError("R2 is rank deficient")
    adj = LaurentMatrix([[(-1) ** (i + j) * leibniz_det(B.submatrix(
        [k for k in range(m) if k != j], [k for k in range(m) if k != i]))
        if m > 1 else LaurentPolynomial([1]) for j in range(m)] for i in range(m)])
    P = R1.submatrix(range(m), cols) @ adj
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            q, r = P[i, j].divmod(d)
            if not r.is_zero():
                return False
            row.append(q)
        rows.append(row)
    U = LaurentMatrix(rows)
    if U @ R2 != R1:
        return False
    return sum(c != 0 for c in leibniz_det(U).coeffs) == 1


def _full_rank(rng, m, n):
    while True:
        R = rand_matrix(rng, m, n, max_span=2)
        try:
            return kernel_new(R)
        except RankDeficient:
            continue


def test_ac3_behavior_equivalence():
    rng = np.random.default_rng(31)
    t0 = time.perf_counter()
    related = 0
    for _ in range(200):
        m = int(rng.integers(1, 3))
        K = _full_rank(rng, m, int(rng.integers(m, 4)))
        U = rand_unimodular(rng, m, factors=int(rng.integers(1, 5)))
        related += behaviors_equivalent(K, kernel_new(U @ K.matrix))
    agree, trues = 0, 0
    for k in range(200):
        m = int(rng.integers(1, 3))
        n = int(rng.integers(m, 4))
        K1 = _full_rank(rng, m, n)
        if k % 2:
            K2 = _full_rank(rng, m, n)
        else:
            # left multiple by a random square factor, unimodular or not
            V = rand_unimodular(rng, m) if k % 4 == 0 else rand_matrix(rng, m, m, max_span=1)
            try:
                K2 = kernel_new(V @ K1.matrix)
            except RankDeficient:
                K2 = _full_rank(rng, m, n)
        verdict = behaviors_equivalent(K1, K2)
        oracle = _division_oracle(K1.matrix, K2.matrix)
        trues += oracle
        agree += verdict == oracle
    elapsed = time.perf_counter() - t0
    ok = related == 200 and agree == 200 and elapsed < 30
    record("AC3", ok, f"U*R pairs {related}/200 equivalent; independent pairs "
                      f"{agree}/200 match division oracle ({trues} equivalent), {elapsed:.2f}s")


def _stable_square_kernel(rng, n):
    if n == 1:
        return kernel_new(LaurentMatrix([[stable_scalar_poly(rng, int(rng.integers(1, 4)))]]))
    D = LaurentMatrix([[stable_scalar_poly(rng, int(rng.integers(0, 3))) if i == j
                        else LaurentPolynomial([]) for j in range(n)] for i in range(n)])
    return kernel_new(rand_unimodular(rng, n, factors=3) @ D @ rand_unimodular(rng, n, factors=2))


def _aligned(a, b):
    t0, t1 = max(a.start_time, b.start_time), min(a.end_time, b.end_time)
    return (a.samples[t0 - a.start_time:t1 - a.start_time + 1],
            b.samples[t0 - b.start_time:t1 - b.start_time + 1])


def test_ac4_residual_recovers_noise():
    rng = np.random.default_rng(41)
    worst, checked = 0.0, 0
    for k in range(20):
        K = _stable_square_kernel(rng, 1 if k < 10 else 2)
        w, e = simulate(LtiProcessModel(K), SimConfig(4000, 200, seed=k), return_noise=True)
        r, n = _aligned(residual_noise(K, w), e)
        assert len(r) > 3000
        worst = max(worst, float(np.max(np.abs(r - n))))
        checked += 1
    record("AC4", worst < 1e-10, f"{checked} kernels (10 scalar, 10 2x2), "
                                 f"max |residual - noise| = {worst:.3g}")


def test_ac5_spectral_identity():
    K = kernel_new(M("[z - 0.5]"))
    D = density_from_kernel(K)
    vals = density_eval(D, 1024)[:, 0, 0]
    e0, epi = abs(vals[0] - 4), abs(vals[512] - 1 / 2.25)
    errors = []
    for seed in (1, 2, 3):
        w = simulate(LtiProcessModel(K), SimConfig(2 ** 17, 1000, seed=seed))
        errors.append(compare_spectrum(welch_spectrum(w), D).mean_relative_error)
    ok = e0 < 1e-12 and epi < 1e-12 and max(errors) < 0.05
    record("AC5", ok, f"|Phi(0)-4|={e0:.2g}, |Phi(pi)-1/2.25|={epi:.2g}, Welch mean "
                      f"relative errors {', '.join(f'{x:.4f}' for x in errors)}")


def _random_min_phase(rng):
    degree = int(rng.integers(0, 7))
    roots = []
    while len(roots) < degree:
        r = 0.9 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        if degree - len(roots) >= 2 and rng.random() < 0.5:
            roots += [r, np.conj(r)]
        else:
            roots.append(r.real)
    b = LaurentPolynomial.from_roots(np.array(roots)).to_float()
    b = b * (float(rng.uniform(0.1, 10.0)) / b.coeffs[-1])
    return b.shift(-b.high)  # causal: g (1 + c1 z^-1 + ...)


def test_ac6_factorization_roundtrip():
    rng = np.random.default_rng(61)
    worst, bad_gain = 0.0, 0
    for _ in range(100):
        w = _random_min_phase(rng)
        got = scalar_spectral_factor(w * w.star())
        num, den = got.value.entries[0, 0], got.value.denominator
        assert den == LaurentPolynomial([1]) and num.low == w.low
        true = np.array(w.coeffs, dtype=float)
        est = np.array(num.coeffs, dtype=float)
        gain = float(est @ true / (true @ true))
        bad_gain += gain <= 0
        worst = max(worst, float(np.max(np.abs(est / gain - true))))
    ok = worst < 1e-6 and bad_gain == 0
    record("AC6", ok, f"100 factors (degree <= 6), max coefficient error {worst:.3g}, "
                      f"non-positive gains {bad_gain}")


def test_ac7_unimodular_invariance():
    rng = np.random.default_rng(71)
    eq = sum(
        unimodular_equivalent(W.times(V), W)
        for W, V in ((density_from_kernel(_stable_square_kernel(rng, n)).factor,
                      rand_unimodular(rng, n))
                     for n in rng.integers(1, 3, size=100)))
    worst_shift = 0.0
    for _ in range(100):
        D1 = density_from_kernel(_stable_square_kernel(rng, 1))
        D2 = density_from_kernel(_stable_square_kernel(rng, 1))
        moved = []
        for D in (D1, D2):
            lam = Fraction(int(rng.integers(1, 50)), int(rng.integers(1, 50))) * int(rng.choice([-1, 1]))
            u = LaurentMatrix([[LaurentPolynomial.monomial(lam, int(rng.integers(-4, 5)))]])
            moved.append(SpectralDensity(D.factor.times(u)))
        worst_shift = max(worst_shift, abs(shape_distance(*moved) - shape_distance(D1, D2)))
    D = density_from_kernel(_stable_square_kernel(rng, 1))
    worst_scale = max(shape_distance(D, D.scaled(a)) for a in (0.1, 1, 10))
    ok = eq == 100 and worst_shift < 1e-9 and worst_scale < 1e-12
    record("AC7", ok, f"W*V ~ W in {eq}/100; monomial shift deviation {worst_shift:.2g}; "
                      f"max d(Phi, a*Phi) {worst_scale:.2g}")


def test_ac8_constant_windows():
    rng = np.random.default_rng(81)
    K = kernel_new(M("[z - 1]"))
    members = rejected = 0
    for _ in range(100):
        L = int(rng.integers(2, 40))
        c = Fraction(int(rng.integers(-1000, 1000)), int(rng.integers(1, 100)))
        members += is_member(K, TrajectoryWindow.scalar([c] * L), tol=0)
        members += is_member(K, TrajectoryWindow.scalar([float(c)] * L), tol=0)
        vals = [c] * L
        vals[int(rng.integers(L))] += Fraction(1, int(rng.integers(1, 10 ** 6)))
        rejected += not is_member(K, TrajectoryWindow.scalar(vals), tol=0)
        noisy = rng.standard_normal(L)
        rejected += not is_member(K, TrajectoryWindow.scalar(noisy), tol=0)
    ok = members == 200 and rejected == 200
    record("AC8", ok, f"constant windows accepted {members}/200, "
                      f"non-constant rejected {rejected}/200 (tol 0)")

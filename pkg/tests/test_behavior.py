from fractions import Fraction

import numpy as np
import pytest

from ltiproc.behavior import (KernelRepresentation, TrajectoryWindow,
                              apply_shift, behaviors_equivalent, intersect,
                              is_member, kernel_new, kernel_reduce)
from ltiproc.errors import (DimensionMismatch, RankDeficient, ShapeMismatch,
                            SignalDimensionMismatch, WindowTooShort, ZeroMatrix)
from ltiproc.laurent import LaurentMatrix, determinant, hermite_form

from conftest import M, rand_matrix, rand_unimodular

half = Fraction(1, 2)


def win(values, start=0):
    return TrajectoryWindow.scalar(values, start)


# -- construction -------------------------------------------------------------

def test_kernel_new_valid():
    K = kernel_new(M("[z - 1]"))
    assert (K.m, K.n) == (1, 1)
    K = kernel_new(M("[z + 0.5, z + 0.2]"))
    assert (K.m, K.n) == (1, 2)
    assert K.stencil == (0, 1)


def test_kernel_new_rank_deficient():
    with pytest.raises(RankDeficient) as info:
        kernel_new(M("[z, z; 1, 1]"))
    assert info.value.actual_rank == 1
    with pytest.raises(RankDeficient):
        kernel_new(M("[1, 0; 0, 0]"))


def test_kernel_reduce_examples():
    assert kernel_reduce(M("[z, z; 1, 1]")).matrix == M("[1, 1]")
    assert kernel_reduce(M("[z - 1; z^2 - z]")).matrix == M("[z - 1]")
    with pytest.raises(ZeroMatrix):
        kernel_reduce(LaurentMatrix.zeros(2, 2))


def test_kernel_reduce_full_rank_is_canonical(rng):
    for _ in range(20):
        A = rand_matrix(rng, 2, 3)
        if A.zero_rows():
            continue
        K = kernel_reduce(A)
        assert K.matrix == hermite_form(A).canonical
        assert behaviors_equivalent(K, kernel_new(A))


# -- trajectories ---------------------------------------------------------------

def test_window_validation():
    with pytest.raises(ValueError):
        TrajectoryWindow(0, np.zeros((0, 1)))
    w = win([1, 2, 3], start=-4)
    assert w.is_exact() and w.end_time == -2 and list(w.times) == [-4, -3, -2]
    assert not win([0.5, 1.0]).is_exact()


def test_apply_shift_examples():
    K = kernel_new(M("[z - 1]"))
    assert apply_shift(K, win([3, 3, 3, 3])) == win([0, 0, 0])
    assert apply_shift(K, win([0, 1, 2])) == win([1, 1])
    K2 = kernel_new(M("[1, -1]"))
    r = apply_shift(K2, TrajectoryWindow(0, [[1, 1], [2, 2]]))
    assert r == win([0, 0])


def test_apply_shift_time_alignment():
    # stencil [-1, 2]: output covers [t1 + 1, t2 - 2]
    K = kernel_new(M("[z^2 + z^-1]"))
    w = win(list(range(10)), start=5)
    r = apply_shift(K, w)
    assert r.start_time == 6 and r.end_time == 12
    assert r.samples[0, 0] == 3  # w(8) + w(5)


def test_apply_shift_errors():
    K = kernel_new(M("[z^2 - 1]"))
    with pytest.raises(WindowTooShort):
        apply_shift(K, win([1, 2]))
    with pytest.raises(DimensionMismatch):
        apply_shift(K, TrajectoryWindow(0, [[1, 2], [3, 4], [5, 6]]))


def test_is_member_examples():
    K = kernel_new(M("[z - 1]"))
    assert is_member(K, win([7, 7, 7, 7, 7]), tol=0)
    assert not is_member(K, win([1, 2, 3, 4]), tol=0)
    G = kernel_new(M("[z - 0.5]"))
    assert is_member(G, win([0.5 ** t for t in range(6)]), tol=1e-12)
    assert is_member(G, win([half ** t for t in range(6)]))
    assert not is_member(G, win([half ** t for t in range(5)] + [1]))


def test_apply_shift_linear(rng):
    for _ in range(20):
        K = kernel_new(rand_matrix(rng, 1, 2, low_range=(-1, 1)))
        a = TrajectoryWindow(0, rng.integers(-5, 6, (8, 2)).tolist())
        b = TrajectoryWindow(0, rng.integers(-5, 6, (8, 2)).tolist())
        c = Fraction(int(rng.integers(-4, 5)), 3)
        combo = TrajectoryWindow(0, a.samples + c * b.samples)
        lhs = apply_shift(K, combo).samples
        rhs = apply_shift(K, a).samples + c * apply_shift(K, b).samples
        assert np.all(lhs == rhs)


def test_apply_shift_commutes_with_time_shift(rng):
    K = kernel_new(M("[z - 3/4, 2 + z^-1]"))
    w = TrajectoryWindow(-3, rng.integers(-5, 6, (9, 2)).tolist())
    assert apply_shift(K, w.shifted(11)) == apply_shift(K, w).shifted(11)


# -- equivalence ----------------------------------------------------------------

def test_equivalence_examples():
    K1 = kernel_new(M("[z + 0.5, z + 0.2]"))
    assert behaviors_equivalent(K1, kernel_new(M("[2z^2 + z, 2z^2 + 0.4z]")))
    assert not behaviors_equivalent(K1, kernel_new(M("[z + 0.3, z + 0.2]")))
    assert behaviors_equivalent(K1, K1)
    with pytest.raises(ShapeMismatch):
        behaviors_equivalent(K1, kernel_new(M("[1, 0; 0, 1]")))


def test_equivalence_under_unimodular_action(rng):
    for _ in range(40):
        m, n = int(rng.integers(1, 3)), int(rng.integers(2, 4))
        R = rand_matrix(rng, m, n)
        if R.zero_rows() or hermite_form(R).canonical.zero_rows():
            continue
        U = rand_unimodular(rng, m)
        assert behaviors_equivalent(kernel_new(R), kernel_new(U @ R))


def test_equivalence_is_an_equivalence_relation(rng):
    R = kernel_new(M("[z + 1/3, 1; z^-1, z - 2]"))
    S = kernel_new(rand_unimodular(rng, 2) @ R.matrix)
    T = kernel_new(rand_unimodular(rng, 2) @ S.matrix)
    assert behaviors_equivalent(S, R) and behaviors_equivalent(R, S)
    assert behaviors_equivalent(R, T)
    other = kernel_new(M("[z + 1/3, 1; z^-1, z - 3]"))
    assert not behaviors_equivalent(R, other) and not behaviors_equivalent(other, R)


def test_equivalent_kernels_share_members():
    K1 = kernel_new(M("[z - 1/2]"))
    K2 = kernel_new(M("[3z^-2 - 3/2*z^-3]"))
    w = win([half ** t for t in range(8)])
    assert behaviors_equivalent(K1, K2)
    assert is_member(K1, w) and is_member(K2, w)


# -- intersection -------------------------------------------------------------

def test_intersect_examples():
    I = intersect(kernel_new(M("[1, 0]")), kernel_new(M("[0, 1]")))
    assert I.matrix == LaurentMatrix.identity(2)
    K = kernel_new(M("[z + 1, 2z]"))
    assert behaviors_equivalent(intersect(K, K), K)
    with pytest.raises(SignalDimensionMismatch):
        intersect(K, kernel_new(M("[1]")))


def test_intersect_example_stack():
    K1 = kernel_new(M("[z + 0.5, z + 0.2]"))
    K2 = kernel_new(M("[z + 0.3, z + 0.1]"))
    I = intersect(K1, K2)
    assert I.m == 2
    d = determinant(I.matrix)
    assert d * (Fraction(1, 10) / d.leading()) == M("[0.1z - 0.01]")[0, 0]


def test_intersect_membership():
    K1 = kernel_new(M("[z + 0.5, z + 0.2]"))
    K2 = kernel_new(M("[z + 0.3, z + 0.1]"))
    I = intersect(K1, K2)
    # det = 0.1 z - 0.01, so the intersection is spanned by v * 0.1^t with
    # v in the kernel of the stacked matrix at z = 0.1
    tenth = Fraction(1, 10)
    w = TrajectoryWindow(0, [[tenth ** t, -2 * tenth ** t] for t in range(6)])
    assert is_member(K1, w) and is_member(K2, w) and is_member(I, w)
    u = TrajectoryWindow(0, [[(-half) ** t, 0] for t in range(6)])
    assert is_member(K1, u)
    assert not is_member(K2, u) and not is_member(I, u)

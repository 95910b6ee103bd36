import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prelie_ainfty import linalg
from prelie_ainfty.errors import NotInvertible
from prelie_ainfty.scalars import GF, QQ, ZZ


def _check_snf(M, ncols):
    U, D, V = linalg.smith_normal_form(M, ncols)
    assert linalg.matmul(ZZ, linalg.matmul(ZZ, U, M, ncols), V, ncols) == D
    assert abs(linalg.determinant(ZZ, U)) == 1
    assert abs(linalg.determinant(ZZ, V)) == 1
    diag = []
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
            elif x:
                diag.append(x)
    assert all(x > 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    return D


def test_snf_one_by_one():
    assert _check_snf([[2]], 1) == [[2]]


def test_snf_already_normal():
    assert _check_snf([[1, 0], [0, 0]], 2) == [[1, 0], [0, 0]]


def test_snf_hand_example():
    assert _check_snf([[2, 4], [6, 8]], 2) == [[2, 0], [0, 4]]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r))))
def test_snf_property(M):
    _check_snf(M, len(M[0]))


def test_invariant_factors():
    assert linalg.invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    assert linalg.invariant_factors([[0, 0]]) == []


def test_solve_identity():
    b = [Fraction(3), Fraction(-1, 2)]
    assert linalg.solve_exact(QQ, linalg.identity(QQ, 2), b) == b


def test_solve_integers_respects_divisibility():
    assert linalg.solve_exact(ZZ, [[2]], [1]) is None
    assert linalg.solve_exact(ZZ, [[2]], [4]) == [2]


def test_solve_gf2_pivot_rule():
    assert linalg.solve_exact(GF(2), [[1, 1]], [1]) == [1, 0]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: st.tuples(
    st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r),
    st.lists(st.integers(0, 1), min_size=r, max_size=r)))))
def test_solve_gf2_against_enumeration(data):
    M, b = data
    F = GF(2)
    n = len(M[0])
    x = linalg.solve_exact(F, M, b, n)
    exists = any(linalg.matvec(F, M, list(c)) == b for c in itertools.product((0, 1), repeat=n))
    assert (x is not None) == exists
    if x is not None:
        assert linalg.matvec(F, M, x) == b


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.integers(1, 3).flatmap(lambda c: st.tuples(
    st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r),
    st.lists(st.integers(-6, 6), min_size=r, max_size=r)))))
def test_solve_integers_property(data):
    M, b = data
    n = len(M[0])
    x = linalg.solve_exact(ZZ, M, b, n)
    if x is not None:
        assert linalg.matvec(ZZ, M, x) == b
    else:
        # no integer solution in a generous box, and over QQ maybe one
        for c in itertools.product(range(-6, 7), repeat=n):
            assert linalg.matvec(ZZ, M, list(c)) != b


def test_solve_rationals_inconsistent():
    assert linalg.solve_exact(QQ, [[1, 1], [1, 1]], [1, 2], 2) is None


def test_inverse_and_determinant():
    M = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    inv = linalg.inverse(QQ, M)
    assert linalg.matmul(QQ, M, inv) == linalg.identity(QQ, 2)
    assert linalg.determinant(QQ, M) == 1
    assert linalg.determinant(ZZ, [[2, 0], [0, 3]]) == 6
    with pytest.raises(NotInvertible):
        linalg.inverse(ZZ, [[2, 0], [0, 1]])


def test_nullspace_and_rank():
    M = [[1, 2, 3], [2, 4, 6]]
    K = linalg.nullspace(QQ, M, 3)
    assert len(K) == 2
    for v in K:
        assert linalg.matvec(QQ, M, v) == [0, 0]
    assert linalg.rank(ZZ, M) == 1


def test_reduce_map_integers():
    red = linalg.reduce_map(ZZ, [[2, 0], [0, 0]], 2, 2)
    assert red.invariants == [2]
    for img, pre in zip(red.image, red.preimage):
        assert linalg.matvec(ZZ, [[2, 0], [0, 0]], pre) == img
    assert len(red.kernel) == 1


def test_complement_reports_torsion():
    reps, torsion = linalg.complement(ZZ, [[2, 0]], [[1, 0], [0, 1]], 2)
    assert torsion == [2]
    assert len(reps) == 1
    reps, torsion = linalg.complement(QQ, [[Fraction(1), Fraction(1)]], [[1, 0], [0, 1]], 2)
    assert reps == [[1, 0]] and torsion == []

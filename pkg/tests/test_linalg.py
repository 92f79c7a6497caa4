import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import oracle_in_span, oracle_rank, q_matrices, small_q
from endomonoid.errors import ParseError
from endomonoid.fields import GF, QQ, Fp, PrimeField, parse_field
from endomonoid.linalg import (
    LabeledSpace,
    Mat,
    Subspace,
    eigenspace,
    invariant_under,
    kernel,
    kernel_sparse,
    rank,
    rref,
    subspace_contains,
    subspace_intersect,
    subspace_sum,
)


# fields


def test_fp_arithmetic():
    F = GF(11)
    a, b = F(7), F(5)
    assert a + b == F(1)
    assert a * b == F(2)
    assert a / b * b == a
    assert -a == F(4)
    assert a**10 == F.one
    assert F(3) ** -1 == F(4)


def test_fp_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GF(7)(3) / GF(7)(0)


def test_prime_field_rejects_composite():
    with pytest.raises(ValueError):
        PrimeField(12)


def test_field_parse_and_format_roundtrip():
    assert QQ.parse("-3/6") == Fraction(-1, 2)
    assert QQ.format(Fraction(-1, 2)) == "-1/2"
    F = GF(13)
    assert F.parse("20") == F(7)
    assert F.parse(F.format(F(9))) == F(9)
    with pytest.raises(ParseError):
        QQ.parse("1/0x")


def test_parse_field_tags():
    assert parse_field("q") is QQ
    assert parse_field("fp:17") == GF(17)
    with pytest.raises(Exception):
        parse_field("fp:x")


@given(st.integers(), st.integers(), st.sampled_from([11, 13, 17]))
def test_fp_matches_integer_mod(a, b, p):
    F = GF(p)
    assert F(a) * F(b) == F(a * b)
    assert F(a) - F(b) == F(a - b)
    assert int(F(a) + F(b)) == (a + b) % p


# rref / rank / kernel


def test_rank_hand_case():
    m = Mat.of([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    k = kernel(m)
    assert k.dim == 1
    (v,) = k.rows()
    assert all(m.apply(k.dense()[0])[i] == 0 for i in range(3))
    assert v


def test_rref_hand_case():
    r, piv = rref(Mat.of([[0, 2, 4], [1, 1, 1]]))
    assert piv == [0, 1]
    assert r.rows == ((1, 0, -1), (0, 1, 2))


@given(q_matrices())
def test_rref_idempotent(rows):
    m = Mat.of(rows)
    r, piv = rref(m)
    r2, piv2 = rref(r)
    assert r2 == r and piv2 == piv


@given(q_matrices())
def test_rank_nullity(rows):
    m = Mat.of(rows)
    assert rank(m) + kernel(m).dim == m.ncols
    assert rank(m) == oracle_rank(rows)


@given(q_matrices())
def test_kernel_vectors_are_annihilated(rows):
    m = Mat.of(rows)
    for v in kernel(m).dense():
        assert all(x == 0 for x in m.apply(v))


@given(q_matrices(max_rows=5, max_cols=6), st.lists(small_q, min_size=6, max_size=6))
def test_contains_agrees_with_dense_solve(rows, v):
    n = len(rows[0])
    v = v[:n]
    s = Subspace.span(rows, n)
    assert subspace_contains(s, v) == oracle_in_span(rows, v)


@given(q_matrices(max_rows=4, max_cols=6))
def test_members_of_span_are_contained(rows):
    n = len(rows[0])
    s = Subspace.span(rows, n)
    rng = random.Random(len(rows))
    coeffs = [rng.randint(-3, 3) for _ in rows]
    combo = [sum(c * r[i] for c, r in zip(coeffs, rows)) for i in range(n)]
    assert combo in s
    assert s.coordinates(combo) is not None


@st.composite
def subspace_pair(draw):
    n = draw(st.integers(1, 8))
    vec = st.lists(small_q, min_size=n, max_size=n)
    a = draw(st.lists(vec, max_size=5))
    b = draw(st.lists(vec, max_size=5))
    return Subspace.span(a, n), Subspace.span(b, n)


@given(subspace_pair())
def test_grassmann_identity(pair):
    a, b = pair
    assert a.dim + b.dim == subspace_sum(a, b).dim + subspace_intersect(a, b).dim
    assert (a & b) <= a and (a & b) <= b
    assert a <= (a + b)


@given(q_matrices(max_rows=5, max_cols=5), st.randoms(use_true_random=False))
def test_canonical_equality_under_shuffle(rows, rng):
    n = len(rows[0])
    shuffled = list(rows)
    rng.shuffle(shuffled)
    scaled = [[2 * x for x in r] for r in shuffled]
    s1 = Subspace.span(rows, n)
    s2 = Subspace.span(scaled + rows[:1], n)
    assert s1 == s2
    assert s1.basis == s2.basis
    assert hash(s1) == hash(s2)


def test_intersection_hand_case():
    a = Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    b = Subspace.span([[0, 1, 0], [0, 0, 1]], 3)
    assert a & b == Subspace.span([[0, 1, 0]], 3)
    assert (a + b) == Subspace.full(3)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        Subspace.span([[1, 0]], 3) + Subspace.span([[1, 0]], 2)


def test_kernel_sparse_over_fp():
    F = GF(11)
    k = kernel_sparse([{0: F(1), 1: F(1)}], 2, F)
    assert k.dim == 1
    assert k.contains({0: F(1), 1: F(10)})


def test_eigenspace_and_invariance():
    m = Mat.diag([2, 2, 3])
    e2 = eigenspace(m, 2)
    assert e2 == Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    assert eigenspace(m, 5).dim == 0
    assert invariant_under(e2, m)
    shear = Mat.of([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
    assert not invariant_under(e2, shear)


def test_mat_algebra():
    a = Mat.of([[1, 2], [3, 4]])
    assert a @ Mat.identity(2) == a
    assert (a - a) == Mat.zeros(2)
    assert a.transpose()[0, 1] == 3
    assert (a @ a)[1, 1] == 22


def test_labeled_space():
    ls = LabeledSpace.from_elements(["x", "y", "z"], [{"x": 1, "y": 1}], QQ)
    assert ls.contains({"x": 2, "y": 2})
    assert not ls.contains({"x": 1})
    assert not ls.contains({"w": 1})
    assert ls.relabel(str.upper).contains({"X": 1, "Y": 1})
    with pytest.raises(ValueError):
        LabeledSpace.from_elements(["x"], [{"w": 1}], QQ)


def test_fp_entries_mix_with_ints():
    F = GF(5)
    s = Subspace.span([{0: F(1), 1: F(2)}], 2, F)
    assert s.contains({0: F(3), 1: F(1)})
    assert isinstance(s.basis[0][0][1], Fp)

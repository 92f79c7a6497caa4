import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from endomonoid.algebras import (
    GammaVector,
    LinMap,
    build_D,
    build_example1,
    build_exterior2,
    build_truncated,
    check_eigenspaces,
    check_bcd_annihilates_A,
    eigen_blocks,
    delta_equations,
    delta_system_solve,
    exterior_monoid_matrix,
    idempotents_bruteforce,
    induced_endo,
    is_endo,
    lambda_equations,
    lambda_system_solve,
    left_identity_check,
    literal_algebra,
    nilpotency_check,
    replay_witness,
    right_mult_operator,
    sample_pairs,
    tensor_map,
    zero_algebra,
)
from endomonoid.errors import CapacityError, NotInNormalizer, QuotientActionUndefined
from endomonoid.fields import GF, QQ
from endomonoid.linalg import Mat, Subspace
from endomonoid.pipeline import random_matrix
from endomonoid.tensorspace import P1, P2, TruncationSpec, extend_to_V, subspace_of_tensors, u_letter

U1 = u_letter(1)


def small_D(field=QQ, S_words=()):
    """dim U = 1, r = 2; S spanned by the given degree-2 words."""
    S = subspace_of_tensors([{w: 1} for w in S_words], 2, 3, field)
    return build_D(1, TruncationSpec(3, 2, S, field), GammaVector.default(field))


def bool_like_D(field=QQ):
    x = {(P1, U1, P1, U1): 1, (P2, P2, P1, U1): -1}
    spec = TruncationSpec(3, 4, subspace_of_tensors([x], 4, 3, field), field)
    return build_D(1, spec, GammaVector.default(field))


# gamma


def test_gamma_validation():
    assert GammaVector.default().bc == -1
    with pytest.raises(ValueError):
        GammaVector((2, 3, 4, 5, 6, 1))
    with pytest.raises(ValueError):
        GammaVector((2, 3, 4, 5, 6, 2))
    with pytest.raises(ValueError):
        GammaVector((2, 3, 4, 5, 6))
    with pytest.raises(ValueError):
        GammaVector((2, 3, 4, 5, 6, 7), GF(5))  # 7 = 2 mod 5


# left-identity algebra <e> + V


def test_example1_table():
    a = build_example1(2, 3)
    e, v1, v2 = 0, 1, 2
    assert a.mul_basis(e, e) == {e: 1}
    assert a.mul_basis(v1, e) == {v1: 3}
    assert a.mul_basis(e, v2) == {v2: 1}
    assert a.mul_basis(v1, v2) == {}
    with pytest.raises(ValueError):
        build_example1(1, 1)
    with pytest.raises(ValueError):
        build_example1(1, 0)


def test_example1_right_mult_by_e():
    a = build_example1(3, Fraction(5, 2))
    assert right_mult_operator(a, {0: 1}).to_mat() == Mat.diag([1] + [Fraction(5, 2)] * 3)


def test_example1_witness():
    a = build_example1(1, 3)
    sigma = LinMap.from_images([{0: 1, 1: 1}, {1: 1}], QQ)
    rep = is_endo(a, sigma, "all")
    assert not rep.ok and rep.witness == (0, 0)
    # σ(e·e) = e + v while σ(e)σ(e) = e + 4v
    assert a.mul(sigma.image(0), sigma.image(0)) == {0: 1, 1: 4}
    assert replay_witness(a, sigma, rep.witness)


def test_example1_idempotents_sympy_oracle():
    a, b, lam = sympy.symbols("a b lam")
    # (a e + b v)^2 = a^2 e + (1 + lam) a b v
    sols = sympy.solve([a**2 - a, (1 + 3) * a * b - b], [a, b], dict=True)
    assert sorted((s[a], s[b]) for s in sols) == [(0, 0), (1, 0)]
    found = idempotents_bruteforce(build_example1(1, 3, GF(11)))
    assert sorted(sorted((k, int(v)) for k, v in x.items()) for x in found) == [[], [(0, 1)]]


@pytest.mark.parametrize("dimV,p,lam", [(1, 5, 2), (1, 7, 3), (2, 5, 2), (2, 7, 4), (1, 11, 2)])
def test_example1_idempotents(dimV, p, lam):
    F = GF(p)
    assert idempotents_bruteforce(build_example1(dimV, lam, F)) == [{}, {0: F.one}]


# exterior algebra of a plane


def test_exterior_table():
    a = build_exterior2()
    assert a.mul_basis(1, 1) == {}
    assert a.mul_basis(1, 2) == {3: 1}
    assert a.mul_basis(2, 1) == {3: -1}
    assert a.mul_basis(0, 3) == {3: 1} and a.mul_basis(3, 0) == {3: 1}
    with pytest.raises(ValueError):
        build_exterior2(GF(2))


def test_exterior_matrix():
    assert exterior_monoid_matrix(Mat.identity(2), (0, 0)) == LinMap.identity(4)
    a = build_exterior2()
    swap = exterior_monoid_matrix(Mat.of([[0, 1], [1, 0]]), (1, 2))
    assert is_endo(a, swap, "all").ok
    wrong = exterior_monoid_matrix(Mat.of([[0, 1], [1, 0]]), (1, 2), 1)
    assert not is_endo(a, wrong, "all").ok


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_exterior_family(seed):
    rng = random.Random(seed)
    a = build_exterior2()
    b = random_matrix(rng, 2, QQ)
    c = (QQ.random(rng), QQ.random(rng))
    assert is_endo(a, exterior_monoid_matrix(b, c), "all").ok
    det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
    rep = is_endo(a, exterior_monoid_matrix(b, c, det + 1), "all")
    assert not rep.ok and replay_witness(a, exterior_monoid_matrix(b, c, det + 1), rep.witness)


# truncated tensor algebras


def test_truncated_hand_cases():
    a = build_truncated(TruncationSpec(1, 2))
    assert a.n == 2
    v, vv = 0, 1
    assert a.mul_basis(v, v) == {vv: 1}
    assert a.mul_basis(v, vv) == {}
    killed = build_truncated(TruncationSpec(1, 2, Subspace.full(1)))
    assert killed.n == 1 and killed.mul_basis(0, 0) == {}


@pytest.mark.parametrize("dimV,r,sdim", [(1, 3, 0), (2, 2, 1), (2, 3, 3), (3, 2, 2)])
def test_truncated_dimension_and_nilpotency(dimV, r, sdim):
    S = Subspace.span([{i: 1} for i in range(sdim)], dimV**r)
    a = build_truncated(TruncationSpec(dimV, r, S))
    assert a.n == sum(dimV**i for i in range(1, r)) + dimV**r - sdim
    assert nilpotency_check(a, r + 1)
    if sdim == 0:
        assert not nilpotency_check(a, r)


def test_truncated_idempotents():
    F = GF(11)
    assert idempotents_bruteforce(build_truncated(TruncationSpec(1, 3, field=F))) == [{}]
    assert idempotents_bruteforce(zero_algebra(1, GF(7))) == [{}]
    assert idempotents_bruteforce(build_truncated(TruncationSpec(2, 2, field=GF(3)))) == [{}]


def test_idempotent_capacity_and_field():
    with pytest.raises(CapacityError):
        idempotents_bruteforce(zero_algebra(8, GF(11)))
    with pytest.raises(ValueError):
        idempotents_bruteforce(zero_algebra(2, QQ))


def test_literal_algebra_idempotents():
    # K × K: idempotents are 0, (1,0), (0,1), (1,1)
    F = GF(5)
    a = literal_algebra(2, F, {(0, 0): {0: 1}, (1, 1): {1: 1}})
    assert len(idempotents_bruteforce(a)) == 4


def _end_A_spec():
    return TruncationSpec(2, 2, Subspace.span([{0: 1}], 4))


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_end_A_both_directions(seed):
    spec = _end_A_spec()
    a = build_truncated(spec)
    g = random_matrix(random.Random(seed), 2, QQ)
    if spec.normalized_by(g):
        assert is_endo(a, tensor_map(a, g), "all").ok
    else:
        with pytest.raises(QuotientActionUndefined):
            tensor_map(a, g)
        lift = tensor_map(a, g, check=False)
        rep = is_endo(a, lift, "all")
        assert not rep.ok and replay_witness(a, lift, rep.witness)


# D


def test_D_tables():
    dh = small_D()
    e, b, c, d = 0, 1, 2, 3
    p1 = dh.labels["P"][0]
    p2 = dh.labels["P"][1]
    assert dh.mul_basis(c, d) == {e: 1}
    assert dh.mul_basis(d, c) == {d: 1}
    assert dh.mul_basis(b, c) == {c: 1, b: -1}
    assert dh.mul_basis(c, b) == {c: -1}
    assert dh.mul_basis(c, c) == {b: 1}
    assert dh.mul_basis(d, b) == {p1: 1}
    assert dh.mul_basis(d, d) == {p2: 1}
    assert dh.mul_basis(b, b) == dh.mul_basis(b, d) == {}
    assert dh.mul_basis(p1, b) == {} and dh.mul_basis(b, p1) == {}
    assert dh.mul_basis(e, e) == {e: 1}


def test_D_rejects_bad_inputs():
    with pytest.raises(ValueError):
        build_D(2, TruncationSpec(3, 2), GammaVector.default())
    with pytest.raises(ValueError):
        build_D(1, TruncationSpec(3, 2), GammaVector.default(GF(11)))


def test_D_gamma_bc_general():
    g = GammaVector((Fraction(1, 2), 3, 5, 7, 11, 13))
    dh = build_D(1, TruncationSpec(3, 2), g)
    assert dh.mul_basis(1, 2) == {2: 1, 1: Fraction(3 - Fraction(1, 2), 3 - 5)}


@pytest.mark.parametrize("maker", [small_D, bool_like_D, lambda: small_D(S_words=[(P1, P1), (U1, P2)])])
def test_D_structure(maker):
    dh = maker()
    assert left_identity_check(dh, dh.labels["e"])
    ok, detail = check_eigenspaces(dh)
    assert ok, detail
    assert check_bcd_annihilates_A(dh)
    assert nilpotency_check(dh, dh.spec.r + 1, dh.labels["A"])
    blocks = eigen_blocks(dh)
    assert sorted(i for bl in blocks.values() for i in bl) == list(range(dh.n))


def test_D_dimension():
    dh = bool_like_D()
    assert dh.n == 4 + 3 + 9 + 27 + 81 - 1 == 123


def test_induced_endo_hand_cases():
    dh = small_D()
    assert induced_endo(dh, Mat.identity(1)) == LinMap.identity(dh.n)
    z = induced_endo(dh, Mat.zeros(1))
    tb = dh.tensor_basis
    for i in range(dh.n):
        img = z.image(i)
        if i < 4 or U1 not in tb.word(i):
            assert img == {i: 1}
        else:
            assert img == {}
    assert is_endo(dh, z, "all").ok


def test_induced_endo_off_normalizer():
    dh = bool_like_D()
    with pytest.raises(NotInNormalizer):
        induced_endo(dh, Mat.of([[2]]))
    assert is_endo(dh, induced_endo(dh, Mat.of([[1]])), "sample:200").ok


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_induced_endos_compose(seed):
    # S spanned by p1 p1 and u1 p2 is normalized by every g on U
    dh = small_D(S_words=[(P1, P1), (U1, P2)])
    rng = random.Random(seed)
    g, h = random_matrix(rng, 1, QQ), random_matrix(rng, 1, QQ)
    sg, sh = induced_endo(dh, g), induced_endo(dh, h)
    assert sg @ sh == induced_endo(dh, g @ h)
    assert is_endo(dh, sg, "all").ok and is_endo(dh, sg @ sh, "all").ok


def test_D_perturbations_rejected():
    dh = small_D()
    base = LinMap.identity(dh.n)
    p1, p2 = dh.labels["P"]
    e, b, c, d = 0, 1, 2, 3
    bad = [
        base.with_image(e, {e: 1, b: 1}),
        base.with_image(c, {d: 1}).with_image(d, {c: 1}),
        base.with_image(b, {c: 1}).with_image(c, {b: 1}),
        base.with_image(p1, {p1: 2}),
        base.with_image(p1, {p2: 1}).with_image(p2, {p1: 1}),
    ]
    for sigma in bad:
        rep = is_endo(dh, sigma, "all")
        assert not rep.ok and replay_witness(dh, sigma, rep.witness)


def test_endo_closure_under_composition():
    a = build_exterior2()
    rng = random.Random(3)
    for _ in range(10):
        s = exterior_monoid_matrix(random_matrix(rng, 2, QQ), (QQ.random(rng), QQ.random(rng)))
        t = exterior_monoid_matrix(random_matrix(rng, 2, QQ), (QQ.random(rng), QQ.random(rng)))
        assert is_endo(a, s @ t, "all").ok


def test_is_endo_policies():
    dh = bool_like_D()
    rep = is_endo(dh, LinMap.zero(dh.n), "all")
    assert rep.ok and rep.pairs_checked == 123 * 123 == 15129
    sampled = is_endo(dh, LinMap.identity(dh.n), "sample:50", seed=4)
    assert sampled.ok and sampled.seed == 4
    assert sampled.pairs_checked == len(sample_pairs(dh, 50, 4))
    assert sample_pairs(dh, 50, 4) == sample_pairs(dh, 50, 4)
    with pytest.raises(ValueError):
        is_endo(dh, LinMap.identity(3))
    with pytest.raises(ValueError):
        is_endo(dh, LinMap.identity(dh.n), "most")


def test_sampled_policy_covers_distinguished_pairs():
    dh = bool_like_D()
    sigma = LinMap.identity(dh.n).with_image(0, {0: 1, 1: 1})
    rep = is_endo(dh, sigma, "sample:1", seed=0)
    assert not rep.ok and rep.witness == (0, 0)


# λ and δ systems


def test_lambda_system_sympy_oracle():
    g = GammaVector.default()
    syms = sympy.symbols("le lb lc ld")
    eqs = [sympy.nsimplify(r) for r in lambda_equations(GammaVector((2, 3, 4, 5, 6, 7)))(*syms)]
    sols = sympy.solve(eqs, syms, dict=True)
    assert sorted(tuple(s.get(v, v) for v in syms) for s in sols) == [(0, 0, 0, 0), (1, 0, 0, 0)]
    assert g.bc == -1


@pytest.mark.parametrize("p", [11, 13, 17])
def test_lambda_system_default_gamma(p):
    assert lambda_system_solve(GammaVector.default(GF(p))) == [(0, 0, 0, 0), (1, 0, 0, 0)]


@settings(max_examples=15)
@given(st.sampled_from([11, 13]), st.randoms(use_true_random=False))
def test_lambda_system_any_admissible_gamma(p, rng):
    vals = rng.sample(range(2, p), 6)
    sols = lambda_system_solve(GammaVector(tuple(vals), GF(p)))
    assert sols == [(0, 0, 0, 0), (1, 0, 0, 0)]


def test_lambda_system_needs_prime_field():
    with pytest.raises(ValueError):
        lambda_system_solve(GammaVector.default())


def test_delta_system():
    assert delta_system_solve(GF(11)) == [(1, 1, 1)]
    assert delta_system_solve(QQ) == [(1, 1, 1)]
    assert delta_equations(1, 1, 1) == (0, 0, 0)
    db, dc, dd = sympy.symbols("db dc dd")
    assert sympy.solve(list(delta_equations(db, dc, dd)), [db, dc, dd], dict=True) == [{db: 1, dc: 1, dd: 1}]

"""Monoid presentation → subspace S ⊆ (P⊕U)^{⊗r} → rigidified algebra D.

The chain is
    orbit span of the generators  →  W = I(M) ∩ span
    →  W' = ξ^{-1}(W) in degrees ≤ h  →  W'' = ι(W')  →  S = ι_r(W'')
    →  D(P, U, S, γ),
followed by a verification harness that checks both L(U)_S = M and
End(D) = M ⊔ {0} on members and on sampled counterexamples.

Normalizer verification is relative to the supplied generators: if they
do not generate the full vanishing ideal, what is checked is equality
with their common zero locus.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebras import (
    AlgebraHandle,
    GammaVector,
    LinMap,
    build_D,
    check_eigenspaces,
    check_bcd_annihilates_A,
    delta_system_solve,
    induced_endo,
    is_endo,
    lambda_system_solve,
    left_identity_check,
    nilpotency_check,
    replay_witness,
)
from .errors import ContractViolation, NotInNormalizer
from .fields import GF, QQ, Field, PrimeField
from .linalg import LabeledSpace, Mat, Subspace
from .multipoly import (
    Poly,
    buchberger,
    intersect_with_ideal,
    orbit_span,
    poly_eval,
    poly_space,
    right_translate,
    space_polys,
)
from .tensorspace import (
    TruncationSpec,
    act_on_copies,
    degree_r_vector,
    extend_to_V,
    iota,
    iota_r,
    iota_space,
    normalizes,
    tensor_act,
    xi_kernel,
    xi_preimage_truncated,
)


@dataclass
class MonoidPresentation:
    d: int
    gens: list
    members: list = dc_field(default_factory=list)
    name: str = ""
    field: Field = QQ

    def __post_init__(self):
        if self.d < 1:
            raise ContractViolation("matrix size d must be >= 1")
        for f in self.gens:
            if f.nvars != self.d * self.d or f.field != self.field:
                raise ContractViolation(f"generator {f} does not live in K[x_kl] for d={self.d} over {self.field!r}")
        ident = Mat.identity(self.d, self.field)
        for f in self.gens:
            if poly_eval(f, ident):
                raise ContractViolation(f"the identity matrix does not satisfy the generator {f}")
        for m in self.members:
            if m.shape != (self.d, self.d):
                raise ContractViolation(f"member {m} is not {self.d}x{self.d}")
            for f in self.gens:
                if poly_eval(f, m):
                    raise ContractViolation(f"member {m} does not satisfy the generator {f}")
        if self.members and ident not in self.members:
            raise ContractViolation("the member list must include the identity matrix")

    def is_member(self, g: Mat) -> bool:
        return all(not poly_eval(f, g) for f in self.gens)

    def canonical_text(self) -> str:
        lines = [f"field {self.field.tag}", f"d {self.d}"]
        lines += [f"gen {f}" for f in self.gens]
        for m in self.members:
            lines.append("member " + " ".join(self.field.format(x) for row in m.rows for x in row))
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()


@dataclass
class Realization:
    d: int
    gamma: GammaVector
    h: int
    deg_bound: int
    r: int
    S: Subspace
    provenance: dict
    field: Field = QQ
    digest: str = ""
    name: str = ""

    @property
    def dimV(self) -> int:
        return self.d + 2

    def spec(self) -> TruncationSpec:
        return TruncationSpec(self.dimV, self.r, self.S, self.field)

    def build(self) -> AlgebraHandle:
        return build_D(self.d, self.spec(), self.gamma)

    def dim_D(self) -> int:
        n = self.dimV
        return 4 + sum(n**i for i in range(1, self.r)) + n**self.r - self.S.dim


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witnesses: list = dc_field(default_factory=list)

    def line(self) -> str:
        s = f"{'PASS' if self.passed else 'FAIL'} {self.name}"
        if self.detail:
            s += f" :: {self.detail}"
        return s


@dataclass
class VerificationReport:
    seed: int
    checks: list = dc_field(default_factory=list)
    tallies: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "", witnesses=None) -> Check:
        c = Check(name, bool(passed), detail, list(witnesses or []))
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        self.tallies.update(other.tallies)
        return self

    def lines(self) -> list[str]:
        out = [f"# seed={self.seed}"]
        for c in self.checks:
            out.append(c.line())
            out.extend(f"  witness {w}" for w in c.witnesses)
        out.append(f"VERDICT {'PASS' if self.passed else 'FAIL'} ({sum(c.passed for c in self.checks)}/{len(self.checks)} checks)")
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


# --- construction -----------------------------------------------------------------


def compute_W(p: MonoidPresentation) -> tuple[LabeledSpace, int, LabeledSpace]:
    """W = I(M) ∩ (orbit span of the generators); returns (W, h, orbit span)."""
    F = p.field
    if not p.gens:
        empty = poly_space([], 1, p.d, F)
        return empty, 1, empty
    orbit, h = orbit_span(p.gens)
    gb = buchberger(p.gens)
    W = intersect_with_ideal(orbit, gb)
    n = p.d * p.d
    for f in p.gens:
        if not W.contains(f.terms):
            raise ContractViolation(f"generator {f} is not in W")
    basis = space_polys(W, n)
    for w in basis:
        if not gb.contains(w):
            raise ContractViolation("W escaped the ideal")
    for m in p.members:
        for w in basis:
            if not W.contains(right_translate(w, m).terms):
                raise ContractViolation(f"W is not invariant under the member {m}")
    return W, h, orbit


def lift_and_embed(W: LabeledSpace, h: int, d: int, members: Sequence[Mat] = (), reduced: bool = False):
    """W' = ξ^{-1}(W) ∩ T_{≤h}(U^{⊕d}) and W'' = ι(W'); returns (W', W'', degBound)."""
    Wp = xi_preimage_truncated(W, h, d, reduced=reduced)
    Wpp = iota_space(Wp, d)
    support = {len(w) for el in Wpp.elements() for w in el}
    deg_bound = max(support) if support else 1
    for m in members:
        G = extend_to_V(m)
        for el in Wp.elements():
            if iota(act_on_copies(m, el), d) != tensor_act(G, iota(el, d)):
                raise ContractViolation(f"iota is not equivariant for the member {m}")
    return Wp, Wpp, deg_bound


def pad_to_S(Wpp: LabeledSpace, deg_bound: int, d: int) -> tuple[Subspace, int]:
    r = max(deg_bound, 2)
    dimV = d + 2
    vecs = [degree_r_vector(iota_r(el, r), r, dimV) for el in Wpp.elements()]
    S = Subspace.span(vecs, dimV**r, Wpp.field)
    if S.dim != Wpp.dim:
        raise AssertionError("iota_r lost dimension")
    return S, r


def realize(p: MonoidPresentation, gamma: GammaVector | None = None, reduced: bool = False) -> tuple[Realization, AlgebraHandle]:
    gamma = gamma or GammaVector.default(p.field)
    if gamma.field != p.field:
        raise ContractViolation("gamma and the presentation are over different fields")
    W, h, orbit = compute_W(p)
    Wp, Wpp, deg_bound = lift_and_embed(W, h, p.d, p.members, reduced=reduced)
    S, r = pad_to_S(Wpp, deg_bound, p.d)
    ker_dim = xi_kernel(p.d, h, p.field).dim if (p.gens and not reduced) else 0
    provenance = {
        "dim_orbit_span": orbit.dim,
        "dim_W": W.dim,
        "dim_W_prime": Wp.dim,
        "dim_W_second": Wpp.dim,
        "dim_S": S.dim,
        "dim_ker_xi": ker_dim,
    }
    real = Realization(p.d, gamma, h, deg_bound, r, S, provenance, p.field, p.digest(), p.name)
    return real, real.build()


# --- verification ---------------------------------------------------------------------


def random_matrix(rng: random.Random, d: int, field: Field, box: int = 3) -> Mat:
    return Mat.of([[field.random(rng, box) for _ in range(d)] for _ in range(d)], field)


def sample_nonmembers(p: MonoidPresentation, n: int, seed: int, max_tries: int = 10_000) -> list[Mat]:
    """n seeded random matrices violating some generator (none if there are no generators)."""
    if not p.gens or n <= 0:
        return []
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < n and tries < max_tries * n:
        tries += 1
        g = random_matrix(rng, p.d, p.field)
        if not p.is_member(g):
            out.append(g)
    return out


def _fmt_mat(m: Mat) -> str:
    return "[" + ";".join(" ".join(str(x) for x in row) for row in m.rows) + "]"


def verify_normalizer(real: Realization, p: MonoidPresentation, n_neg: int = 100, seed: int = 0) -> VerificationReport:
    rep = VerificationReport(seed)
    if not p.members:
        rep.add("normalizer.members", False, "no member matrices supplied")
        return rep
    bad = [m for m in p.members if not normalizes(extend_to_V(m), real.S, real.r, real.dimV)]
    rep.add(
        "normalizer.members",
        not bad,
        f"{len(p.members) - len(bad)}/{len(p.members)} members normalize S (relative to the given generators)",
        [f"member {_fmt_mat(m)} does not normalize S" for m in bad],
    )
    ident = Mat.identity(p.d, p.field)
    rep.add("normalizer.identity", normalizes(extend_to_V(ident), real.S, real.r, real.dimV))
    if not p.gens:
        rng = random.Random(seed)
        rand = [random_matrix(rng, p.d, p.field) for _ in range(n_neg)]
        ok = all(normalizes(extend_to_V(g), real.S, real.r, real.dimV) for g in rand)
        rep.add("normalizer.full", ok, f"{len(rand)} random matrices normalize S = 0")
        rep.tallies.update(normalizer_positive=len(p.members), normalizer_negative=0)
        return rep
    negs = sample_nonmembers(p, n_neg, seed)
    accepted = [g for g in negs if normalizes(extend_to_V(g), real.S, real.r, real.dimV)]
    rep.add(
        "normalizer.nonmembers",
        not accepted and len(negs) == n_neg,
        f"{len(negs) - len(accepted)}/{len(negs)} sampled non-members fail to normalize S",
        [f"false accept {_fmt_mat(g)} seed={seed}" for g in accepted],
    )
    rep.tallies.update(normalizer_positive=len(p.members) - len(bad), normalizer_negative=len(negs) - len(accepted))
    return rep


def perturbations(dh: AlgebraHandle, base: LinMap) -> list[tuple[str, LinMap]]:
    """Structured modifications of an endomorphism that must not be endomorphisms."""
    F = dh.field
    e, b, c, d = (dh.labels[k] for k in ("e", "b", "c", "d"))
    p1, p2 = dh.labels["P"]
    two = F(2)
    out = [
        ("e->e+b", base.with_image(e, {e: 1, b: 1})),
        ("swap c,d", base.with_image(c, {d: 1}).with_image(d, {c: 1})),
        ("scale p1 by 2", base.with_image(p1, {p1: two})),
        ("scale b,c,d by 2", base.with_image(b, {b: two}).with_image(c, {c: two}).with_image(d, {d: two})),
        ("swap p1,p2", base.with_image(p1, {p2: 1}).with_image(p2, {p1: 1})),
    ]
    return out


def verify_realization(
    real: Realization,
    p: MonoidPresentation,
    dh: AlgebraHandle | None = None,
    policy: str | None = None,
    n_neg: int = 100,
    seed: int = 0,
) -> VerificationReport:
    dh = dh or real.build()
    F = dh.field
    rep = VerificationReport(seed)

    z = is_endo(dh, LinMap.zero(dh.n, F), policy, seed)
    rep.add("endo.zero_map", z.ok, z.describe())

    pos_ok = 0
    maps = []
    for m in p.members:
        try:
            sigma = induced_endo(dh, m)
        except NotInNormalizer:
            rep.add(f"endo.member {_fmt_mat(m)}", False, "member is not in L(U)_S")
            continue
        res = is_endo(dh, sigma, policy, seed)
        rep.add(f"endo.member {_fmt_mat(m)}", res.ok, res.describe(), [] if res.ok else [f"pair {res.witness}"])
        pos_ok += res.ok
        maps.append((m, sigma))

    homs = []
    for m1, s1 in maps:
        for m2, s2 in maps:
            homs.append(induced_endo(dh, m1 @ m2) == s1.compose(s2))
    if homs:
        rep.add("endo.homomorphism", all(homs), f"{sum(homs)}/{len(homs)} member pairs compose correctly")

    negs = sample_nonmembers(p, n_neg, seed)
    rejected = 0
    leaks = []
    for g in negs:
        try:
            induced_endo(dh, g)
            leaks.append(f"induced map defined for non-member {_fmt_mat(g)} seed={seed}")
        except NotInNormalizer:
            rejected += 1
    if p.gens:
        rep.add("endo.nonmembers", not leaks, f"{rejected}/{len(negs)} non-members have no induced map", leaks)

    n_pert = 0
    pert_fail = []
    pert_wit = []
    for m, sigma in maps:
        for label, tau in perturbations(dh, sigma):
            n_pert += 1
            res = is_endo(dh, tau, policy, seed)
            if res.ok:
                pert_fail.append(f"{label} on member {_fmt_mat(m)} passed")
            elif not replay_witness(dh, tau, res.witness):
                pert_fail.append(f"{label} on member {_fmt_mat(m)}: witness {res.witness} does not replay")
            else:
                pert_wit.append(f"{label} member={_fmt_mat(m)} pair={res.witness[0]},{res.witness[1]}")
    rep.add("endo.perturbations", not pert_fail and n_pert > 0, f"{n_pert - len(pert_fail)}/{n_pert} perturbations rejected with replayable witnesses", pert_fail + pert_wit)

    rep.add("structure.left_identity", left_identity_check(dh, dh.labels["e"]))
    ok, detail = check_eigenspaces(dh)
    rep.add("structure.eigenspaces", ok, detail)
    rep.add("structure.bcd_annihilates_A", check_bcd_annihilates_A(dh))
    block = dh.labels["A"]
    if len(block) <= 400:
        nil = nilpotency_check(dh, real.r + 1, block) and not nilpotency_check(dh, real.r, block)
        rep.add("structure.nilpotency", nil, f"A(V,S) block nilpotent at exponent r+1={real.r + 1}")
    else:
        rep.add("structure.nilpotency", True, f"skipped: block dimension {len(block)} > 400; nilpotency follows from the grading")
    gp = _companion_gamma(real.gamma)
    lam = lambda_system_solve(gp)
    rep.add("structure.lambda_system", sorted(lam) == [(0, 0, 0, 0), (1, 0, 0, 0)], f"over F_{gp.field.p}: {sorted(lam)}")
    delta = delta_system_solve(gp.field)
    rep.add("structure.delta_system", delta == [(1, 1, 1)], f"over F_{gp.field.p}: {delta}")

    rep.tallies.update(endo_positive=pos_ok, endo_negative=rejected, perturbations=n_pert - len(pert_fail))
    return rep


def _companion_gamma(gamma: GammaVector) -> GammaVector:
    """The same γ read in the smallest prime field p ≥ 11 where it stays admissible."""
    if isinstance(gamma.field, PrimeField):
        return gamma
    p = 11
    while True:
        try:
            F = GF(p)
            return GammaVector(tuple(F(v) for v in gamma.values), F)
        except (ValueError, ZeroDivisionError):
            p += 1


def verify(real: Realization, p: MonoidPresentation, policy: str | None = None, n_neg: int = 100, seed: int = 0) -> VerificationReport:
    rep = verify_normalizer(real, p, n_neg, seed)
    return rep.extend(verify_realization(real, p, None, policy, n_neg, seed))

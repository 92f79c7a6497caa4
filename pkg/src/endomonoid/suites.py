"""Verification suites for the left-identity algebra <e> + V, the exterior algebra of a plane, and A(V,S)."""

from __future__ import annotations

import random

from .algebras import (
    LinMap,
    build_example1,
    build_exterior2,
    build_truncated,
    exterior_monoid_matrix,
    idempotents_bruteforce,
    is_endo,
    replay_witness,
    tensor_map,
)
from .errors import QuotientActionUndefined
from .fields import GF, QQ, Field
from .linalg import Mat, Subspace
from .pipeline import VerificationReport, random_matrix
from .tensorspace import TruncationSpec


def example1_map(dimV: int, g: Mat, field: Field) -> LinMap:
    """Identity on e, g on V."""
    images = [{0: 1}] + [{i + 1: c for i, c in g.col(j).items()} for j in range(dimV)]
    return LinMap.from_images(images, field)


def _nonzero_matrix(rng, dimV, field):
    g = random_matrix(rng, dimV, field)
    return g if any(x for row in g.rows for x in row) else Mat.identity(dimV, field)


def example1_suite(dimV: int = 1, lam=3, samples: int = 10, seed: int = 0, field: Field = QQ, idem_prime: int = 11) -> VerificationReport:
    rep = VerificationReport(seed)
    A = build_example1(dimV, lam, field)
    rng = random.Random(seed)

    passed = 0
    for _ in range(samples):
        res = is_endo(A, example1_map(dimV, random_matrix(rng, dimV, field), field), "all")
        passed += res.ok
    rep.add("example1.random_maps", passed == samples, f"{passed}/{samples} random g in L(V) induce endomorphisms (dim V={dimV})")

    v1 = 1
    kinds = [
        ("e->e+v1", lambda s: s.with_image(0, {0: 1, v1: 1})),
        ("e->2e", lambda s: s.with_image(0, {0: 2})),
        ("e->0", lambda s: s.with_image(0, {})),
        ("v1->v1+e", lambda s: s.with_image(v1, {**s.image(v1), 0: 1})),
        ("v1->e", lambda s: s.with_image(v1, {0: 1})),
    ]
    rejected, wits, fails = 0, [], []
    for t in range(samples):
        label, make = kinds[t % len(kinds)]
        base = example1_map(dimV, _nonzero_matrix(rng, dimV, field), field)
        tau = make(base)
        res = is_endo(A, tau, "all")
        if not res.ok and replay_witness(A, tau, res.witness):
            rejected += 1
            wits.append(f"{label} pair={res.witness[0]},{res.witness[1]}")
        else:
            fails.append(f"{label} accepted")
    rep.add("example1.structured_nonendos", rejected == samples, f"{rejected}/{samples} structured non-endomorphisms rejected", fails + wits)

    Fp = GF(idem_prime)
    if idem_prime ** (dimV + 1) <= 10**7:
        idem = idempotents_bruteforce(build_example1(dimV, lam, Fp))
        expected = [{}, {0: Fp.one}]
        ok = sorted(idem, key=len) == expected
        names = ", ".join("0" if not x else " + ".join(f"{c}*{A.names[i]}" for i, c in sorted(x.items())) for x in idem)
        rep.add("example1.idempotents", ok, f"{len(idem)} idempotents over F_{idem_prime}: {names}")
    return rep


def example2_suite(samples: int = 20, seed: int = 0, field: Field = QQ) -> VerificationReport:
    rep = VerificationReport(seed)
    A = build_exterior2(field)
    rng = random.Random(seed)
    good = bad = 0
    wits = []
    for _ in range(samples):
        b = random_matrix(rng, 2, field)
        c = [field.random(rng, 3), field.random(rng, 3)]
        good += is_endo(A, exterior_monoid_matrix(b, c), "all").ok
        det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
        tau = exterior_monoid_matrix(b, c, det + 1)
        res = is_endo(A, tau, "all")
        if not res.ok and replay_witness(A, tau, res.witness):
            bad += 1
            wits.append(f"det+1 pair={res.witness[0]},{res.witness[1]}")
    rep.add("example2.family", good == samples, f"{good}/{samples} matrices with d = det(b) are endomorphisms")
    rep.add("example2.det_plus_one", bad == samples, f"{bad}/{samples} matrices with d = det(b)+1 rejected", wits)
    rep.add("example2.zero_map", is_endo(A, LinMap.zero(4, field), "all").ok)
    rep.add("example2.identity", is_endo(A, LinMap.identity(4, field), "all").ok)
    return rep


def end_A_suite(spec: TruncationSpec | None = None, samples: int = 20, seed: int = 0, max_tries: int = 100_000) -> VerificationReport:
    """Degree-wise maps g^{(x)i} on A(V,S): endomorphisms iff g normalizes S.

    Defaults to dim V = 2, r = 2, S = span{v1 (x) v1}.
    """
    if spec is None:
        spec = TruncationSpec(2, 2, Subspace.span([{0: 1}], 4, QQ))
    F = spec.field
    A = build_truncated(spec)
    rng = random.Random(seed)
    inside, outside = [], []
    tries = 0
    while (len(inside) < samples or len(outside) < samples) and tries < max_tries:
        tries += 1
        g = random_matrix(rng, spec.dimV, F)
        bucket = inside if spec.normalized_by(g) else outside
        if len(bucket) < samples:
            bucket.append(g)
    rep = VerificationReport(seed)
    ok = sum(is_endo(A, tensor_map(A, g), "all").ok for g in inside)
    rep.add("endA.normalizing", ok == samples and len(inside) == samples, f"{ok}/{len(inside)} normalizing g give endomorphisms")
    undefined = violated = 0
    wits = []
    for g in outside:
        try:
            tensor_map(A, g)
        except QuotientActionUndefined:
            undefined += 1
        lift = tensor_map(A, g, check=False)
        res = is_endo(A, lift, "all")
        if not res.ok and replay_witness(A, lift, res.witness):
            violated += 1
            wits.append(f"pair={res.witness[0]},{res.witness[1]}")
    rep.add(
        "endA.non_normalizing",
        undefined == violated == samples and len(outside) == samples,
        f"{undefined}/{len(outside)} rejected as ill-defined; {violated}/{len(outside)} lifts give violation witnesses",
        wits,
    )
    return rep

"""Command-line front end.

Exit codes: 0 all checks pass, 1 some check failed, 2 input error,
3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .algebras import (
    GammaVector,
    LinMap,
    build_example1,
    build_exterior2,
    build_truncated,
    idempotents_bruteforce,
    is_endo,
    zero_algebra,
)
from .errors import CapacityError, EndomonoidError, InputError
from .fields import Field, PrimeField, parse_field
from .formats import (
    _lines,
    dump_realization,
    format_element,
    load_presentation,
    load_realization,
    parse_literal_algebra,
    parse_map,
)
from .multipoly import buchberger, parse_poly
from .pipeline import realize, verify
from .suites import example1_suite, example2_suite
from .tensorspace import TruncationSpec

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


def _out(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _gamma(arg: str | None, field: Field) -> GammaVector:
    if not arg:
        return GammaVector.default(field)
    try:
        return GammaVector(tuple(field.parse(t) for t in arg.split(",")), field)
    except ValueError as exc:
        raise InputError(f"invalid gamma: {exc}") from None


def _field_arg(arg: str | None) -> Field | None:
    return parse_field(arg) if arg else None


def builtin_algebra(name: str, field: Field):
    parts = name.split(":")
    try:
        if parts[0] == "example1" and len(parts) == 3:
            return build_example1(int(parts[1]), field.parse(parts[2]), field)
        if parts[0] == "truncated" and len(parts) == 3:
            return build_truncated(TruncationSpec(int(parts[1]), int(parts[2]), field=field))
        if parts[0] == "exterior2" and len(parts) == 1:
            return build_exterior2(field)
        if parts[0] == "zero" and len(parts) == 2:
            return zero_algebra(int(parts[1]), field)
    except ValueError as exc:
        raise InputError(f"builtin {name!r}: {exc}") from None
    raise InputError(f"unknown builtin algebra {name!r} (example1:DIMV:LAMBDA, truncated:DIMV:R, exterior2, zero:N)")


def _load_algebra(args, field: Field | None):
    picked = [x for x in (args.algebra, args.builtin, getattr(args, "realization", None)) if x]
    if len(picked) != 1:
        raise InputError("give exactly one of --algebra, --builtin" + (", --realization" if hasattr(args, "realization") else ""))
    if args.algebra:
        return parse_literal_algebra(Path(args.algebra).read_text(), field)
    if args.builtin:
        from .fields import QQ

        return builtin_algebra(args.builtin, field or QQ)
    real = load_realization(Path(args.realization).read_text())
    return real.build()


def cmd_realize(args) -> int:
    pres = load_presentation(args.monoid, _field_arg(args.field))
    real, dh = realize(pres, _gamma(args.gamma, pres.field), reduced=args.reduced_preimage)
    text = dump_realization(real)
    if args.out:
        Path(args.out).write_text(text)
    pv = real.provenance
    print(f"name={pres.name or '-'} d={real.d} field={real.field.tag}")
    print(f"h={real.h} degBound={real.deg_bound} r={real.r} dim S={real.S.dim} dim D={dh.n}")
    print(
        f"dims: orbit span={pv['dim_orbit_span']} W={pv['dim_W']} W'={pv['dim_W_prime']} "
        f"W''={pv['dim_W_second']} ker xi={pv['dim_ker_xi']}"
    )
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    real = load_realization(Path(args.realization).read_text())
    pres = load_presentation(args.monoid, real.field)
    if real.digest and pres.digest() != real.digest:
        raise InputError("realization digest does not match the presentation")
    rep = verify(real, pres, args.policy, args.neg, args.seed)
    _out(rep.text(), args.report)
    if args.report:
        sys.stdout.write(rep.text())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_idempotents(args) -> int:
    field = _field_arg(args.field)
    if not isinstance(field, PrimeField):
        raise InputError("idempotent search needs --field fp:P")
    a = _load_algebra(args, field)
    found = idempotents_bruteforce(a, args.capacity)
    print(f"{len(found)} idempotents in dimension {a.n} over F_{field.p}")
    for x in found:
        print(format_element(x, a.n, a.field))
    return EXIT_OK


def cmd_check_endo(args) -> int:
    a = _load_algebra(args, _field_arg(args.field))
    if args.map == "zero":
        sigma = LinMap.zero(a.n, a.field)
    elif args.map == "identity":
        sigma = LinMap.identity(a.n, a.field)
    else:
        sigma = parse_map(Path(args.map).read_text(), a.n, a.field)
    res = is_endo(a, sigma, args.policy, args.seed)
    print(res.describe())
    if res.witness:
        i, j = res.witness
        print(f"violation at (b{i}={a.names[i]}, b{j}={a.names[j]})")
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_groebner(args) -> int:
    text = Path(args.ideal).read_text()
    d, field, gens_src = None, args.field, []
    for ln, raw, line in _lines(text):
        key, _, rest = line.partition(" ")
        if key == "d":
            d = int(rest)
        elif key == "field" and field is None:
            field = rest.strip()
        elif key == "gen":
            gens_src.append((ln, rest.strip()))
    if d is None:
        raise InputError("ideal file has no 'd' record")
    F = parse_field(field or "q")
    from .errors import ParseError

    gens = []
    for ln, src in gens_src:
        try:
            gens.append(parse_poly(src, d, F))
        except ParseError as exc:
            raise ParseError(exc.message, pos=exc.pos, line=ln) from None
    if not any(gens):
        raise InputError("ideal has no nonzero generators")
    gb = buchberger(gens)
    if gb.is_unit:
        print("unit ideal")
    print(f"reduced Groebner basis (grlex), {len(gb)} generators:")
    for g in gb:
        print(f"  {g}")
    for src in args.reduce or []:
        f = parse_poly(src, d, F)
        print(f"normal_form({f}) = {gb.normal_form(f)}")
    return EXIT_OK


def cmd_example1(args) -> int:
    from .fields import QQ

    rep = example1_suite(args.dimv, QQ.parse(args.lam), args.samples, args.seed)
    sys.stdout.write(rep.text())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_example2(args) -> int:
    rep = example2_suite(args.samples, args.seed)
    sys.stdout.write(rep.text())
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="endomonoid", description="Realize affine monoids as endomorphism monoids of finite-dimensional algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("realize", help="build S and D for a monoid presentation")
    p.add_argument("--monoid", required=True, help="presentation file, or corpus:NAME")
    p.add_argument("--gamma", help="six comma-separated scalars (default 2,3,4,5,6,7)")
    p.add_argument("--field", help="q or fp:P (overrides the file)")
    p.add_argument("--out", help="write the realization artifact here")
    p.add_argument("--reduced-preimage", action="store_true", help="experimental: use only the section lift of W")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify", help="verify a realization artifact against its presentation")
    p.add_argument("--realization", required=True)
    p.add_argument("--monoid", required=True)
    p.add_argument("--neg", type=int, default=100, help="number of sampled non-members")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--policy", help="all or sample:K (default: all when dim D <= 200)")
    p.add_argument("--report", help="also write the report to this file")
    p.set_defaults(func=cmd_verify)

    for name, func, helptext in (
        ("idempotents", cmd_idempotents, "enumerate all idempotents over F_p"),
        ("check-endo", cmd_check_endo, "check whether a linear map is an endomorphism"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--algebra", help="literal algebra file")
        p.add_argument("--builtin", help="example1:DIMV:LAMBDA, truncated:DIMV:R, exterior2, zero:N")
        p.add_argument("--field", help="q or fp:P")
        if name == "idempotents":
            p.add_argument("--capacity", type=int, default=10**7)
        else:
            p.add_argument("--realization", help="realization artifact (checks against its D)")
            p.add_argument("--map", required=True, help="matrix file (column j = image of b_j), zero, or identity")
            p.add_argument("--policy")
            p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=func)

    p = sub.add_parser("groebner", help="reduced Groebner basis of an ideal file")
    p.add_argument("--ideal", required=True)
    p.add_argument("--field")
    p.add_argument("--reduce", action="append", help="polynomial to reduce (repeatable)")
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("example1", help="verification suite for the left-identity algebra <e> + V")
    p.add_argument("--dimv", type=int, default=1)
    p.add_argument("--lam", default="3")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_example1)

    p = sub.add_parser("example2", help="verification suite for the exterior algebra of a plane")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_example2)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EndomonoidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

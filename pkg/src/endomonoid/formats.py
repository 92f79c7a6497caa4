"""Plain-text artifact formats.

Presentation (``.monoid``)::

    # comment
    name bool
    field q
    d 1
    gen x1,1^2 - x1,1
    member 0
    member 1

Members are row-major lists of exact scalars.  Realizations are JSON with
sorted keys and exact scalar strings (``num/den`` or ``k mod p``); the S
basis uses the sparse tensor records ``{"degree", "word", "coeff"}``.

Literal algebra::

    dim 2
    field fp:11
    # i j k coeff  meaning  b_i * b_j += coeff * b_k  (0-based)
    0 0 0 1
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Mapping

from .algebras import AlgebraHandle, GammaVector, LinMap, literal_algebra
from .errors import InputError, ParseError
from .fields import QQ, Field, parse_field
from .linalg import Mat, Subspace
from .multipoly import parse_poly
from .pipeline import MonoidPresentation, Realization
from .tensorspace import degree_r_tensor, degree_r_vector

FORMAT_VERSION = 1


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, raw, line


def _parse_scalars(tokens: list[str], field: Field, line: int) -> list:
    out = []
    for t in tokens:
        try:
            out.append(field.parse(t))
        except ParseError as exc:
            raise ParseError(exc.message, line=line) from None
    return out


def parse_presentation(text: str, field: Field | None = None) -> MonoidPresentation:
    """Parse a ``.monoid`` file; ``field`` overrides the file's field line."""
    name, d, file_field = "", None, None
    gens_raw, members_raw = [], []
    for n, raw, line in _lines(text):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "name":
            name = rest
        elif key == "field":
            file_field = parse_field(rest)
        elif key == "d":
            try:
                d = int(rest)
            except ValueError:
                raise ParseError(f"d must be an integer, got {rest!r}", line=n) from None
        elif key == "gen":
            gens_raw.append((n, rest, raw.index(rest)))
        elif key == "member":
            members_raw.append((n, rest))
        else:
            raise ParseError(f"unknown record {key!r}", line=n)
    if d is None:
        raise InputError("presentation has no 'd' record")
    F = field or file_field or QQ
    gens = []
    for n, src, offset in gens_raw:
        try:
            gens.append(parse_poly(src, d, F))
        except ParseError as exc:
            raise ParseError(exc.message, pos=(exc.pos or 0) + offset, line=n) from None
    members = []
    for n, src in members_raw:
        vals = _parse_scalars(src.replace(",", " ").split(), F, n)
        if len(vals) != d * d:
            raise ParseError(f"member needs {d * d} entries, got {len(vals)}", line=n)
        members.append(Mat(tuple(tuple(vals[i * d : (i + 1) * d]) for i in range(d)), F, d))
    return MonoidPresentation(d, gens, members, name, F)


CORPUS = ("bool", "full", "diag2", "upper2", "mu2", "sl2")


def corpus_text(name: str) -> str:
    if name not in CORPUS:
        raise InputError(f"unknown corpus entry {name!r}; available: {', '.join(CORPUS)}")
    return resources.files("endomonoid").joinpath("corpus", f"{name}.monoid").read_text()


def load_presentation(ref: str, field: Field | None = None) -> MonoidPresentation:
    """Load from a path, or from the bundled corpus via ``corpus:NAME`` / a bare corpus name."""
    if ref.startswith("corpus:"):
        return parse_presentation(corpus_text(ref[7:]), field)
    path = Path(ref)
    if path.exists():
        return parse_presentation(path.read_text(), field)
    if ref in CORPUS:
        return parse_presentation(corpus_text(ref), field)
    raise InputError(f"no such presentation file: {ref}")


# --- sparse tensors / realizations -------------------------------------------------


def tensor_records(x: Mapping, field: Field) -> list[dict]:
    return [
        {"degree": len(w), "word": list(w), "coeff": field.format(c)}
        for w, c in sorted(x.items(), key=lambda wc: (len(wc[0]), wc[0]))
        if c
    ]


def tensor_from_records(records: list[dict], field: Field) -> dict:
    out = {}
    for rec in records:
        w = tuple(int(a) for a in rec["word"])
        if len(w) != int(rec["degree"]):
            raise InputError(f"record degree {rec['degree']} does not match word {w}")
        out[w] = field.parse(rec["coeff"])
    return out


def dump_realization(real: Realization) -> str:
    F = real.field
    doc = {
        "format": "endomonoid-realization",
        "version": FORMAT_VERSION,
        "name": real.name,
        "field": F.tag,
        "d": real.d,
        "gamma": [F.format(g) for g in real.gamma.values],
        "h": real.h,
        "degBound": real.deg_bound,
        "r": real.r,
        "dim_D": real.dim_D(),
        "provenance": real.provenance,
        "digest": real.digest,
        "S": [tensor_records(degree_r_tensor(dict(row), real.r, real.dimV), F) for row in real.S.basis],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def load_realization(text: str) -> Realization:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"realization is not valid JSON: {exc.msg}", pos=exc.pos) from None
    if doc.get("format") != "endomonoid-realization":
        raise InputError("not an endomonoid realization file")
    F = parse_field(doc["field"])
    d, r = int(doc["d"]), int(doc["r"])
    dimV = d + 2
    gamma = GammaVector(tuple(F.parse(g) for g in doc["gamma"]), F)
    vecs = [degree_r_vector(tensor_from_records(recs, F), r, dimV) for recs in doc["S"]]
    S = Subspace.span(vecs, dimV**r, F)
    return Realization(d, gamma, int(doc["h"]), int(doc["degBound"]), r, S, dict(doc["provenance"]), F, doc.get("digest", ""), doc.get("name", ""))


# --- literal algebras and maps ---------------------------------------------------------


def parse_literal_algebra(text: str, field: Field | None = None) -> AlgebraHandle:
    n, F = None, field
    records = []
    for ln, _, line in _lines(text):
        toks = line.split()
        if toks[0] == "dim":
            n = int(toks[1])
        elif toks[0] == "field":
            F = field or parse_field(toks[1])
        else:
            if len(toks) < 4:
                raise ParseError("structure constant record needs 'i j k coeff'", line=ln)
            try:
                i, j, k = (int(t) for t in toks[:3])
            except ValueError:
                raise ParseError("indices must be integers", line=ln) from None
            records.append((ln, i, j, k, " ".join(toks[3:])))
    if n is None:
        raise InputError("literal algebra has no 'dim' record")
    F = F or QQ
    consts: dict = {}
    for ln, i, j, k, c in records:
        if not all(0 <= x < n for x in (i, j, k)):
            raise ParseError(f"index out of range for dim {n}", line=ln)
        (val,) = _parse_scalars([c], F, ln)
        slot = consts.setdefault((i, j), {})
        slot[k] = slot.get(k, F.zero) + val
    return literal_algebra(n, F, consts)


def parse_map(text: str, n: int, field: Field) -> LinMap:
    """n rows of n scalars; column j is the image of basis vector j."""
    rows = []
    for ln, _, line in _lines(text):
        vals = _parse_scalars(line.replace(",", " ").split(), field, ln)
        if len(vals) != n:
            raise ParseError(f"map row needs {n} entries, got {len(vals)}", line=ln)
        rows.append(vals)
    if len(rows) != n:
        raise InputError(f"map needs {n} rows, got {len(rows)}")
    return LinMap.from_mat(Mat(tuple(tuple(r) for r in rows), field, n))


def format_element(x: Mapping[int, object], n: int, field: Field) -> str:
    return "(" + ", ".join(str(x.get(i, field.zero)) for i in range(n)) + ")"

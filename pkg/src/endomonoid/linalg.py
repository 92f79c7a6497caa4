"""Exact linear algebra over QQ and GF(p).

Vectors are sparse ``dict[int, scalar]`` mappings with no zero entries.
Small operators are dense :class:`Mat` values; anything that only needs
the rows of an operator also accepts objects exposing ``sparse_rows()``
(see :class:`endomonoid.algebras.LinMap`).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .fields import QQ, Field

SparseVec = dict


def _clean(v: Mapping[int, Any]) -> dict:
    return {i: c for i, c in v.items() if c}


def as_sparse(v) -> dict:
    if isinstance(v, Mapping):
        return _clean(v)
    return {i: c for i, c in enumerate(v) if c}


def axpy(y: dict, a, x: Mapping) -> None:
    """In place ``y += a * x``, dropping cancelled entries."""
    for i, c in x.items():
        t = y.get(i)
        t = a * c if t is None else t + a * c
        if t:
            y[i] = t
        else:
            y.pop(i, None)


class Echelon:
    """Incremental reduced row-echelon basis.

    Every stored row has pivot coefficient 1 and is zero in every other
    row's pivot column, so reducing a vector is a single pass.
    """

    def __init__(self, field: Field = QQ):
        self.field = field
        self.rows: dict[int, dict] = {}

    def reduce(self, v: Mapping) -> dict:
        w = dict(v)
        for p in [p for p in w if p in self.rows]:
            c = w.get(p)
            if c:
                axpy(w, -c, self.rows[p])
        return w

    def add(self, v: Mapping) -> bool:
        w = self.reduce(v)
        if not w:
            return False
        p = min(w)
        inv = self.field.one / w[p]
        w = {i: c * inv for i, c in w.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                axpy(row, -c, w)
        self.rows[p] = w
        return True

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def sorted_rows(self) -> list[dict]:
        return [self.rows[p] for p in sorted(self.rows)]


@dataclass(frozen=True)
class Subspace:
    """A subspace of field^ambient_dim stored as its reduced echelon basis.

    ``basis`` is a tuple of sparse rows, each a tuple of ``(column, value)``
    pairs sorted by column; rows are sorted by pivot.  Equal subspaces have
    identical ``basis`` values.
    """

    ambient_dim: int
    basis: tuple
    field: Field = QQ

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: int, field: Field = QQ) -> "Subspace":
        ech = Echelon(field)
        for v in vectors:
            v = as_sparse(v)
            if v and (min(v) < 0 or max(v) >= ambient_dim):
                raise ValueError("vector index out of range for ambient dimension")
            ech.add(v)
        return cls._from_echelon(ech, ambient_dim)

    @classmethod
    def _from_echelon(cls, ech: Echelon, ambient_dim: int) -> "Subspace":
        basis = tuple(tuple(sorted(r.items())) for r in ech.sorted_rows())
        return cls(ambient_dim, basis, ech.field)

    @classmethod
    def zero(cls, ambient_dim: int, field: Field = QQ) -> "Subspace":
        return cls(ambient_dim, (), field)

    @classmethod
    def full(cls, ambient_dim: int, field: Field = QQ) -> "Subspace":
        one = field.one
        return cls(ambient_dim, tuple(((i, one),) for i in range(ambient_dim)), field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [row[0][0] for row in self.basis]

    def rows(self) -> list[dict]:
        return [dict(r) for r in self.basis]

    def dense(self) -> list[list]:
        out = []
        for r in self.basis:
            v = [self.field.zero] * self.ambient_dim
            for i, c in r:
                v[i] = c
            out.append(v)
        return out

    def _echelon(self) -> Echelon:
        ech = Echelon(self.field)
        ech.rows = {r[0][0]: dict(r) for r in self.basis}
        return ech

    def _check(self, v) -> dict:
        if not isinstance(v, Mapping):
            if len(v) != self.ambient_dim:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        v = as_sparse(v)
        if v and (min(v) < 0 or max(v) >= self.ambient_dim):
            raise ValueError("vector index out of range for ambient dimension")
        return v

    def residual(self, v) -> dict:
        return self._echelon().reduce(self._check(v))

    def contains(self, v) -> bool:
        return not self.residual(v)

    __contains__ = contains

    def coordinates(self, v) -> list | None:
        """Coefficients of ``v`` in the stored basis, or None if ``v`` is outside."""
        v = self._check(v)
        if self.residual(v):
            return None
        return [v.get(r[0][0], self.field.zero) for r in self.basis]

    def _same(self, other: "Subspace") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("subspaces live in different ambient dimensions")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._same(other)
        ech = self._echelon()
        for r in other.basis:
            ech.add(dict(r))
        return Subspace._from_echelon(ech, self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersect(self, other)

    def __le__(self, other: "Subspace") -> bool:
        self._same(other)
        return all(other.contains(dict(r)) for r in self.basis)


def subspace_contains(s: Subspace, v) -> bool:
    return s.contains(v)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a + b


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """a ∩ b from the kernel of the relation sum_i x_i a_i - sum_j y_j b_j = 0."""
    a._same(b)
    F = a.field
    na = a.dim
    # columns 0..na-1 carry x, na.. carry y; one relation row per ambient coordinate
    rel: dict[int, dict] = {}
    for i, row in enumerate(a.basis):
        for k, c in row:
            rel.setdefault(k, {})[i] = c
    for j, row in enumerate(b.basis):
        for k, c in row:
            rel.setdefault(k, {})[na + j] = -c
    ker = kernel_sparse(list(rel.values()), na + b.dim, F)
    vecs = []
    for kv in ker.basis:
        w: dict = {}
        for i, x in kv:
            if i < na:
                axpy(w, x, dict(a.basis[i]))
        vecs.append(w)
    return Subspace.span(vecs, a.ambient_dim, F)


def kernel_sparse(rows: Sequence[Mapping], ncols: int, field: Field = QQ) -> Subspace:
    ech = Echelon(field)
    for r in rows:
        ech.add(_clean(r))
    pivots = set(ech.rows)
    vecs = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: field.one}
        for p, row in ech.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        vecs.append(v)
    return Subspace.span(vecs, ncols, field)


@dataclass(frozen=True)
class Mat:
    """Dense matrix with entries in a single exact field."""

    rows: tuple
    field: Field = QQ
    ncols: int = dc_field(default=-1)

    def __post_init__(self):
        if self.ncols < 0:
            object.__setattr__(self, "ncols", len(self.rows[0]) if self.rows else 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("matrix rows have unequal lengths")

    @classmethod
    def of(cls, rows: Sequence[Sequence], field: Field = QQ) -> "Mat":
        return cls(tuple(tuple(field(x) for x in r) for r in rows), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Mat":
        return cls.diag([1] * n, field)

    @classmethod
    def zeros(cls, m: int, n: int | None = None, field: Field = QQ) -> "Mat":
        n = m if n is None else n
        return cls(tuple(tuple(field.zero for _ in range(n)) for _ in range(m)), field, n)

    @classmethod
    def diag(cls, entries: Sequence, field: Field = QQ) -> "Mat":
        n = len(entries)
        return cls.of([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], field)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> dict:
        return {i: r[j] for i, r in enumerate(self.rows) if r[j]}

    def sparse_rows(self) -> list[dict]:
        return [as_sparse(r) for r in self.rows]

    def transpose(self) -> "Mat":
        return Mat(tuple(zip(*self.rows)) if self.rows else (), self.field, self.nrows)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        zero = self.field.zero
        return Mat(
            tuple(tuple(sum((a * b for a, b in zip(r, c)), zero) for c in cols) for r in self.rows),
            self.field,
            other.ncols,
        )

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.field, self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scale(-1)

    def scale(self, c) -> "Mat":
        c = self.field(c)
        return Mat(tuple(tuple(c * a for a in r) for r in self.rows), self.field, self.ncols)

    def apply(self, v):
        """Matrix times a column vector (dense sequence or sparse dict)."""
        v = as_sparse(v)
        return [sum((r[j] * c for j, c in v.items()), self.field.zero) for r in self.rows]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"


def rref(m: Mat) -> tuple[Mat, list[int]]:
    ech = Echelon(m.field)
    for r in m.sparse_rows():
        ech.add(r)
    zero = m.field.zero
    out = []
    for r in ech.sorted_rows():
        out.append(tuple(r.get(j, zero) for j in range(m.ncols)))
    while len(out) < m.nrows:
        out.append(tuple(zero for _ in range(m.ncols)))
    return Mat(tuple(out), m.field, m.ncols), ech.pivots()


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def kernel(m: Mat) -> Subspace:
    return kernel_sparse(m.sparse_rows(), m.ncols, m.field)


def _rows_of(op) -> tuple[list[dict], int, Field]:
    rows = op.sparse_rows()
    n = op.ncols if hasattr(op, "ncols") else op.n
    return rows, n, op.field


def eigenspace(op, lam) -> Subspace:
    """kernel(op - lam * id) for a square Mat or LinMap."""
    rows, n, F = _rows_of(op)
    if len(rows) != n:
        raise ValueError("eigenspace needs a square operator")
    lam = F(lam)
    shifted = []
    for i, r in enumerate(rows):
        r = dict(r)
        t = r.get(i, F.zero) - lam
        if t:
            r[i] = t
        else:
            r.pop(i, None)
        shifted.append(r)
    return kernel_sparse(shifted, n, F)


def apply_op(op, v: Mapping) -> dict:
    if hasattr(op, "apply_sparse"):
        return op.apply_sparse(v)
    out: dict = {}
    for j, c in v.items():
        axpy(out, c, op.col(j))
    return out


def invariant_under(s: Subspace, op) -> bool:
    n = op.ncols if hasattr(op, "ncols") else op.n
    if n != s.ambient_dim or (hasattr(op, "nrows") and op.nrows != n):
        raise ValueError("operator dimension does not match the subspace")
    return all(s.contains(apply_op(op, dict(r))) for r in s.basis)


@dataclass(frozen=True)
class LabeledSpace:
    """A subspace whose coordinates are indexed by hashable labels.

    Used for spaces of polynomials (labels are monomials) and of tensors
    (labels are words).
    """

    labels: tuple
    space: Subspace

    @classmethod
    def from_elements(cls, labels: Sequence[Hashable], elements: Iterable[Mapping], field: Field = QQ) -> "LabeledSpace":
        labels = tuple(labels)
        index = {lab: i for i, lab in enumerate(labels)}
        vecs = []
        for el in elements:
            try:
                vecs.append({index[k]: c for k, c in el.items() if c})
            except KeyError as exc:
                raise ValueError(f"label {exc.args[0]!r} outside the coordinatization") from None
        return cls(labels, Subspace.span(vecs, len(labels), field))

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def elements(self) -> list[dict]:
        return [{self.labels[i]: c for i, c in r} for r in self.space.basis]

    def to_vector(self, el: Mapping) -> dict | None:
        index = self.index
        out = {}
        for k, c in el.items():
            if not c:
                continue
            if k not in index:
                return None
            out[index[k]] = c
        return out

    def contains(self, el: Mapping) -> bool:
        v = self.to_vector(el)
        return v is not None and self.space.contains(v)

    def relabel(self, fn) -> "LabeledSpace":
        new = tuple(fn(lab) for lab in self.labels)
        if len(set(new)) != len(new):
            raise ValueError("relabelling is not injective")
        return LabeledSpace(new, self.space)

"""Truncated tensor spaces indexed by words.

A tensor is a sparse ``dict[Word, scalar]`` where a word is a tuple of
0-based letter indices.  For V = P ⊕ U the letters are ordered
``p1, p2, u1, ..., u_d`` (see :data:`P1`, :data:`P2`, :func:`u_letter`).
Words over the alphabet of U^{⊕d} use the variable indices of
:mod:`endomonoid.multipoly`: letter f_{k,j} is ``(k-1)*d + (j-1)``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping

from .errors import QuotientActionUndefined
from .fields import QQ, Field
from .linalg import LabeledSpace, Mat, Subspace, axpy, kernel_sparse
from .multipoly import Poly, letter_to_variable, variable_to_letter

Word = tuple

P1 = 0
P2 = 1


def u_letter(j: int) -> int:
    """Letter index of the U-basis vector u_j (1-based j) inside V = P ⊕ U."""
    return 1 + j


def word_index(w: Word, dimV: int) -> int:
    i = 0
    for a in w:
        i = i * dimV + a
    return i


def index_word(i: int, degree: int, dimV: int) -> Word:
    out = []
    for _ in range(degree):
        i, a = divmod(i, dimV)
        out.append(a)
    return tuple(reversed(out))


def words(dimV: int, degree: int) -> list[Word]:
    return [tuple(w) for w in product(range(dimV), repeat=degree)]


def words_up_to(nletters: int, h: int, start: int = 0) -> list[Word]:
    """Words of degree start..h ordered by degree, then lexicographically."""
    out: list[Word] = []
    for deg in range(start, h + 1):
        out.extend(words(nletters, deg))
    return out


def _columns(g: Mat) -> list[list[tuple[int, object]]]:
    return [sorted(g.col(j).items()) for j in range(g.ncols)]


def tensor_power_word(cols, w: Word) -> dict:
    """g^{(x)len(w)} applied to a single word, given g's sparse columns."""
    out: dict = {}
    choices = [cols[a] for a in w]
    for combo in product(*choices):
        c = None
        for _, x in combo:
            c = x if c is None else c * x
        word = tuple(i for i, _ in combo)
        if c is None:  # empty word
            out[word] = 1
            continue
        t = out.get(word)
        t = c if t is None else t + c
        if t:
            out[word] = t
        else:
            out.pop(word, None)
    return out


def tensor_act(g: Mat, x: Mapping[Word, object]) -> dict:
    """Letter-wise action of g on an untruncated tensor."""
    cols = _columns(g)
    out: dict = {}
    for w, c in x.items():
        axpy(out, c, tensor_power_word(cols, w))
    return out


class TruncationSpec:
    """⊕_{1<=i<=r} V^{(x)i} with the degree-r part taken modulo S.

    ``S`` is a subspace of the degree-r coordinate space, whose coordinate
    ``i`` is the i-th degree-r word in lexicographic order.  The quotient
    V^{(x)r}/S is coordinatized by the non-pivot words of S's echelon basis.
    """

    def __init__(self, dimV: int, r: int, S: Subspace | None = None, field: Field = QQ):
        if r <= 1:
            raise ValueError("truncation degree r must be > 1")
        if dimV < 1:
            raise ValueError("dim V must be >= 1")
        n = dimV**r
        if S is None:
            S = Subspace.zero(n, field)
        if S.ambient_dim != n:
            raise ValueError(f"S lives in dimension {S.ambient_dim}, expected dim V^r = {n}")
        self.dimV = dimV
        self.r = r
        self.S = S
        self.field = S.field
        self._pivot_rows = {}
        for row in S.basis:
            p = row[0][0]
            self._pivot_rows[p] = {index_word(i, r, dimV): -c for i, c in row[1:]}
        self.complement_words: tuple = tuple(
            index_word(i, r, dimV) for i in range(n) if i not in self._pivot_rows
        )
        self._normalized = {}

    def __eq__(self, other):
        return isinstance(other, TruncationSpec) and (self.dimV, self.r, self.S) == (other.dimV, other.r, other.S)

    def __hash__(self):
        return hash((self.dimV, self.r, self.S))

    def __repr__(self):
        return f"TruncationSpec(dimV={self.dimV}, r={self.r}, dim S={self.S.dim})"

    def reduce_word(self, w: Word) -> dict:
        row = self._pivot_rows.get(word_index(w, self.dimV))
        if row is None:
            return {w: self.field.one}
        return dict(row)

    def reduce(self, x: Mapping[Word, object]) -> dict:
        """Drop words of degree > r and rewrite degree-r words on the complement basis."""
        out: dict = {}
        for w, c in x.items():
            if not c or len(w) > self.r:
                continue
            if len(w) == self.r:
                axpy(out, c, self.reduce_word(w))
            else:
                axpy(out, c, {w: 1})
        return out

    def normalized_by(self, g: Mat) -> bool:
        hit = self._normalized.get(g)
        if hit is None:
            hit = self._normalized[g] = normalizes(g, self.S, self.r, self.dimV)
        return hit


def concat_mul(x: Mapping[Word, object], y: Mapping[Word, object], spec: TruncationSpec) -> dict:
    out: dict = {}
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            w = w1 + w2
            if len(w) > spec.r:
                continue
            if len(w) == spec.r:
                axpy(out, c1 * c2, spec.reduce_word(w))
            else:
                axpy(out, c1 * c2, {w: 1})
    return out


def act(g: Mat, x: Mapping[Word, object], spec: TruncationSpec) -> dict:
    """g·x with g acting as g^{(x)i} on degree i; degree-r results reduced mod S."""
    if g.shape != (spec.dimV, spec.dimV):
        raise ValueError(f"g must be {spec.dimV}x{spec.dimV}")
    if any(len(w) == spec.r for w, c in x.items() if c) and not spec.normalized_by(g):
        raise QuotientActionUndefined("g^(x)r does not preserve S; the quotient action is undefined")
    return spec.reduce(tensor_act(g, x))


def normalizes(g: Mat, S: Subspace, r: int, dimV: int | None = None) -> bool:
    """True iff g^{(x)r}(S) ⊆ S."""
    dimV = g.nrows if dimV is None else dimV
    if g.shape != (dimV, dimV):
        raise ValueError(f"g must be {dimV}x{dimV}")
    cols = _columns(g)
    for row in S.basis:
        img: dict = {}
        for i, c in row:
            for w, a in tensor_power_word(cols, index_word(i, r, dimV)).items():
                axpy(img, c * a, {word_index(w, dimV): 1})
        if not S.contains(img):
            return False
    return True


def extend_to_V(h: Mat) -> Mat:
    """Block matrix id_P ⊕ h on V = P ⊕ U."""
    if not h.is_square():
        raise ValueError("h must be square")
    F = h.field
    n = h.nrows + 2
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < 2 or j < 2:
                row.append(F.one if i == j else F.zero)
            else:
                row.append(h[i - 2, j - 2])
        rows.append(tuple(row))
    return Mat(tuple(rows), F, n)


# --- U^{⊕d} side: symmetrization and the embeddings into T(<p1> ⊕ U) ------


def xi(w: Word, d: int, field: Field = QQ) -> Poly:
    """Commutative image of a word over U^{⊕d} as a polynomial on d×d matrices."""
    m = [0] * (d * d)
    for a in w:
        if not 0 <= a < d * d:
            raise ValueError("letter out of range for U^{⊕d}")
        m[a] += 1
    return Poly.monomial(tuple(m), field)


def xi_tensor(x: Mapping[Word, object], d: int, field: Field = QQ) -> Poly:
    out = Poly.zero(field, d * d)
    for w, c in x.items():
        out = out + xi(w, d, field) * c
    return out


def section_word(m) -> Word:
    """The sorted word lifting a commutative monomial."""
    return tuple(i for i, e in enumerate(m) for _ in range(e))


def xi_kernel(d: int, h: int, field: Field = QQ) -> LabeledSpace:
    """ker ξ restricted to words of degree <= h."""
    labels = words_up_to(d * d, h)
    mono_rows: dict = {}
    for j, w in enumerate(labels):
        mono_rows.setdefault(xi(w, d, field).leading_monomial(), {})[j] = field.one
    ker = kernel_sparse(list(mono_rows.values()), len(labels), field)
    return LabeledSpace(tuple(labels), ker)


def xi_preimage_truncated(w: LabeledSpace, h: int, d: int, reduced: bool = False) -> LabeledSpace:
    """ξ^{-1}(w) ∩ (words of degree <= h), as section-lift(w) + ker ξ.

    With ``reduced=True`` only the section lift is returned (experimental;
    the normalizer equality is argued for the full preimage).
    """
    F = w.field
    labels = tuple(words_up_to(d * d, h))
    elements = []
    for el in w.elements():
        lift = {}
        for m, c in el.items():
            if sum(m) > h:
                raise ValueError("element of degree > h in the space to lift")
            lift[section_word(m)] = c
        elements.append(lift)
    if not reduced:
        elements.extend(xi_kernel(d, h, F).elements())
    return LabeledSpace.from_elements(labels, elements, F)


def act_on_copies(g: Mat, x: Mapping[Word, object]) -> dict:
    """g acting diagonally on U^{⊕d}: f_{k,j} ↦ sum_i g[i,j] f_{k,i}."""
    d = g.nrows
    cols = []
    for a in range(d * d):
        k, j = variable_to_letter(a, d)
        cols.append([(letter_to_variable(k, i + 1, d), c) for i, c in sorted(g.col(j - 1).items())])
    out: dict = {}
    for w, c in x.items():
        axpy(out, c, tensor_power_word(cols, w))
    return out


@lru_cache(maxsize=None)
def _iota_letter(a: int, d: int) -> Word:
    k, j = variable_to_letter(a, d)
    return (P1,) * k + (u_letter(j),)


def iota_word(w: Word, d: int) -> Word:
    """f_{k1 j1} ⊗ ... ↦ p1^{⊗k1} ⊗ u_{j1} ⊗ ... ; the empty word maps to itself."""
    out: tuple = ()
    for a in w:
        out += _iota_letter(a, d)
    return out


def iota(x: Mapping[Word, object], d: int) -> dict:
    return {iota_word(w, d): c for w, c in x.items() if c}


def iota_space(w: LabeledSpace, d: int) -> LabeledSpace:
    return w.relabel(lambda word: iota_word(word, d))


def iota_r(x: Mapping[Word, object], r: int) -> dict:
    """Left-pad every word with p2 up to degree r."""
    out = {}
    for w, c in x.items():
        if not c:
            continue
        if len(w) > r:
            raise ValueError(f"word of degree {len(w)} exceeds r={r}")
        out[(P2,) * (r - len(w)) + tuple(w)] = c
    return out


def degree_r_vector(x: Mapping[Word, object], r: int, dimV: int) -> dict:
    out = {}
    for w, c in x.items():
        if len(w) != r:
            raise ValueError("not a pure degree-r tensor")
        if c:
            out[word_index(w, dimV)] = c
    return out


def degree_r_tensor(v: Mapping[int, object], r: int, dimV: int) -> dict:
    return {index_word(i, r, dimV): c for i, c in v.items() if c}


def subspace_of_tensors(xs: Iterable[Mapping[Word, object]], r: int, dimV: int, field: Field = QQ) -> Subspace:
    return Subspace.span([degree_r_vector(x, r, dimV) for x in xs], dimV**r, field)


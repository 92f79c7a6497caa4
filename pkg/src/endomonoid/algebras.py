"""Finite-dimensional algebras as multiplication oracles.

An :class:`AlgebraHandle` knows its dimension, its field and how to
multiply two basis vectors; elements are sparse ``dict[int, scalar]``.
Products are never tabulated densely, which keeps the rigidified algebra
D usable at dimensions in the thousands.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import CapacityError, NotInNormalizer, QuotientActionUndefined
from .fields import QQ, Field, PrimeField
from .linalg import Mat, Subspace, axpy, eigenspace
from .multipoly import Poly, buchberger
from .tensorspace import (
    P1,
    P2,
    TruncationSpec,
    _columns,
    concat_mul,
    extend_to_V,
    tensor_power_word,
    u_letter,
    words,
)

Element = dict

IDEMPOTENT_CAPACITY = 10**7


class AlgebraHandle:
    """Basis of size ``n`` plus a multiplication oracle on basis pairs."""

    def __init__(
        self,
        n: int,
        field: Field,
        mul: Callable[[int, int], Mapping[int, object]],
        kind: str = "Literal",
        labels: Mapping[str, object] | None = None,
        names: Sequence[str] | None = None,
    ):
        self.n = n
        self.field = field
        self.kind = kind
        self.labels = dict(labels or {})
        self.names = list(names) if names is not None else [f"b{i}" for i in range(n)]
        self._mul = mul
        self.mul_basis = lru_cache(maxsize=1 << 20)(self._mul_basis)

    def _mul_basis(self, i: int, j: int) -> dict:
        return {k: c for k, c in self._mul(i, j).items() if c}

    def __repr__(self):
        return f"<AlgebraHandle {self.kind} n={self.n} over {self.field!r}>"

    def basis_vector(self, i: int) -> Element:
        return {i: self.field.one}

    def mul(self, x: Mapping[int, object], y: Mapping[int, object]) -> Element:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                prod = self.mul_basis(i, j)
                if prod:
                    axpy(out, a * b, prod)
        return out

    def label_indices(self, name: str) -> list[int]:
        v = self.labels[name]
        return [v] if isinstance(v, int) else list(v)

    def distinguished(self) -> list[int]:
        keys = [k for k in ("e", "b", "c", "d", "P", "U", "degree1") if k in self.labels]
        return sorted({i for k in keys for i in self.label_indices(k)})


@dataclass(frozen=True)
class LinMap:
    """Linear self-map of an algebra's coordinate space, stored by column images."""

    cols: tuple
    field: Field = QQ

    @property
    def n(self) -> int:
        return len(self.cols)

    @classmethod
    def from_images(cls, images: Sequence[Mapping[int, object]], field: Field) -> "LinMap":
        return cls(tuple(tuple(sorted((k, field(c)) for k, c in im.items() if c)) for im in images), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "LinMap":
        return cls.from_images([{i: 1} for i in range(n)], field)

    @classmethod
    def zero(cls, n: int, field: Field = QQ) -> "LinMap":
        return cls.from_images([{} for _ in range(n)], field)

    @classmethod
    def from_mat(cls, m: Mat) -> "LinMap":
        if not m.is_square():
            raise ValueError("a LinMap needs a square matrix")
        return cls.from_images([m.col(j) for j in range(m.ncols)], m.field)

    def image(self, i: int) -> dict:
        return dict(self.cols[i])

    def col(self, i: int) -> dict:
        return dict(self.cols[i])

    def apply_sparse(self, x: Mapping[int, object]) -> dict:
        out: dict = {}
        for i, c in x.items():
            axpy(out, c, dict(self.cols[i]))
        return out

    __call__ = apply_sparse

    def compose(self, other: "LinMap") -> "LinMap":
        """self ∘ other."""
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return LinMap.from_images([self.apply_sparse(dict(c)) for c in other.cols], self.field)

    def __matmul__(self, other: "LinMap") -> "LinMap":
        return self.compose(other)

    def with_image(self, i: int, image: Mapping[int, object]) -> "LinMap":
        cols = list(self.cols)
        cols[i] = tuple(sorted((k, self.field(c)) for k, c in image.items() if c))
        return LinMap(tuple(cols), self.field)

    def sparse_rows(self) -> list[dict]:
        rows: list[dict] = [{} for _ in range(self.n)]
        for j, col in enumerate(self.cols):
            for i, c in col:
                rows[i][j] = c
        return rows

    def to_mat(self) -> Mat:
        F = self.field
        rows = [[F.zero] * self.n for _ in range(self.n)]
        for j, col in enumerate(self.cols):
            for i, c in col:
                rows[i][j] = c
        return Mat(tuple(tuple(r) for r in rows), F, self.n)


@dataclass(frozen=True)
class GammaVector:
    """Six pairwise-distinct eigenvalues outside {0, 1}."""

    values: tuple
    field: Field = QQ

    def __post_init__(self):
        vals = tuple(self.field(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != 6:
            raise ValueError("gamma needs exactly six values")
        if any(v == 0 or v == 1 for v in vals):
            raise ValueError("gamma values must avoid 0 and 1")
        if len(set(vals)) != 6:
            raise ValueError("gamma values must be pairwise distinct")

    @classmethod
    def default(cls, field: Field = QQ) -> "GammaVector":
        return cls((2, 3, 4, 5, 6, 7), field)

    def __getitem__(self, i: int):
        """1-based access, gamma[1] .. gamma[6]."""
        if not 1 <= i <= 6:
            raise IndexError(i)
        return self.values[i - 1]

    @property
    def bc(self):
        g1, g2, g3 = self.values[:3]
        return (g2 - g1) / (g2 - g3)


@dataclass
class EndoReport:
    verdict: str
    witness: tuple | None
    pairs_checked: int
    policy: str
    seed: int | None = None
    total_pairs: int = 0

    @property
    def ok(self) -> bool:
        return self.verdict == "endomorphism"

    def describe(self) -> str:
        s = f"{self.verdict} pairs={self.pairs_checked}/{self.total_pairs} policy={self.policy}"
        if self.seed is not None:
            s += f" seed={self.seed}"
        if self.witness is not None:
            s += f" witness={self.witness[0]},{self.witness[1]}"
        return s


def _pair_violates(a: AlgebraHandle, images: Sequence[dict], i: int, j: int) -> bool:
    lhs: dict = {}
    for k, c in a.mul_basis(i, j).items():
        axpy(lhs, c, images[k])
    return lhs != a.mul(images[i], images[j])


def default_policy(a: AlgebraHandle) -> str:
    return "all" if a.n <= 200 else f"sample:{10 * a.n}"


def sample_pairs(a: AlgebraHandle, count: int, seed: int) -> list[tuple[int, int]]:
    """Seeded random pairs plus every pair touching a distinguished basis vector."""
    rng = random.Random(seed)
    pairs = set()
    n = a.n
    for _ in range(min(count, n * n)):
        pairs.add((rng.randrange(n), rng.randrange(n)))
    for i in a.distinguished():
        for j in range(n):
            pairs.add((i, j))
            pairs.add((j, i))
    return sorted(pairs)


def is_endo(a: AlgebraHandle, sigma: LinMap, policy: str | None = None, seed: int = 0) -> EndoReport:
    """Check sigma(x·y) = sigma(x)·sigma(y) on basis pairs.

    ``policy`` is ``"all"`` (every ordered pair; sufficient by bilinearity)
    or ``"sample:K"``.  The witness is the lexicographically smallest
    violating pair among those checked.
    """
    if sigma.n != a.n:
        raise ValueError(f"map of size {sigma.n} on an algebra of dimension {a.n}")
    policy = policy or default_policy(a)
    images = [dict(c) for c in sigma.cols]
    if policy == "all":
        pairs = product(range(a.n), repeat=2)
        used_seed = None
    elif policy.startswith("sample:"):
        pairs = sample_pairs(a, int(policy.split(":", 1)[1]), seed)
        used_seed = seed
    else:
        raise ValueError(f"unknown policy {policy!r}")
    checked = 0
    for i, j in pairs:
        checked += 1
        if _pair_violates(a, images, i, j):
            return EndoReport("violation", (i, j), checked, policy, used_seed, a.n * a.n)
    return EndoReport("endomorphism", None, checked, policy, used_seed, a.n * a.n)


def replay_witness(a: AlgebraHandle, sigma: LinMap, witness: tuple[int, int]) -> bool:
    """True if the witness pair still violates multiplicativity."""
    return _pair_violates(a, [dict(c) for c in sigma.cols], *witness)


# --- constructors ------------------------------------------------------------


def literal_algebra(n: int, field: Field, constants: Mapping[tuple[int, int], Mapping[int, object]]) -> AlgebraHandle:
    table = {ij: {k: field(c) for k, c in out.items() if c} for ij, out in constants.items()}
    return AlgebraHandle(n, field, lambda i, j: table.get((i, j), {}), "Literal")


def zero_algebra(n: int, field: Field = QQ) -> AlgebraHandle:
    return AlgebraHandle(n, field, lambda i, j: {}, "Literal")


def build_example1(dimV: int, lam, field: Field = QQ) -> AlgebraHandle:
    """Basis (e, v_1..v_n): e·e=e, e·v=v, v·e=lam·v, v·w=0."""
    lam = field(lam)
    if lam == 0 or lam == 1:
        raise ValueError("lambda must avoid 0 and 1")
    if dimV < 1:
        raise ValueError("dim V must be >= 1")
    one = field.one

    def mul(i, j):
        if i == 0:
            return {j: one}
        if j == 0:
            return {i: lam}
        return {}

    names = ["e"] + [f"v{k}" for k in range(1, dimV + 1)]
    return AlgebraHandle(dimV + 1, field, mul, "Example1", {"e": 0, "V": list(range(1, dimV + 1)), "degree1": list(range(1, dimV + 1))}, names)


def build_exterior2(field: Field = QQ) -> AlgebraHandle:
    """Λ(V) for dim V = 2 on the basis (1, v1, v2, v1∧v2)."""
    if field.char == 2:
        raise ValueError("the exterior example needs characteristic != 2")
    one = field.one
    table = {
        (1, 2): {3: one},
        (2, 1): {3: -one},
    }

    def mul(i, j):
        if i == 0:
            return {j: one}
        if j == 0:
            return {i: one}
        return table.get((i, j), {})

    return AlgebraHandle(4, field, mul, "Exterior2", {"e": 0, "degree1": [1, 2]}, ["1", "v1", "v2", "v1^v2"])


def exterior_monoid_matrix(b: Mat, c: Sequence, d=None) -> LinMap:
    """The 4x4 matrix [[1,0,0,0],[0,b11,b12,0],[0,b21,b22,0],[0,c1,c2,d]], d = det(b) by default."""
    F = b.field
    if b.shape != (2, 2):
        raise ValueError("b must be 2x2")
    det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
    dd = det if d is None else F(d)
    c1, c2 = (F(x) for x in c)
    m = Mat.of(
        [
            [1, 0, 0, 0],
            [0, b[0, 0], b[0, 1], 0],
            [0, b[1, 0], b[1, 1], 0],
            [0, c1, c2, dd],
        ],
        F,
    )
    return LinMap.from_mat(m)


class _TensorBasis:
    """Basis bookkeeping for A(V,S): words of degree < r, then complement words."""

    def __init__(self, spec: TruncationSpec, offset: int):
        self.spec = spec
        self.offset = offset
        self.words: list = []
        for deg in range(1, spec.r):
            self.words.extend(words(spec.dimV, deg))
        self.words.extend(spec.complement_words)
        self.index = {w: offset + i for i, w in enumerate(self.words)}

    def word(self, i: int):
        return self.words[i - self.offset]

    def to_element(self, x: Mapping) -> dict:
        return {self.index[w]: c for w, c in x.items() if c}

    def product(self, i: int, j: int) -> dict:
        one = self.spec.field.one
        return self.to_element(concat_mul({self.word(i): one}, {self.word(j): one}, self.spec))

    def indices_of_degree(self, deg: int) -> list[int]:
        return [self.index[w] for w in self.words if len(w) == deg]


def build_truncated(spec: TruncationSpec) -> AlgebraHandle:
    tb = _TensorBasis(spec, 0)
    names = ["".join(f"v{a + 1}" for a in w) for w in tb.words]
    labels = {"degree1": tb.indices_of_degree(1), "A": list(range(len(tb.words))), "complement": tb.indices_of_degree(spec.r)}
    h = AlgebraHandle(len(tb.words), spec.field, tb.product, "TruncatedTensorQuotient", labels, names)
    h.spec = spec
    h.tensor_basis = tb
    return h


def _letter_name(a: int) -> str:
    if a == P1:
        return "p1"
    if a == P2:
        return "p2"
    return f"u{a - 1}"


def build_D(dimU: int, spec: TruncationSpec, gamma: GammaVector) -> AlgebraHandle:
    """The rigidified algebra D(P,U,S,gamma) on the basis (e, b, c, d) ⊕ A(V,S)."""
    if spec.dimV != dimU + 2:
        raise ValueError(f"dim V must be 2 + dim U = {dimU + 2}, got {spec.dimV}")
    if gamma.field != spec.field:
        raise ValueError("gamma and S are over different fields")
    F = spec.field
    E, B, C, Dd = 0, 1, 2, 3
    tb = _TensorBasis(spec, 4)
    one = F.one
    g = gamma.values
    gbc = gamma.bc
    p1, p2 = tb.index[(P1,)], tb.index[(P2,)]
    U = [tb.index[(u_letter(j),)] for j in range(1, dimU + 1)]
    eig = {B: g[0], C: g[1], Dd: g[2], p1: g[3], p2: g[3]}
    for i in U:
        eig[i] = g[4]
    table = {
        (B, B): {},
        (B, C): {C: one, B: gbc},
        (B, Dd): {},
        (C, B): {C: -one},
        (C, C): {B: one},
        (C, Dd): {E: one},
        (Dd, B): {p1: one},
        (Dd, C): {Dd: one},
        (Dd, Dd): {p2: one},
    }

    def mul(i, j):
        if i == E:
            return {j: one}
        if j == E:
            return {i: eig.get(i, g[5])}
        if i < 4 and j < 4:
            return table[i, j]
        if i < 4 or j < 4:
            return {}
        return tb.product(i, j)

    names = ["e", "b", "c", "d"] + ["*".join(_letter_name(a) for a in w) for w in tb.words]
    graded = [i for i in range(4 + len(tb.words)) if i >= 4 and len(tb.word(i)) >= 2]
    labels = {
        "e": E,
        "b": B,
        "c": C,
        "d": Dd,
        "P": [p1, p2],
        "U": U,
        "degree1": [p1, p2] + U,
        "graded": graded,
        "A": list(range(4, 4 + len(tb.words))),
        "complement": tb.indices_of_degree(spec.r),
    }
    h = AlgebraHandle(4 + len(tb.words), F, mul, "Dee", labels, names)
    h.spec = spec
    h.tensor_basis = tb
    h.gamma = gamma
    h.dimU = dimU
    return h


def tensor_map(a: AlgebraHandle, G: Mat, check: bool = True) -> LinMap:
    """The degree-wise map G^{(x)i} on the tensor part of ``a``, identity on e, b, c, d.

    Degree-r complement words are lifted, moved by G^{(x)r} and reduced
    mod S.  With ``check=True`` a G that does not preserve S raises,
    because the map on the quotient is then not well defined.
    """
    spec: TruncationSpec = a.spec
    tb: _TensorBasis = a.tensor_basis
    if G.shape != (spec.dimV, spec.dimV):
        raise ValueError(f"G must be {spec.dimV}x{spec.dimV}")
    if check and not spec.normalized_by(G):
        raise QuotientActionUndefined("G^(x)r does not preserve S")
    cols = _columns(G)
    images = [{i: a.field.one} for i in range(tb.offset)]
    for w in tb.words:
        images.append(tb.to_element(spec.reduce(tensor_power_word(cols, w))))
    return LinMap.from_images(images, a.field)


def induced_endo(dhandle: AlgebraHandle, g: Mat) -> LinMap:
    """The endomorphism of D induced by g ∈ L(U)_S via id_P ⊕ g."""
    G = extend_to_V(g)
    if not dhandle.spec.normalized_by(G):
        raise NotInNormalizer("g is not in L(U)_S: (id_P + g)^(x)r does not preserve S")
    return tensor_map(dhandle, G, check=False)


# --- structural checks ----------------------------------------------------------


def right_mult_operator(a: AlgebraHandle, x: Mapping[int, object]) -> LinMap:
    """Matrix of y ↦ y·x."""
    return LinMap.from_images([a.mul({i: a.field.one}, x) for i in range(a.n)], a.field)


def left_mult_operator(a: AlgebraHandle, x: Mapping[int, object]) -> LinMap:
    return LinMap.from_images([a.mul(x, {i: a.field.one}) for i in range(a.n)], a.field)


def left_identity_check(a: AlgebraHandle, e: Mapping[int, object] | int) -> bool:
    if isinstance(e, int):
        e = a.basis_vector(e)
    return all(a.mul(e, {i: a.field.one}) == {i: a.field.one} for i in range(a.n))


def nilpotency_check(a: AlgebraHandle, k: int, block: Sequence[int] | None = None) -> bool:
    """True if the k-th power of the (sub)algebra spanned by ``block`` is zero.

    Powers are A^1 = A and A^m = sum_{i+j=m} A^i·A^j, so no associativity
    is assumed.
    """
    block = list(range(a.n)) if block is None else list(block)
    F = a.field
    powers = {1: Subspace.span([{i: F.one} for i in block], a.n, F)}
    for m in range(2, k + 1):
        vecs = set()
        for i in range(1, m):
            left, right = powers[i].rows(), powers[m - i].rows()
            for x in left:
                for y in right:
                    z = a.mul(x, y)
                    if z:
                        vecs.add(tuple(sorted(z.items())))
        powers[m] = Subspace.span([dict(v) for v in sorted(vecs)], a.n, F)
        if powers[m].dim == 0:
            return True
    return powers[k].dim == 0 if k in powers else False


def eigen_blocks(dh: AlgebraHandle) -> dict[int, list[int]]:
    """Expected eigenspace blocks of right multiplication by e, keyed by gamma index (0 for eigenvalue 1)."""
    return {
        0: [dh.labels["e"]],
        1: [dh.labels["b"]],
        2: [dh.labels["c"]],
        3: [dh.labels["d"]],
        4: list(dh.labels["P"]),
        5: list(dh.labels["U"]),
        6: list(dh.labels["graded"]),
    }


def check_eigenspaces(dh: AlgebraHandle) -> tuple[bool, str]:
    """Eigenspaces of y ↦ y·e equal the labeled blocks and exhaust the space."""
    F = dh.field
    Re = right_mult_operator(dh, dh.basis_vector(dh.labels["e"]))
    total = 0
    for idx, block in eigen_blocks(dh).items():
        lam = F.one if idx == 0 else dh.gamma[idx]
        es = eigenspace(Re, lam)
        expected = Subspace.span([{i: F.one} for i in block], dh.n, F)
        if es != expected:
            return False, f"eigenvalue {lam}: eigenspace of dim {es.dim} differs from block of dim {expected.dim}"
        total += es.dim
    if total != dh.n:
        return False, f"eigenspaces cover {total} of {dh.n} dimensions"
    return True, f"spectrum {{1, gamma_1..gamma_6}} with blocks covering all {dh.n} dimensions"


def check_bcd_annihilates_A(dh: AlgebraHandle) -> bool:
    bcd = [dh.labels[k] for k in ("b", "c", "d")]
    for i in bcd:
        for j in dh.labels["A"]:
            if dh.mul_basis(i, j) or dh.mul_basis(j, i):
                return False
    return True


# --- exhaustive searches over F_p ------------------------------------------------


def structure_tensor(a: AlgebraHandle) -> np.ndarray:
    """Dense int64 structure constants C[i, j, k] for an algebra over F_p."""
    if not isinstance(a.field, PrimeField):
        raise ValueError("structure_tensor needs a prime field")
    C = np.zeros((a.n, a.n, a.n), dtype=np.int64)
    for i in range(a.n):
        for j in range(a.n):
            for k, c in a.mul_basis(i, j).items():
                C[i, j, k] = int(c)
    return C


def idempotents_bruteforce(a: AlgebraHandle, capacity: int = IDEMPOTENT_CAPACITY) -> list[dict]:
    """Every ε with ε·ε = ε, by exhaustive enumeration of all p^n elements."""
    if not isinstance(a.field, PrimeField):
        raise ValueError("exhaustive idempotent search needs a prime field")
    p, n = a.field.p, a.n
    total = p**n
    if total > capacity:
        raise CapacityError(f"{p}^{n} = {total} elements exceeds the capacity {capacity}")
    C = structure_tensor(a)
    chunk = max(1, (1 << 22) // (n * n))
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    found = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        X = (idx[:, None] // weights[None, :]) % p
        # (X ⊗ X) contracted with C, reduced every step to stay inside int64
        XC = np.einsum("ni,ijk->njk", X, C) % p
        sq = np.einsum("nj,njk->nk", X, XC) % p
        hits = np.nonzero(np.all(sq == X, axis=1))[0]
        for h in hits:
            found.append({i: a.field(int(v)) for i, v in enumerate(X[h]) if v})
    return found


def lambda_equations(g: GammaVector) -> Callable:
    """The four coordinate equations of ε² = ε on the (e, b, c, d) part."""
    g1, g2, g3 = g.values[:3]
    gbc = g.bc

    def residuals(le, lb, lc, ld):
        return (
            le * le + lc * ld - le,
            lb * le * (1 + g1) + lc * lc + lb * lc * gbc - lb,
            lc * le * (1 + g2) - lc,
            ld * le * (1 + g3) + lc * ld - ld,
        )

    return residuals


def lambda_system_solve(gamma: GammaVector) -> list[tuple[int, int, int, int]]:
    """All (λ_e, λ_b, λ_c, λ_d) ∈ F_p^4 solving the idempotent equations, by exhaustion."""
    F = gamma.field
    if not isinstance(F, PrimeField):
        raise ValueError("lambda_system_solve enumerates F_p; gamma must be over a prime field")
    p = F.p
    g1, g2, g3 = (int(v) for v in gamma.values[:3])
    gbc = int(gamma.bc)
    out = []
    for le, lb, lc, ld in product(range(p), repeat=4):
        if (le * le + lc * ld - le) % p:
            continue
        if (lc * le * (1 + g2) - lc) % p:
            continue
        if (ld * le * (1 + g3) + lc * ld - ld) % p:
            continue
        if (lb * le * (1 + g1) + lc * lc + lb * lc * gbc - lb) % p:
            continue
        out.append((le, lb, lc, ld))
    return out


def delta_equations(db, dc, dd):
    return (dc * dd - 1, dc * dd - dd, db * dc - dc)


def delta_system_solve(field: Field = QQ) -> list[tuple]:
    """Solutions of δ_cδ_d = 1, δ_cδ_d = δ_d, δ_bδ_c = δ_c.

    Over F_p every triple is tried; over Q the reduced Gröbner basis is
    computed and must be triangular-linear, from which the unique point
    is read off.
    """
    if isinstance(field, PrimeField):
        p = field.p
        return [(db, dc, dd) for db, dc, dd in product(range(p), repeat=3) if not any(x % p for x in delta_equations(db, dc, dd))]
    # variables δ_b, δ_c, δ_d as y0, y1, y2 in a 3-variable ring
    y = [Poly.var(i, field, 3) for i in range(3)]
    gb = buchberger(list(delta_equations(*y)))
    if gb.is_unit:
        return []
    point = [None, None, None]
    for g in gb.gens:
        lin = [m for m in g.terms if sum(m) == 1]
        if g.degree() != 1 or len(lin) != 1:
            raise ValueError("delta system is not zero-dimensional linear after reduction")
        i = lin[0].index(1)
        point[i] = -g.terms.get((0, 0, 0), field.zero)
    if any(v is None for v in point):
        raise ValueError("delta system has a positive-dimensional solution set")
    return [tuple(point)]

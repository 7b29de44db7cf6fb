"""Linear codes over GF(q) stored as reduced row echelon generator matrices."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence

import numpy as np

from kneser_hecke.field import FieldSpec, FormKind, gf


class CodeError(ValueError):
    pass


def _rref_array(M: np.ndarray, F: FieldSpec) -> tuple[np.ndarray, list[int]]:
    M = np.array(M, dtype=np.uint8, copy=True)
    nrows, ncols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        lead = M[r, c]
        if lead != 1:
            M[r] = F.mul_table[F.inv_table[lead], M[r]]
        col = M[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            if F.q == 2:
                M[hit] ^= M[r]
            else:
                M[hit] = F.vsub(M[hit], F.mul_table[col[hit, None], M[r][None, :]])
        pivots.append(c)
        r += 1
    return M[:r], pivots


class Code:
    """A k-dimensional subspace of GF(q)^N.

    The generator matrix is kept in reduced row echelon form, so two codes are
    equal as subspaces exactly when their ``generators`` arrays coincide.
    """

    __slots__ = ("field", "N", "generators", "pivots", "_key", "_hash")

    def __init__(self, field: FieldSpec, N: int, generators: np.ndarray, pivots: list[int]):
        self.field = field
        self.N = N
        generators = np.ascontiguousarray(generators, dtype=np.uint8).reshape(-1, N)
        generators.setflags(write=False)
        self.generators = generators
        self.pivots = tuple(pivots)
        self._key = (field.q, N, generators.shape[0], generators.tobytes())
        self._hash = hash(self._key)

    @property
    def k(self) -> int:
        return self.generators.shape[0]

    @property
    def q(self) -> int:
        return self.field.q

    def __eq__(self, other) -> bool:
        return isinstance(other, Code) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        rows = ["".join(str(int(x)) for x in row) for row in self.generators]
        return f"Code(q={self.q}, N={self.N}, k={self.k}, [{', '.join(rows)}])"

    def key(self) -> bytes:
        return self._key[3]

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "N": self.N,
            "k": self.k,
            "generators": self.generators.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> Code:
        F = gf(int(data["field"]["q"]))
        rows = data["generators"]
        return rref(rows, F, N=int(data["N"]))

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.N,):
            raise CodeError(f"vector of length {v.shape} does not live in GF(q)^{self.N}")
        return not reduce_vector(self, v).any()

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` in the RREF basis (assumes ``v`` lies in the code)."""
        return np.asarray(v, dtype=np.uint8)[list(self.pivots)]

    def codewords(self) -> np.ndarray:
        """All q^k codewords as a (q^k, N) array, in coefficient-lexicographic order."""
        return self.field.matmul(all_vectors(self.field, self.k), self.generators)

    def permute(self, perm: Sequence[int]) -> Code:
        """Image under the coordinate permutation sending position i to ``perm[i]``."""
        perm = np.asarray(perm)
        out = np.empty_like(self.generators)
        out[:, perm] = self.generators
        return rref(out, self.field, N=self.N)


def all_vectors(F: FieldSpec, k: int) -> np.ndarray:
    """Every vector of GF(q)^k as rows, the first coordinate varying slowest."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    grids = np.indices((F.q,) * k, dtype=np.uint8)
    return grids.reshape(k, -1).T.copy()


def rref(rows, F: FieldSpec, N: int | None = None) -> Code:
    """Row-reduce ``rows`` into a :class:`Code`; zero and dependent rows are dropped."""
    if isinstance(rows, np.ndarray):
        M = rows
    else:
        rows = [list(r) for r in rows]
        lengths = {len(r) for r in rows}
        if len(lengths) > 1:
            raise CodeError(f"ragged generator rows with lengths {sorted(lengths)}")
        if not rows:
            if N is None:
                raise CodeError("cannot infer the length of an empty generator set")
            return Code(F, N, np.zeros((0, N), dtype=np.uint8), [])
        M = np.array(rows, dtype=np.int64)
    if M.ndim != 2:
        raise CodeError("generator matrix must be two-dimensional")
    if N is not None and M.shape[1] != N:
        raise CodeError(f"rows have length {M.shape[1]}, expected {N}")
    if M.size and (M.min() < 0 or M.max() >= F.q):
        raise CodeError(f"entries must be element indices of GF({F.q})")
    R, piv = _rref_array(M.astype(np.uint8), F)
    return Code(F, M.shape[1], R, piv)


def zero_code(F: FieldSpec, N: int) -> Code:
    return Code(F, N, np.zeros((0, N), dtype=np.uint8), [])


def full_space(F: FieldSpec, N: int) -> Code:
    return Code(F, N, np.eye(N, dtype=np.uint8), list(range(N)))


def reduce_vector(C: Code, v: np.ndarray) -> np.ndarray:
    """Residue of ``v`` after eliminating the pivot positions of ``C``."""
    F = C.field
    v = np.asarray(v, dtype=np.uint8)
    coeff = v[list(C.pivots)]
    if not coeff.any():
        return v
    return F.vsub(v, F.matmul(coeff[None, :], C.generators)[0])


def _kernel(R: np.ndarray, pivots: Sequence[int], N: int, F: FieldSpec) -> np.ndarray:
    """Basis of ``{v : R v = 0}`` for an RREF matrix ``R``."""
    free = [c for c in range(N) if c not in set(pivots)]
    K = np.zeros((len(free), N), dtype=np.uint8)
    for j, f in enumerate(free):
        K[j, f] = 1
        for i, pc in enumerate(pivots):
            K[j, pc] = F.neg_table[R[i, f]]
    return K


def dual(C: Code, kind: FormKind | str = FormKind.EUCLIDEAN) -> Code:
    """Orthogonal complement under the Euclidean or Hermitian form."""
    F = C.field
    kind = FormKind(kind)
    if C.k == 0:
        return full_space(F, C.N)
    G = C.generators
    if kind == FormKind.HERMITIAN:
        # v in C^perp  <=>  conj(G) v = 0
        R, piv = _rref_array(F.vconj(G), F)
    else:
        R, piv = G, list(C.pivots)
    return rref(_kernel(R, piv, C.N, F), F, N=C.N)


def _check_ambient(C: Code, D: Code) -> None:
    if C.field != D.field or C.N != D.N:
        raise CodeError(f"codes live in different spaces: GF({C.q})^{C.N} vs GF({D.q})^{D.N}")


def code_sum(C: Code, D: Code) -> Code:
    _check_ambient(C, D)
    return rref(np.vstack([C.generators, D.generators]), C.field, N=C.N)


def intersect(C: Code, D: Code) -> Code:
    """Intersection via ``(C^perp + D^perp)^perp`` for the Euclidean form."""
    _check_ambient(C, D)
    return dual(code_sum(dual(C), dual(D)))


def direct_sum(*codes: Code) -> Code:
    F = codes[0].field
    N = sum(c.N for c in codes)
    k = sum(c.k for c in codes)
    M = np.zeros((k, N), dtype=np.uint8)
    r = c0 = 0
    for c in codes:
        M[r : r + c.k, c0 : c0 + c.N] = c.generators
        r += c.k
        c0 += c.N
    return rref(M, F, N=N)


def projective_points(F: FieldSpec, k: int) -> np.ndarray:
    """Representatives of the 1-dim subspaces of GF(q)^k, first nonzero entry equal to 1."""
    vecs = all_vectors(F, k)[1:]
    if F.q == 2 or k == 0:
        return vecs
    lead = vecs[np.arange(len(vecs)), (vecs != 0).argmax(axis=1)]
    return vecs[lead == 1]


def hyperplane_of(C: Code, functional: np.ndarray) -> Code:
    """``{x G : x . f = 0}`` for a nonzero coefficient functional ``f``."""
    F = C.field
    f = np.asarray(functional, dtype=np.uint8)
    j = int(np.flatnonzero(f)[0])
    if f[j] != 1:
        f = F.mul_table[F.inv_table[f[j]], f]
    basis = []
    for i in range(C.k):
        if i == j:
            continue
        x = np.zeros(C.k, dtype=np.uint8)
        x[i] = 1
        x[j] = F.neg_table[f[i]]
        basis.append(x)
    if not basis:
        return zero_code(F, C.N)
    return rref(F.matmul(np.array(basis), C.generators), F, N=C.N)


def subspaces_codim1(C: Code, must_contain=None) -> Iterator[Code]:
    """Every codimension-1 subspace of ``C`` (containing ``must_contain`` if given), once each."""
    for f in hyperplane_functionals(C, must_contain):
        yield hyperplane_of(C, f)


def hyperplane_functionals(C: Code, must_contain=None) -> np.ndarray:
    """Projective functionals on the RREF coordinates whose kernels are the hyperplanes."""
    F = C.field
    pts = projective_points(F, C.k)
    if must_contain is not None:
        v = np.asarray(must_contain, dtype=np.uint8)
        if not C.contains(v):
            raise CodeError("constraint vector is not a codeword")
        x = C.coordinates(v)
        vals = F.matmul(pts, x[:, None])[:, 0]
        pts = pts[vals == 0]
    return pts


def subspaces(F: FieldSpec, d: int, k: int) -> Iterator[np.ndarray]:
    """All k-dimensional subspaces of GF(q)^d as k x d RREF matrices."""
    for piv in itertools.combinations(range(d), k):
        free_slots = [(i, c) for i, p in enumerate(piv) for c in range(p + 1, d) if c not in piv]
        for vals in itertools.product(range(F.q), repeat=len(free_slots)):
            M = np.zeros((k, d), dtype=np.uint8)
            for i, p in enumerate(piv):
                M[i, p] = 1
            for (i, c), v in zip(free_slots, vals):
                M[i, c] = v
            yield M


def gaussian_binomial(d: int, k: int, q: int) -> int:
    if k < 0 or k > d:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def weights(words: np.ndarray) -> np.ndarray:
    return np.count_nonzero(words, axis=-1)


def allones(F: FieldSpec, N: int) -> np.ndarray:
    return np.ones(N, dtype=np.uint8)


def contains_allones(C: Code) -> bool:
    return C.contains(allones(C.field, C.N))


def is_self_orthogonal(C: Code, kind: FormKind | str = FormKind.EUCLIDEAN) -> bool:
    G = C.generators
    return not C.field.gram(G, G, FormKind(kind)).any()


def is_self_dual(C: Code, kind: FormKind | str = FormKind.EUCLIDEAN) -> bool:
    return 2 * C.k == C.N and is_self_orthogonal(C, kind)


def is_doubly_even(C: Code) -> bool:
    """Binary only: all weights divisible by 4.

    Checked on generators (weights = 0 mod 4, pairwise overlaps even), which is
    equivalent over GF(2).
    """
    if C.q != 2:
        raise CodeError("doubly-even is only defined here for binary codes")
    G = C.generators.astype(np.int64)
    if (G.sum(axis=1) % 4).any():
        return False
    overlaps = G @ G.T
    return not (overlaps % 2).any()


def from_strings(words: Iterable[str], q: int = 2) -> Code:
    """Convenience constructor: ``from_strings(["1100", "0011"])``."""
    return rref([[int(ch) for ch in w] for w in words], gf(q))

"""Kneser neighbours of self-dual codes and classification by the neighbour graph."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from kneser_hecke import __version__
from kneser_hecke.canonical import CanonicalCode, canonical_form
from kneser_hecke.code import (
    Code,
    all_vectors,
    allones,
    direct_sum,
    dual,
    from_strings,
    gaussian_binomial,
    hyperplane_functionals,
    hyperplane_of,
    projective_points,
    reduce_vector,
    rref,
    subspaces,
    zero_code,
)
from kneser_hecke.family import FamilyError, MonomialSet, TypeSpec

DEFAULT_SUBSPACE_CAP = 200_000


class NeighborError(ValueError):
    pass


# ---------------------------------------------------------------------------
# neighbours of a single code


def _not_in(C: Code, rows: np.ndarray) -> np.ndarray:
    for r in rows:
        if reduce_vector(C, r).any():
            return r
    raise NeighborError("no vector outside the subspace")


def neighbors_through(C: Code, E: Code, t: TypeSpec) -> list[Code]:
    """Codes ``D`` of the Type with ``D`` and ``C`` meeting exactly in the hyperplane ``E``.

    ``E^perp / E`` is a plane; its lines other than ``C/E`` are tested.
    """
    F = C.field
    Ep = dual(E, t.form_kind)
    u = _not_in(E, C.generators)
    w = _not_in(C, Ep.generators)
    out = []
    for lam in range(F.q):
        x = F.vadd(w, F.vmul(np.uint8(lam), u))
        D = rref(np.vstack([E.generators, x[None, :]]), F, N=C.N)
        if t.is_member(D):
            out.append(D)
    return out


def _hyperplane_constraint(C: Code, t: TypeSpec):
    if t.monomial_set == MonomialSet.M_ONE:
        # alpha_E = 0 unless the all-ones vector lies in E
        return allones(C.field, C.N)
    return None


def neighbors(C: Code, t: TypeSpec) -> list[Code]:
    """All 1-neighbours of ``C`` inside its Type, each exactly once."""
    if not t.is_member(C):
        raise NeighborError(f"code is not a member of Type {t.label}")
    out = []
    for f in hyperplane_functionals(C, _hyperplane_constraint(C, t)):
        out.extend(neighbors_through(C, hyperplane_of(C, f), t))
    return out


def k_neighbors(
    C: Code, t: TypeSpec, k: int, cap: int = DEFAULT_SUBSPACE_CAP
) -> list[Code]:
    """All codes ``D`` of the Type with ``dim(C & D) = n - k``.

    Every codimension-k subspace ``E`` of ``C`` is visited; the candidates are
    the graphs ``<w_i + sum_j M_ij c_j>`` over ``E`` where ``c`` completes ``E``
    to ``C`` and ``w`` completes ``C`` to ``E^perp``.
    """
    n = C.k
    if not 1 <= k <= n:
        raise NeighborError(f"k={k} outside 1..{n}")
    if k == 1:
        return neighbors(C, t)
    if not t.is_member(C):
        raise NeighborError(f"code is not a member of Type {t.label}")
    F = C.field
    work = gaussian_binomial(n, k, F.q) * F.q ** (k * k)
    if work > cap:
        raise NeighborError(f"k-neighbour enumeration needs ~{work} candidates (cap {cap}; raise --subspace-cap)")
    one = allones(F, C.N) if t.requires_allones else None
    found: dict[Code, None] = {}
    mats = list(all_vectors(F, k * k))
    for Fm in subspaces(F, n, k):
        # E = {x G : Fm x = 0}
        ker = dual(rref(Fm, F, N=n))
        E = rref(F.matmul(ker.generators, C.generators), F, N=C.N) if ker.k else zero_code(F, C.N)
        if one is not None and not E.contains(one):
            continue
        Ep = dual(E, t.form_kind)
        cs = _complement(E, C.generators, k)
        ws = _complement(C, Ep.generators, k)
        for flat in mats:
            M = flat.reshape(k, k)
            rows = F.vadd(ws, F.matmul(M, cs))
            D = rref(np.vstack([E.generators, rows]), F, N=C.N)
            if D.k == n and t.is_member(D):
                found[D] = None
    return list(found)


def _complement(sub: Code, rows: np.ndarray, k: int) -> np.ndarray:
    """``k`` rows of ``rows`` independent modulo ``sub``."""
    basis = sub
    picked = []
    for r in rows:
        if reduce_vector(basis, r).any():
            picked.append(r)
            basis = rref(np.vstack([basis.generators, r[None, :]]), sub.field, N=sub.N)
            if len(picked) == k:
                return np.array(picked, dtype=np.uint8)
    raise NeighborError("could not complete the subspace")


# ---------------------------------------------------------------------------
# seeds

HAMMING_8 = ("11110000", "00111100", "00001111", "01010101")


def construct_seed(t: TypeSpec, N: int, rng_seed: int = 0) -> Code:
    """A member of the Type at length ``N``: orthogonal sums for q = 2, else a greedy isotropic build."""
    n = t.check_length(N)
    if t.name == "qEI" and t.q == 2:
        return direct_sum(*[from_strings(["11"])] * n)
    if t.name == "qEII":
        return direct_sum(*[from_strings(HAMMING_8)] * (N // 8))
    return _greedy_seed(t, N, rng_seed)


def _admissible(t: TypeSpec, v: np.ndarray) -> bool:
    F = t.field
    if F.gram(v[None, :], v[None, :], t.form_kind)[0, 0]:
        return False
    if t.requires_doubly_even and np.count_nonzero(v) % 4:
        return False
    return True


def _greedy_seed(t: TypeSpec, N: int, rng_seed: int, tries: int = 4000) -> Code:
    """Extend a totally isotropic subspace one vector at a time.

    All maximal totally isotropic subspaces of these geometries have the same
    dimension, so the build reaches dimension N/2 exactly when the family is
    non-empty.
    """
    F = t.field
    n = N // 2
    rng = np.random.default_rng(rng_seed)
    E = rref([allones(F, N)], F) if t.requires_allones else zero_code(F, N)
    while E.k < n:
        Ep = dual(E, t.form_kind)
        nxt = None
        for _ in range(tries):
            coeff = rng.integers(0, F.q, size=Ep.k).astype(np.uint8)
            v = F.matmul(coeff[None, :], Ep.generators)[0]
            if reduce_vector(E, v).any() and _admissible(t, v):
                nxt = v
                break
        if nxt is None and F.q ** Ep.k <= 2**20:
            for v in F.matmul(all_vectors(F, Ep.k), Ep.generators):
                if reduce_vector(E, v).any() and _admissible(t, v):
                    nxt = v
                    break
        if nxt is None:
            raise FamilyError(f"no self-dual code of Type {t.label} exists at length {N}")
        E = rref(np.vstack([E.generators, nxt[None, :]]), F, N=N)
    if not t.is_member(E):
        raise FamilyError(f"seed construction for {t.label}, N={N} failed")
    return E


# ---------------------------------------------------------------------------
# automorphism orbits on hyperplanes


def hyperplane_orbits(
    C: Code, automorphisms: Sequence[Sequence[int]], constraint=None
) -> tuple[np.ndarray, np.ndarray]:
    """Orbit representatives (functionals) and orbit sizes of ``Aut(C)`` on hyperplanes."""
    F = C.field
    pts = hyperplane_functionals(C, constraint)
    if len(pts) == 0:
        return pts, np.zeros(0, dtype=np.int64)
    k = C.k
    weights = F.q ** np.arange(k - 1, -1, -1)
    lookup = np.full(F.q**k, -1, dtype=np.int64)
    lookup[pts.astype(np.int64) @ weights] = np.arange(len(pts))
    piv = list(C.pivots)
    rows, cols = [], []
    for g in automorphisms:
        img = np.empty_like(C.generators)
        img[:, np.asarray(g)] = C.generators
        A = img[:, piv]  # image of generator i has coordinates A[i]
        mapped = _normalise(F.matmul(pts, A.T), F)
        idx = lookup[mapped.astype(np.int64) @ weights]
        if (idx < 0).any():
            raise NeighborError("automorphism does not preserve the hyperplane set")
        rows.append(np.arange(len(pts)))
        cols.append(idx)
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        graph = coo_matrix((np.ones(len(r)), (r, c)), shape=(len(pts), len(pts)))
        _, labels = connected_components(graph, directed=True, connection="weak")
    else:
        labels = np.arange(len(pts))
    _, first, sizes = np.unique(labels, return_index=True, return_counts=True)
    order = np.argsort(first)
    return pts[first[order]], sizes[order]


def _normalise(vecs: np.ndarray, F) -> np.ndarray:
    if F.q == 2:
        return vecs
    lead = vecs[np.arange(len(vecs)), (vecs != 0).argmax(axis=1)]
    return F.mul_table[F.inv_table[lead][:, None], vecs]


# ---------------------------------------------------------------------------
# classification


@dataclass
class CodeClass:
    index: int
    canon: Code
    aut_order: int
    fingerprint: str
    discovered_from: int | None = None

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "fingerprint": self.fingerprint,
            "aut_order": self.aut_order,
            "generators": self.canon.generators.tolist(),
            "discovered_from": self.discovered_from,
        }


@dataclass(frozen=True)
class NeighborRecord:
    source_class: int
    target_class: int
    count: int

    def to_json(self) -> dict:
        return {"source": self.source_class, "target": self.target_class, "count": self.count}


@dataclass
class ClassDatabase:
    type: TypeSpec
    N: int
    classes: list[CodeClass] = field(default_factory=list)
    neighbor_records: list[NeighborRecord] = field(default_factory=list)
    complete: bool = False
    version: str = __version__

    @property
    def n(self) -> int:
        return self.N // 2

    def __len__(self) -> int:
        return len(self.classes)

    def aut_orders(self) -> list[int]:
        return [c.aut_order for c in self.classes]

    def mass(self) -> Fraction:
        """Sum of ``1/|Aut(C)|`` over the classes."""
        return sum((Fraction(1, a) for a in self.aut_orders()), Fraction(0))

    def total_codes(self) -> Fraction:
        """Number of distinct codes in the family: ``sum N!/|Aut(C)|``."""
        return math.factorial(self.N) * self.mass()

    def index_of(self, fp: str) -> int:
        for c in self.classes:
            if c.fingerprint == fp:
                return c.index
        raise KeyError(fp)

    def to_json(self) -> dict:
        return {
            "schema": "kneser-hecke/classes/1",
            "version": self.version,
            "type": self.type.to_json(),
            "field": self.type.field.to_json(),
            "N": self.N,
            "complete": self.complete,
            "classes": [c.to_json() for c in self.classes],
            "neighbor_records": [r.to_json() for r in self.neighbor_records],
        }

    @classmethod
    def from_json(cls, data: dict) -> ClassDatabase:
        t = TypeSpec.from_json(data["type"])
        N = int(data["N"])
        classes = []
        for c in data["classes"]:
            code = rref(c["generators"], t.field, N=N) if c["generators"] else zero_code(t.field, N)
            classes.append(
                CodeClass(int(c["index"]), code, int(c["aut_order"]), c["fingerprint"], c.get("discovered_from"))
            )
        records = [NeighborRecord(int(r["source"]), int(r["target"]), int(r["count"])) for r in data["neighbor_records"]]
        return cls(t, N, classes, records, bool(data["complete"]), data.get("version", __version__))


def _identify_orbit(args) -> list[tuple[str, CanonicalCode]]:
    C, f, t = args
    E = hyperplane_of(C, f)
    return [(cf.fingerprint, cf) for cf in (canonical_form(D) for D in neighbors_through(C, E, t))]


def classify(
    t: TypeSpec,
    N: int,
    seed: Code | None = None,
    use_orbits: bool = True,
    threads: int = 1,
    progress: Callable[[str], None] | None = None,
) -> ClassDatabase:
    """Breadth-first closure of the neighbour relation starting at ``seed``.

    Neighbour counts are recorded per (source, target) class.  With
    ``use_orbits`` the hyperplanes of each representative are visited up to
    its automorphism group and each result is weighted by the orbit length.
    """
    t.check_length(N)
    if seed is None:
        seed = construct_seed(t, N)
    if seed.N != N or not t.is_member(seed):
        raise NeighborError(f"seed is not a code of Type {t.label} and length {N}")
    db = ClassDatabase(t, N)
    index: dict[str, int] = {}

    def add(cf: CanonicalCode, source: int | None) -> int:
        if cf.fingerprint in index:
            return index[cf.fingerprint]
        i = len(db.classes)
        db.classes.append(CodeClass(i, cf.canon, cf.aut_order, cf.fingerprint, source))
        index[cf.fingerprint] = i
        return i

    add(canonical_form(seed), None)
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        i = 0
        while i < len(db.classes):
            C = db.classes[i].canon
            constraint = _hyperplane_constraint(C, t)
            if use_orbits:
                auts = canonical_form(C).automorphisms
                reps, sizes = hyperplane_orbits(C, auts, constraint)
            else:
                reps = hyperplane_functionals(C, constraint)
                sizes = np.ones(len(reps), dtype=np.int64)
            jobs = [(C, f, t) for f in reps]
            results = pool.map(_identify_orbit, jobs, chunksize=8) if pool else map(_identify_orbit, jobs)
            counts: Counter[int] = Counter()
            for size, found in zip(sizes, results):
                for _, cf in found:
                    counts[add(cf, i)] += int(size)
            for target in sorted(counts):
                db.neighbor_records.append(NeighborRecord(i, target, counts[target]))
            if progress:
                progress(
                    f"{t.label} N={N}: class {i} |Aut|={db.classes[i].aut_order} "
                    f"orbits={len(reps)} known={len(db.classes)}"
                )
            i += 1
    finally:
        if pool:
            pool.shutdown()
    db.complete = True
    return db


# ---------------------------------------------------------------------------
# condition-star helpers


def alpha_E(C: Code, E: Code, t: TypeSpec) -> int:
    """Number of codes of the Type meeting ``C`` exactly in ``E``."""
    return len(neighbors_through(C, E, t))


def hyperplanes_containing(C: Code, vectors: np.ndarray) -> list[Code]:
    """Hyperplanes of ``C`` containing every row of ``vectors``."""
    F = C.field
    pts = projective_points(F, C.k)
    X = np.array([C.coordinates(v) for v in vectors], dtype=np.uint8)
    vals = F.matmul(pts, X.T)
    keep = ~vals.any(axis=1)
    return [hyperplane_of(C, f) for f in pts[keep]]


def condition_star_sum(C: Code, t: TypeSpec, vectors: np.ndarray) -> int:
    """``sum alpha_E`` over hyperplanes ``E`` of ``C`` containing the tuple."""
    return sum(alpha_E(C, E, t) for E in hyperplanes_containing(C, vectors))


def sample_admissible_tuple(C: Code, t: TypeSpec, m: int, rng: np.random.Generator, tries: int = 10_000):
    """Random ``c in C^m`` whose monomial lies in the Type's admissible set (or None)."""
    F = C.field
    one = allones(F, C.N)
    need_one = t.monomial_set == MonomialSet.M_ONE
    for _ in range(tries):
        coeff = rng.integers(0, F.q, size=(m, C.k)).astype(np.uint8)
        vecs = F.matmul(coeff, C.generators)
        rows = np.vstack([vecs, one[None, :]]) if need_one else vecs
        if rref(rows, F, N=C.N).k == rows.shape[0]:
            return vecs
    return None

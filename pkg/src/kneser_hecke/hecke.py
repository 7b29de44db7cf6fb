"""Kneser-Hecke operators on the space spanned by equivalence classes."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from kneser_hecke import exact
from kneser_hecke.canonical import canonical_form
from kneser_hecke.family import TypeSpec
from kneser_hecke.neighbor import DEFAULT_SUBSPACE_CAP, ClassDatabase, k_neighbors


class HeckeError(ValueError):
    pass


class SpectrumError(AssertionError):
    """The eigenspaces of T do not exhaust the class space."""


@dataclass
class HeckeMatrix:
    """``entries[D][C]`` counts the k-neighbours of the representative ``C`` equivalent to ``D``.

    The operator acts on column vectors in the class basis.
    """

    k: int
    basis: list[str]
    aut_orders: list[int]
    entries: list[list[int]]

    @property
    def size(self) -> int:
        return len(self.basis)

    def column_sums(self) -> list[int]:
        return [sum(self.entries[r][c] for r in range(self.size)) for c in range(self.size)]

    def apply(self, v):
        return exact.matvec(self.entries, v)

    def to_json(self) -> dict:
        return {
            "schema": "kneser-hecke/hecke/1",
            "k": self.k,
            "basis": list(self.basis),
            "aut_orders": list(self.aut_orders),
            "entries": [list(row) for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> HeckeMatrix:
        return cls(int(data["k"]), list(data["basis"]), [int(a) for a in data["aut_orders"]], data["entries"])


def hecke_matrix(db: ClassDatabase, k: int = 1, cap: int = DEFAULT_SUBSPACE_CAP) -> HeckeMatrix:
    if not db.complete:
        raise HeckeError("the class database is incomplete; classify first")
    if k < 1:
        raise HeckeError(f"k must be >= 1, got {k}")
    size = len(db)
    M = [[0] * size for _ in range(size)]
    if k == 1:
        for r in db.neighbor_records:
            M[r.target_class][r.source_class] += r.count
    else:
        lookup = {c.fingerprint: c.index for c in db.classes}
        for c in db.classes:
            counts: Counter[int] = Counter()
            for D in k_neighbors(c.canon, db.type, k, cap):
                fp = canonical_form(D).fingerprint
                if fp not in lookup:
                    raise HeckeError(f"a {k}-neighbour of class {c.index} is not in the database")
                counts[lookup[fp]] += 1
            for target, cnt in counts.items():
                M[target][c.index] = cnt
    return HeckeMatrix(k, [c.fingerprint for c in db.classes], db.aut_orders(), M)


def inner_product(v, w, aut_orders) -> Fraction:
    """``sum v_C w_C |Aut(C)|``."""
    if not (len(v) == len(w) == len(aut_orders)):
        raise ValueError(f"dimension mismatch: {len(v)}, {len(w)}, {len(aut_orders)}")
    return sum((Fraction(a) * b * c for a, b, c in zip(v, w, aut_orders)), Fraction(0))


def sigma(aut_orders) -> list[Fraction]:
    """The mass vector ``sum |Aut(C)|^-1 [C]``."""
    return [Fraction(1, a) for a in aut_orders]


def check_self_adjoint(T: HeckeMatrix) -> tuple[bool, list[tuple[int, int]]]:
    """Check ``|Aut(D)| T[D][C] = |Aut(C)| T[C][D]``; returns offending pairs ``(D, C)`` with D < C."""
    a = T.aut_orders
    bad = []
    for d in range(T.size):
        for c in range(d + 1, T.size):
            if a[d] * T.entries[d][c] != a[c] * T.entries[c][d]:
                bad.append((d, c))
    return not bad, bad


@dataclass
class Spectrum:
    eigenvalues: list[Fraction]
    ms: list[list[int]]
    dims: list[int]
    bases: list[list[list[Fraction]]] = field(repr=False)
    size: int
    sigma_ok: bool
    orthogonal: bool

    @property
    def complete(self) -> bool:
        return sum(self.dims) == self.size

    def dims_by_m(self) -> list[int]:
        """Eigenspace dimension per genus index ``m`` (merged eigenvalues sit at their first ``m``)."""
        out = [0] * (max(m for group in self.ms for m in group) + 1)
        for group, d in zip(self.ms, self.dims):
            out[group[0]] = d
        return out

    def row(self) -> list[int]:
        """Table-style row: dimensions up to the last nonzero entry."""
        dims = self.dims_by_m()
        while len(dims) > 1 and dims[-1] == 0:
            dims.pop()
        return dims

    @property
    def merged(self) -> list[list[int]]:
        return [g for g in self.ms if len(g) > 1]

    def to_json(self) -> dict:
        return {
            "schema": "kneser-hecke/spectrum/1",
            "eigenvalues": [exact.format_fraction(x) for x in self.eigenvalues],
            "ms": self.ms,
            "dims": self.dims,
            "row": self.row(),
            "size": self.size,
            "complete": self.complete,
            "sigma_ok": self.sigma_ok,
            "orthogonal": self.orthogonal,
            "merged": self.merged,
            "bases": [[[exact.format_fraction(x) for x in v] for v in b] for b in self.bases],
        }

    @classmethod
    def from_json(cls, data: dict) -> Spectrum:
        return cls(
            [Fraction(x) for x in data["eigenvalues"]],
            [list(g) for g in data["ms"]],
            list(data["dims"]),
            [[[Fraction(x) for x in v] for v in b] for b in data["bases"]],
            int(data["size"]),
            bool(data["sigma_ok"]),
            bool(data["orthogonal"]),
        )


def spectrum(T: HeckeMatrix, t: TypeSpec, n: int, strict: bool = True) -> Spectrum:
    """Eigenspaces of T at the predicted eigenvalues ``nu_0, ..., nu_n``, computed exactly."""
    if T.k != 1:
        raise HeckeError("the spectral check applies to the neighbour operator T = T_1")
    size = T.size
    data = t.spectral_data(n)
    groups: dict[Fraction, list[int]] = {}
    for m, nu in enumerate(data.nus):
        groups.setdefault(nu, []).append(m)
    eigenvalues, ms, dims, bases = [], [], [], []
    for nu, group in groups.items():
        shifted = [
            [Fraction(T.entries[i][j]) - (nu if i == j else 0) for j in range(size)]
            for i in range(size)
        ]
        basis = exact.nullspace(shifted) if size else []
        eigenvalues.append(nu)
        ms.append(group)
        dims.append(len(basis))
        bases.append(basis)
    s = sigma(T.aut_orders)
    sigma_ok = exact.matvec(T.entries, s) == [data.nus[0] * x for x in s]
    orthogonal = all(
        inner_product(u, v, T.aut_orders) == 0
        for a in range(len(bases))
        for b in range(a + 1, len(bases))
        for u in bases[a]
        for v in bases[b]
    )
    spec = Spectrum(eigenvalues, ms, dims, bases, size, sigma_ok, orthogonal)
    if strict and not spec.complete:
        raise SpectrumError(
            f"eigenspaces at the predicted eigenvalues have total dimension {sum(dims)}, "
            f"but there are {size} classes"
        )
    return spec


def polynomial_relation(Tk: HeckeMatrix, T: HeckeMatrix) -> list[Fraction] | None:
    """Coefficients ``c`` of lowest degree with ``T_k = sum c_i T^i``, or None."""
    if Tk.basis != T.basis:
        raise HeckeError("operators are expressed in different bases")
    size = T.size
    target = [x for row in Tk.entries for x in row]
    powers = [exact.identity(size)]
    for d in range(1, size + 1):
        A = [[powers[i][r][c] for i in range(d)] for r in range(size) for c in range(size)]
        x = exact.solve(A, target)
        if x is not None:
            return x
        powers.append(exact.matmul(powers[-1], T.entries))
    return None

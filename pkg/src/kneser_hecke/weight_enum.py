"""Genus-m complete weight enumerators, the Phi operator and the filtration dimensions.

A vector ``a = (a_1, ..., a_m)`` of GF(q)^m is encoded as ``sum a_j q^(j-1)``,
so dropping the last coordinate keeps exactly the indices below ``q^(m-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from kneser_hecke import exact
from kneser_hecke.code import Code, allones, rref
from kneser_hecke.field import FieldSpec
from kneser_hecke.neighbor import ClassDatabase

DEFAULT_BUDGET = 2**26
_CHUNK = 1 << 22


class BudgetError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Monomial:
    """``prod x_a^{e_a}`` stored as sorted ``(index(a), e_a)`` pairs with ``e_a > 0``."""

    m: int
    exps: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def exponent(self, index: int) -> int:
        return dict(self.exps).get(index, 0)

    def to_str(self, q: int) -> str:
        if self.m == 0:
            return "1"
        parts = []
        for idx, e in self.exps:
            name = "x_" + "".join(str(d) for d in decode(idx, q, self.m))
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


def decode(index: int, q: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(index % q)
        index //= q
    return out


def encode(vec, q: int) -> int:
    return sum(int(a) * q**j for j, a in enumerate(vec))


@dataclass
class SparseWE:
    m: int
    q: int
    terms: dict[Monomial, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.terms.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseWE)
            and (self.m, self.q) == (other.m, other.q)
            and self.terms == other.terms
        )

    def to_json(self) -> list[dict]:
        return [
            {"exponents": [list(p) for p in X.exps], "coefficient": c}
            for X, c in sorted(self.terms.items())
        ]

    def _dense(self, X: Monomial) -> tuple[int, ...]:
        e = dict(X.exps)
        return tuple(e.get(i, 0) for i in range(self.q**self.m))

    def to_str(self) -> str:
        """Human-readable polynomial, highest power of ``x_0...0`` first."""
        return " + ".join(
            (X.to_str(self.q) if c == 1 else f"{c}*{X.to_str(self.q)}")
            for X, c in sorted(self.terms.items(), key=lambda t: self._dense(t[0]), reverse=True)
        )


def _monomial_from_counts(m: int, counts) -> Monomial:
    return Monomial(m, tuple((int(i), int(e)) for i, e in enumerate(counts) if e))


def _monomials(m: int, counts: np.ndarray) -> list[Monomial]:
    """One monomial per row of a (rows, q^m) exponent matrix."""
    r, c = np.nonzero(counts)
    e = counts[r, c].tolist()
    bounds = np.searchsorted(r, np.arange(counts.shape[0] + 1)).tolist()
    c = c.tolist()
    return [Monomial(m, tuple(zip(c[a:b], e[a:b]))) for a, b in zip(bounds[:-1], bounds[1:])]


def _merge(parts):
    """Combine keyed multiplicity lists, summing multiplicities of equal keys."""
    if len(parts) == 1:
        return parts[0]
    keys = np.concatenate([k for k, _ in parts])
    mult = np.concatenate([c for _, c in parts])
    uniq, inv = np.unique(keys, axis=0 if keys.ndim > 1 else None, return_inverse=True)
    out = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(out, inv.ravel(), mult)
    return uniq, out


def mon(vectors, F: FieldSpec) -> Monomial:
    """Monomial of an m-tuple of vectors: exponent of ``x_a`` = number of columns equal to ``a``."""
    V = np.asarray(vectors, dtype=np.int64)
    if V.ndim != 2:
        raise ValueError("mon expects an m x N array of vectors")
    m, N = V.shape
    if m == 0:
        return Monomial(0, ((0, N),))
    idx = (V * (F.q ** np.arange(m))[:, None]).sum(axis=0)
    return _monomial_from_counts(m, np.bincount(idx, minlength=F.q**m))


def cwe(C: Code, m: int, budget: int = DEFAULT_BUDGET) -> SparseWE:
    """Sum of ``mon(c)`` over all ``c`` in ``C^m``."""
    F, N = C.field, C.N
    q = F.q
    if m == 0:
        return SparseWE(0, q, {Monomial(0, ((0, N),)): 1})
    if q ** (C.k * m) > budget:
        raise BudgetError(f"genus {m} needs {q ** (C.k * m)} tuples (budget {budget})")
    W = C.codewords().astype(np.int64)
    K = W.shape[0]
    Q = q**m
    # indices of the first m-1 rows of each tuple
    partial = np.zeros((1, N), dtype=np.int64)
    for j in range(m - 1):
        partial = (partial[:, None, :] + (q**j) * W[None, :, :]).reshape(-1, N)
    last = (q ** (m - 1)) * W
    block = max(1, _CHUNK // (K * N))
    # key choice: exponent counts in base N+1 when they fit in an int64, else the
    # sorted column indices (the multiset determines the monomial), else whole rows
    bits = max(1, (Q - 1).bit_length())
    mode = "counts" if Q * np.log2(N + 1) < 62 else "sorted" if N * bits <= 62 else "rows"
    place = (N + 1) ** np.arange(Q, dtype=np.int64) if mode == "counts" else None
    shift = bits * np.arange(N, dtype=np.int64)
    parts, pending = [], 0
    for s in range(0, partial.shape[0], block):
        idx = (partial[s : s + block, None, :] + last[None, :, :]).reshape(-1, N)
        if mode == "counts":
            k = place[idx].sum(axis=1)
        elif mode == "sorted":
            k = (np.sort(idx, axis=1) << shift).sum(axis=1)
        else:
            k = np.sort(idx, axis=1)
        uniq, cnt = np.unique(k, axis=0 if k.ndim > 1 else None, return_counts=True)
        parts.append((uniq, cnt))
        pending += len(uniq)
        if pending > _CHUNK:
            parts = [_merge(parts)]
            pending = len(parts[0][0])
    keys, mult = _merge(parts)
    if mode == "counts":
        counts = (keys[:, None] // place[None, :]) % (N + 1)
        monos = _monomials(m, counts)
    else:
        cols = (keys[:, None] >> shift[None, :]) & ((1 << bits) - 1) if mode == "sorted" else keys
        monos = []
        for s in range(0, len(cols), 1 << 16):
            part = cols[s : s + (1 << 16)]
            flat = (np.arange(len(part))[:, None] * Q + part).ravel()
            monos += _monomials(m, np.bincount(flat, minlength=len(part) * Q).reshape(-1, Q))
    terms = dict(zip(monos, mult.tolist()))
    return SparseWE(m, q, terms)


def phi(p: SparseWE) -> SparseWE:
    """Kill variables whose index vector has nonzero last coordinate; genus drops by one."""
    if p.m < 1:
        raise ValueError("Phi needs genus >= 1")
    bound = p.q ** (p.m - 1)
    out: dict[Monomial, int] = {}
    for X, c in p.terms.items():
        if all(i < bound for i, _ in X.exps):
            Y = Monomial(p.m - 1, X.exps)
            out[Y] = out.get(Y, 0) + c
    return SparseWE(p.m - 1, p.q, out)


def _columns(X: Monomial, q: int) -> np.ndarray:
    """One preimage tuple: an m x N matrix with ``e_a`` columns equal to ``a``."""
    cols = [decode(i, q, X.m) for i, e in X.exps for _ in range(e)]
    return np.array(cols, dtype=np.uint8).T.reshape(X.m, -1)


def rank(X: Monomial, F: FieldSpec) -> int:
    """Dimension of the span of the vectors ``a`` with ``e_a > 0``."""
    if X.m == 0:
        return 0
    vecs = [decode(i, F.q, X.m) for i, _ in X.exps]
    return rref(vecs, F, N=X.m).k


def in_M_star(X: Monomial, F: FieldSpec) -> bool:
    return rank(X, F) == X.m


def in_M_one(X: Monomial, F: FieldSpec) -> bool:
    """Rank m, and the all-ones vector is outside the span of a preimage tuple."""
    if rank(X, F) != X.m:
        return False
    T = _columns(X, F.q)
    N = T.shape[1]
    return rref(np.vstack([T, allones(F, N)[None, :]]), F, N=N).k == X.m + 1


def a_X(C: Code, X: Monomial, budget: int = DEFAULT_BUDGET) -> int:
    """Number of tuples ``c`` in ``C^m`` with ``mon(c) = X``."""
    if X.degree != C.N:
        return 0
    return cwe(C, X.m, budget).terms.get(X, 0)


def coefficient_matrix(wes: list[SparseWE]) -> tuple[list[Monomial], list[list[int]]]:
    monos = sorted({X for w in wes for X in w.terms})
    col = {X: j for j, X in enumerate(monos)}
    M = [[0] * len(monos) for _ in wes]
    for i, w in enumerate(wes):
        for X, c in w.terms.items():
            M[i][col[X]] = c
    return monos, M


def filtration_dims(db: ClassDatabase, m_max: int, budget: int = DEFAULT_BUDGET) -> list[int]:
    """``dim span{cwe_m(C)}`` over the classes for ``m = 0..m_max``."""
    dims = []
    for m in range(m_max + 1):
        _, M = coefficient_matrix([cwe(c.canon, m, budget) for c in db.classes])
        dims.append(exact.rank(M))
    return dims


def cusp_dims(dims: list[int]) -> list[int]:
    """Successive differences ``dims[m] - dims[m-1]`` with ``dims[-1] = 0``."""
    return [d - (dims[i - 1] if i else 0) for i, d in enumerate(dims)]


def sigma_and_bX(db: ClassDatabase, X: Monomial, budget: int = DEFAULT_BUDGET) -> list[Fraction]:
    """``b_X = sum a_X(C)/|Aut(C)| [C]``; for the zero monomial this is the mass vector."""
    return [Fraction(a_X(c.canon, X, budget), c.aut_order) for c in db.classes]

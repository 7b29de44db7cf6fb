"""Canonical forms and automorphism groups of codes under coordinate permutations.

The search works on the incidence structure between coordinates and an
invariant spanning set of codewords (the lowest weight classes that span the
code).  Coordinates are individualized one at a time, the partition is refined
by neighbour counts, and every leaf (a total order of the coordinates) gives a
candidate: the RREF of the correspondingly permuted generator matrix.  The
canonical form is the lexicographically smallest candidate; leaves with equal
candidates yield automorphisms, which prune equivalent subtrees.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from kneser_hecke.code import Code, _rref_array, rref

MAX_WORDS = 10**6

_RNG = np.random.default_rng(0x5EED)
_HASH_WIDTH = 4096
_HASH = _RNG.integers(1, 2**62, size=(64, _HASH_WIDTH), dtype=np.int64)


@dataclass(frozen=True)
class CanonicalCode:
    canon: Code
    aut_order: int
    fingerprint: str
    labeling: tuple[int, ...] = field(repr=False)
    automorphisms: tuple[tuple[int, ...], ...] = field(repr=False, default=())
    nodes: int = field(repr=False, default=0)


def fingerprint(C: Code) -> str:
    h = hashlib.sha256()
    h.update(f"{C.q}:{C.N}:{C.k}:".encode())
    h.update(C.generators.tobytes())
    return h.hexdigest()


def invariant_words(C: Code, cap: int = MAX_WORDS) -> np.ndarray:
    """Lowest-weight codewords, adding weight classes until they span ``C``."""
    words = C.codewords()[1:]
    wt = np.count_nonzero(words, axis=1)
    chosen = np.zeros(len(words), dtype=bool)
    for w in np.unique(wt):
        chosen |= wt == w
        if chosen.sum() > cap and w != wt.min():
            chosen &= wt != w
            break
        S = words[chosen]
        if len(_rref_array(S, C.field)[1]) == C.k:
            return S
    return words


_KEY_BITS = 36
_KEY_MASK = (1 << _KEY_BITS) - 1


def _compress(old: np.ndarray, key: np.ndarray) -> tuple[np.ndarray, int]:
    """Split the cells of ``old`` by ``key``; new cell ids are ordered by (old id, key)."""
    comb = (old << _KEY_BITS) | (key & _KEY_MASK)
    order = np.argsort(comb)
    s = comb[order]
    ids = np.empty(len(s), dtype=np.int64)
    ids[0] = 0
    np.cumsum(s[1:] != s[:-1], out=ids[1:])
    out = np.empty(len(s), dtype=np.int64)
    out[order] = ids
    return out, int(ids[-1]) + 1


def _binary_cert(M: np.ndarray) -> tuple[int, ...]:
    """RREF of a binary matrix as a tuple of row integers (column 0 is the top bit)."""
    basis: dict[int, int] = {}
    for r in np.packbits(M, axis=1):
        x = int.from_bytes(r.tobytes(), "big")
        for p, b in basis.items():
            if (x >> p) & 1:
                x ^= b
        if not x:
            continue
        p = x.bit_length() - 1
        for key, b in basis.items():
            if (b >> p) & 1:
                basis[key] = b ^ x
        basis[p] = x
    return tuple(basis[p] for p in sorted(basis, reverse=True))


class _Search:
    def __init__(self, C: Code):
        self.C = C
        self.F = C.field
        self.N = C.N
        self.G = C.generators
        W = invariant_words(C)
        self.symbols = [s for s in range(1, self.F.q) if (W == s).any()]
        self.B = [np.ascontiguousarray((W == s).astype(np.int64)) for s in self.symbols]
        self.BT = [np.ascontiguousarray(b.T) for b in self.B]
        self.nnz = [np.nonzero(b) for b in self.B]
        self.nwords = W.shape[0]
        width = max(self.nwords, self.N) + 2
        if width > _HASH_WIDTH:
            rng = np.random.default_rng(0x5EED + width)
            self.hash = rng.integers(1, 2**62, size=(64, width), dtype=np.int64)
        else:
            self.hash = _HASH
        self.binary = self.F.q == 2
        self.auts: list[list[int]] = []
        self._orbit_cache: dict[tuple, list[int]] = {}
        # (key, order, path); key = (traces..., certificate)
        self.first: tuple | None = None
        self.best: tuple | None = None
        self.first_path_orbits: list[int] = []
        self.nodes = 0

    # -- partition refinement ---------------------------------------------

    def refine(self, ccell, nc, wcell, nw):
        while True:
            hw = np.zeros(self.nwords, dtype=np.int64)
            for i, b in enumerate(self.B):
                hw += b @ self.hash[2 * i, ccell]
            wcell, nw2 = _compress(wcell, hw)
            hc = np.zeros(self.N, dtype=np.int64)
            for i, bt in enumerate(self.BT):
                hc += bt @ self.hash[2 * i + 1, wcell]
            ccell, nc2 = _compress(ccell, hc)
            if nc2 == nc and nw2 == nw:
                return ccell, nc, wcell, nw
            nc, nw = nc2, nw2

    def trace(self, ccell, nc, wcell, nw) -> int:
        """Label-invariant hash of the quotient incidence between word and coordinate cells."""
        h = nc * 1_000_003 + nw
        for i, (r, c) in enumerate(self.nnz):
            h += int(np.sum(self.hash[32 + 2 * i, wcell[r]] * self.hash[33 + 2 * i, ccell[c]]))
        return h & ((1 << 62) - 1)

    def individualize(self, ccell, v):
        mask = (ccell == ccell[v]).astype(np.int64)
        mask[v] = 0
        return _compress(ccell, mask)

    # -- orbits -----------------------------------------------------------

    def orbits(self, prefix: list[int]) -> list[int]:
        key = (tuple(prefix), len(self.auts))
        hit = self._orbit_cache.get(key)
        if hit is not None:
            return hit
        parent = list(range(self.N))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.auts:
            if any(g[v] != v for v in prefix):
                continue
            for i, j in enumerate(g):
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        lab = [find(i) for i in range(self.N)]
        self._orbit_cache[key] = lab
        return lab

    # -- leaves -----------------------------------------------------------

    def leaf(self, ccell, path: list[int], traces: tuple) -> int:
        order = np.argsort(ccell)
        M = self.G[:, order]
        cert = _binary_cert(M) if self.binary else _rref_array(M, self.F)[0].tobytes()
        key = traces + (cert,)
        if self.first is None:
            self.first = (key, order, list(path))
            self.best = self.first
            return len(path)
        for ref in (self.first, self.best):
            if key == ref[0]:
                gamma = np.empty(self.N, dtype=np.int64)
                gamma[order] = ref[1]
                g = gamma.tolist()
                if g != list(range(self.N)):
                    self.auts.append(g)
                return _common_prefix(path, ref[2])
        if key < self.best[0]:
            self.best = (key, order, list(path))
        return len(path)

    # -- depth-first search -----------------------------------------------

    def search(self, ccell, nc, wcell, nw, path: list[int], traces: tuple, on_first: bool) -> int:
        self.nodes += 1
        ccell, nc, wcell, nw = self.refine(ccell, nc, wcell, nw)
        traces = traces + (self.trace(ccell, nc, wcell, nw),)
        level = len(path)
        if self.first is not None and not on_first:
            depth = len(traces)
            if traces != self.first[0][:depth] and traces > self.best[0][:depth]:
                return level
        if nc == self.N:
            return self.leaf(ccell, path, traces)
        sizes = np.bincount(ccell, minlength=nc)
        nonsingle = np.flatnonzero(sizes > 1)
        target = nonsingle[np.argmin(sizes[nonsingle])]
        cell = np.flatnonzero(ccell == target).tolist()
        explored: list[int] = []
        first_child = cell[0]
        for v in cell:
            if explored:
                lab = self.orbits(path)
                if lab[v] in {lab[u] for u in explored}:
                    continue
            explored.append(v)
            child, nc1 = self.individualize(ccell, v)
            back = self.search(
                child, nc1, wcell, nw, path + [v], traces, on_first and v == first_child
            )
            if back < level:
                return back
        if on_first:
            lab = self.orbits(path)
            self.first_path_orbits.append(sum(1 for x in lab if x == lab[first_child]))
        return level


def _common_prefix(a: list[int], b: list[int]) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def canonical_form(C: Code) -> CanonicalCode:
    """Canonical representative of the permutation class of ``C`` and ``|Aut(C)|``."""
    N = C.N
    if C.k == 0 or C.k == N:
        ident = tuple(range(N))
        return CanonicalCode(C, math.factorial(N), fingerprint(C), ident)
    s = _Search(C)
    ccell0 = np.zeros(N, dtype=np.int64)
    wcell0 = np.zeros(s.nwords, dtype=np.int64)
    s.search(ccell0, 1, wcell0, 1, [], (), True)
    key, order, _ = s.best
    labeling = np.empty(N, dtype=np.int64)
    labeling[order] = np.arange(N)
    canon = rref(C.generators[:, order], C.field, N=N)
    aut = math.prod(s.first_path_orbits)
    return CanonicalCode(
        canon,
        aut,
        fingerprint(canon),
        tuple(int(x) for x in labeling),
        tuple(tuple(int(x) for x in g) for g in s.auts),
        s.nodes,
    )


def are_equivalent(C: Code, D: Code) -> bool:
    if (C.field, C.N, C.k) != (D.field, D.N, D.k):
        return False
    return canonical_form(C).canon == canonical_form(D).canon

"""Exhaustive reference computations for small lengths.

These are deliberately naive: every self-dual code is listed by a depth-first
search over reduced row echelon forms, classes are the orbits of the adjacent
transpositions, and automorphism groups are found by trying all N! permutations.
They serve as independent checks of the neighbour and canonical-form modules.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from kneser_hecke.code import Code, dual
from kneser_hecke.family import TypeSpec
from kneser_hecke.field import FieldSpec, FormKind

MAX_ORACLE_CODES = 500_000


def _self_form(F: FieldSpec, V: np.ndarray, kind: FormKind) -> np.ndarray:
    W = F.vconj(V) if kind == FormKind.HERMITIAN else V
    prod = F.mul_table[V, W]
    acc = np.zeros(V.shape[0], dtype=np.uint8)
    for j in range(V.shape[1]):
        acc = F.vadd(acc, prod[:, j])
    return acc


def self_dual_codes(t: TypeSpec, N: int) -> list[Code]:
    """Every code of the family at length N, in RREF."""
    n = t.check_length(N)
    F, kind = t.field, t.form_kind
    out: list[Code] = []

    def extend(pivots, rows):
        i = len(rows)
        if i == n:
            C = Code(F, N, np.array(rows, dtype=np.uint8), list(pivots))
            if t.is_member(C):
                out.append(C)
                if len(out) > MAX_ORACLE_CODES:
                    raise RuntimeError("oracle enumeration exceeded its size cap")
            return
        p = pivots[i]
        free = [c for c in range(p + 1, N) if c not in pivots]
        cands = np.zeros((F.q ** len(free), N), dtype=np.uint8)
        cands[:, p] = 1
        if free:
            grid = np.indices((F.q,) * len(free), dtype=np.uint8).reshape(len(free), -1).T
            cands[:, free] = grid
        ok = _self_form(F, cands, kind) == 0
        if rows:
            ok &= ~F.gram(cands, np.array(rows, dtype=np.uint8), kind).any(axis=1)
        for v in cands[ok]:
            extend(pivots, rows + [v])

    for pivots in itertools.combinations(range(N), n):
        extend(pivots, [])
    return out


@dataclass
class OracleClasses:
    codes: list[Code]
    labels: np.ndarray  # class label per code
    n_classes: int

    def orbit_sizes(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.n_classes).tolist()

    def aut_orders(self) -> list[int]:
        """Orbit-stabiliser: |Aut| = N!/|orbit|, per class."""
        N = self.codes[0].N
        return [math.factorial(N) // s for s in self.orbit_sizes()]


def classes(t: TypeSpec, N: int) -> OracleClasses:
    """Equivalence classes as connected components under adjacent transpositions."""
    codes = self_dual_codes(t, N)
    index = {C: i for i, C in enumerate(codes)}
    src, dst = [], []
    for i, C in enumerate(codes):
        for a in range(N - 1):
            perm = list(range(N))
            perm[a], perm[a + 1] = a + 1, a
            src.append(i)
            dst.append(index[C.permute(perm)])
    A = coo_matrix((np.ones(len(src)), (src, dst)), shape=(len(codes), len(codes)))
    nc, labels = connected_components(A, directed=False)
    return OracleClasses(codes, labels, nc)


def brute_force_aut_order(C: Code, chunk: int = 5040) -> int:
    """Count the permutations fixing C by testing all N! of them."""
    F, N = C.field, C.N
    H = dual(C, FormKind.EUCLIDEAN).generators
    if H.shape[0] == 0:
        return math.factorial(N)
    G = C.generators
    count = 0
    perms = itertools.permutations(range(N))
    while True:
        block = np.array(list(itertools.islice(perms, chunk)), dtype=np.intp)
        if block.size == 0:
            return count
        images = G[:, block].transpose(1, 0, 2).reshape(-1, N)
        syn = F.matmul(images, H.T).reshape(len(block), -1)
        count += int((~syn.any(axis=1)).sum())

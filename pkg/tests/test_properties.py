"""Property-based checks on random codes and tuples."""

from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from kneser_hecke.canonical import canonical_form
from kneser_hecke.code import code_sum, dual, intersect, rref
from kneser_hecke.field import FormKind, gf
from kneser_hecke.weight_enum import cwe, mon, phi

FIELDS = st.sampled_from([2, 3, 4, 5])


@st.composite
def codes(draw, max_n=7):
    q = draw(FIELDS)
    N = draw(st.integers(1, max_n))
    k = draw(st.integers(0, N))
    entries = draw(st.lists(st.integers(0, q - 1), min_size=k * N, max_size=k * N))
    return rref(np.array(entries, dtype=np.int64).reshape(k, N), gf(q), N=N)


@settings(max_examples=60, deadline=None)
@given(codes(), st.randoms(use_true_random=False))
def test_canonical_form_invariant(C, rnd):
    perm = list(range(C.N))
    rnd.shuffle(perm)
    a, b = canonical_form(C), canonical_form(C.permute(perm))
    assert a.canon == b.canon and a.aut_order == b.aut_order


@settings(max_examples=60, deadline=None)
@given(codes())
def test_dual_dimension_and_involution(C):
    D = dual(C, FormKind.EUCLIDEAN)
    assert C.k + D.k == C.N
    assert dual(D, FormKind.EUCLIDEAN) == C
    assert intersect(C, D).k + code_sum(C, D).k == C.N


@settings(max_examples=40, deadline=None)
@given(codes(max_n=5), st.integers(1, 2))
def test_cwe_total_and_phi(C, m):
    if C.field.q ** (C.k * m) > 4096:
        return
    w = cwe(C, m)
    assert w.total() == C.field.q ** (C.k * m)
    assert phi(w) == cwe(C, m - 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 8), st.randoms(use_true_random=False))
def test_mon_degree_and_permutation(m, N, rnd):
    F = gf(3)
    V = np.array([[rnd.randrange(3) for _ in range(N)] for _ in range(m)])
    perm = list(range(N))
    rnd.shuffle(perm)
    X = mon(V, F)
    assert X.degree == N and mon(V[:, perm], F) == X

from __future__ import annotations

import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from kneser_hecke import exact
from kneser_hecke.code import from_strings, rref
from kneser_hecke.field import gf
from kneser_hecke.golden import molien
from kneser_hecke.weight_enum import (
    BudgetError,
    Monomial,
    SparseWE,
    a_X,
    coefficient_matrix,
    cusp_dims,
    cwe,
    decode,
    encode,
    filtration_dims,
    in_M_one,
    in_M_star,
    mon,
    phi,
    rank,
    sigma_and_bX,
)

from conftest import classified

F2, F3, F4 = gf(2), gf(3), gf(4)


def naive_cwe(C, m):
    """Direct sum of mon over C^m, no vectorisation."""
    words = [w for w in C.codewords()]
    out: dict = {}
    for tup in itertools.product(words, repeat=m):
        X = mon(np.array(tup), C.field)
        out[X] = out.get(X, 0) + 1
    return SparseWE(m, C.field.q, out)


def test_encode_decode():
    for q, m in ((2, 3), (3, 2), (4, 2)):
        for i in range(q**m):
            assert encode(decode(i, q, m), q) == i
    assert decode(5, 2, 3) == [1, 0, 1]


def test_mon_examples():
    X = mon([[1, 0, 1, 1], [0, 0, 1, 1]], F2)
    # columns (1,0),(0,0),(1,1),(1,1): indices 1, 0, 3, 3
    assert X == Monomial(2, ((0, 1), (1, 1), (3, 2)))
    assert X.degree == 4 and X.exponent(3) == 2 and X.exponent(2) == 0
    assert mon(np.zeros((0, 5)), F2) == Monomial(0, ((0, 5),))
    with pytest.raises(ValueError):
        mon([1, 0, 1], F2)


def test_cwe_examples(hamming8):
    w = cwe(from_strings(["11"]), 1)
    assert w.to_str() == "x_0^2 + x_1^2"
    h = cwe(hamming8, 1)
    assert h.to_str() == "x_0^8 + 14*x_0^4*x_1^4 + x_1^8"
    assert cwe(hamming8, 0).to_str() == "1"
    assert cwe(hamming8, 2).total() == 2**8


@pytest.mark.parametrize(
    "F,rows,m",
    [(F2, ["1100", "0011"], 3), (F3, None, 2), (F4, None, 2), (F2, ["111100", "001111", "110011"], 2)],
)
def test_cwe_matches_naive(F, rows, m, rng):
    C = from_strings(rows) if rows else rref(rng.integers(0, F.q, size=(2, 4)), F, N=4)
    got = cwe(C, m)
    assert got == naive_cwe(C, m)
    assert got.total() == F.q ** (C.k * m)
    assert all(X.degree == C.N for X in got.terms)


@pytest.mark.parametrize(
    "q,N,k,m",
    [
        (2, 8, 3, 3),  # exponent counts fit one int64
        (5, 6, 3, 2),  # 25 variables: sorted column indices
        (4, 12, 1, 3),  # 64 variables, 12 columns of 6 bits: whole sorted rows
    ],
)
def test_cwe_key_modes_match_naive(q, N, k, m, rng):
    F = gf(q)
    C = rref(rng.integers(0, q, size=(k, N)), F, N=N)
    got = cwe(C, m)
    assert got == naive_cwe(C, m)
    assert got.total() == q ** (C.k * m)


def test_cwe_budget(hamming8):
    with pytest.raises(BudgetError):
        cwe(hamming8, 3, budget=1000)


def test_phi_examples(hamming8):
    assert phi(cwe(hamming8, 2)) == cwe(hamming8, 1)
    assert phi(cwe(hamming8, 1)) == cwe(hamming8, 0)
    with pytest.raises(ValueError):
        phi(cwe(hamming8, 0))


@pytest.mark.parametrize("type_name,N,m_max", [("2eI", 12, 3), ("qE:q=3", 8, 2), ("qH:q=4", 6, 2)])
def test_phi_compatibility_and_invariance(type_name, N, m_max, rng):
    for cls in classified(type_name, N).classes:
        C = cls.canon
        prev = cwe(C, 0)
        for m in range(1, m_max + 1):
            cur = cwe(C, m)
            assert phi(cur) == prev
            assert cwe(C.permute(rng.permutation(N)), m) == cur
            prev = cur


def test_json_is_sorted_and_serialisable(hamming8):
    data = cwe(hamming8, 2).to_json()
    assert json.loads(json.dumps(data)) == data
    assert sum(d["coefficient"] for d in data) == 256


def test_rank_and_monomial_sets():
    X = Monomial(2, ((0, 2), (1, 2)))  # columns 00, 10 only
    assert rank(X, F2) == 1 and not in_M_star(X, F2)
    Y = Monomial(2, ((1, 1), (2, 1), (3, 2)))
    assert rank(Y, F2) == 2 and in_M_star(Y, F2)
    # columns 10,01,11,11: rows are 1011 and 0111, span misses 1111
    assert in_M_one(Y, F2)
    Z = Monomial(1, ((1, 4),))  # the single row 1111 is the all-ones vector
    assert in_M_star(Z, F2) and not in_M_one(Z, F2)
    assert rank(Monomial(0, ((0, 3),)), F2) == 0


def test_a_X_examples(hamming8):
    zero = Monomial(2, ((0, 8),))
    assert a_X(hamming8, zero) == 1
    assert a_X(hamming8, Monomial(1, ((0, 4), (1, 4)))) == 14
    assert a_X(hamming8, Monomial(1, ((0, 4), (1, 3)))) == 0


def test_coefficient_matrix_and_cusp_dims(hamming8):
    wes = [cwe(hamming8, 1), cwe(from_strings(["11110000", "00001111", "11000000", "00110000"]), 1)]
    monos, M = coefficient_matrix(wes)
    assert len(M) == 2 and len(monos) == len(set(monos))
    assert cusp_dims([1, 3, 4, 6]) == [1, 2, 1, 2]


def test_filtration_dims_2EI_16():
    dims = filtration_dims(classified("2eI", 16), 3)
    assert dims == [1, 3, 4, 6]
    assert dims[1:] == [molien(16, m) for m in range(1, 4)]


def test_filtration_rank_is_basis_independent(rng):
    db = classified("2eI", 12)
    wes = [cwe(c.canon.permute(rng.permutation(12)), 2) for c in db.classes]
    _, M = coefficient_matrix(wes)
    assert exact.rank(M) == filtration_dims(db, 2)[-1]


def test_sigma_and_bX():
    db = classified("2eI", 12)
    s = sigma_and_bX(db, Monomial(1, ((0, 12),)))
    assert s == [Fraction(1, c.aut_order) for c in db.classes]
    b = sigma_and_bX(db, Monomial(1, ((0, 8), (1, 4))))
    assert [x * c.aut_order for x, c in zip(b, db.classes)] == [
        a_X(c.canon, Monomial(1, ((0, 8), (1, 4)))) for c in db.classes
    ]
    with pytest.raises(BudgetError):
        sigma_and_bX(db, Monomial(3, ((0, 12),)), budget=10)

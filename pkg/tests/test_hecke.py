from __future__ import annotations

import json
from fractions import Fraction

import pytest

from kneser_hecke import exact
from kneser_hecke.family import parse_type
from kneser_hecke.hecke import (
    HeckeError,
    HeckeMatrix,
    Spectrum,
    SpectrumError,
    check_self_adjoint,
    hecke_matrix,
    inner_product,
    polynomial_relation,
    sigma,
    spectrum,
)
from kneser_hecke.neighbor import ClassDatabase

from conftest import classified, neighbour_operator


def test_matrix_examples():
    assert neighbour_operator("2eI", 2).entries == [[0]]
    T = neighbour_operator("2eI", 16)
    assert T.size == 7 and set(T.column_sums()) == {254}
    assert neighbour_operator("2eII", 8).entries == [[7]]
    assert all(x >= 0 for row in T.entries for x in row)


def test_incomplete_database_rejected():
    db = ClassDatabase(parse_type("2eI"), 4)
    with pytest.raises(HeckeError):
        hecke_matrix(db)
    with pytest.raises(HeckeError):
        hecke_matrix(classified("2eI", 4), 0)


def test_inner_product_examples():
    aut = [6, 10, 4]
    e = lambda i: [int(i == j) for j in range(3)]  # noqa: E731
    assert inner_product(e(1), e(1), aut) == 10
    assert inner_product(e(0), e(2), aut) == 0
    s = sigma(aut)
    assert all(inner_product(s, e(i), aut) == 1 for i in range(3))
    with pytest.raises(ValueError):
        inner_product([1], [1, 2], aut)


@pytest.mark.parametrize(
    "type_name,N", [("2eI", 16), ("2eII", 16), ("qH:q=4", 8), ("qE:q=3", 12), ("qH1:q=4", 6), ("qEI:q=4", 6)]
)
def test_self_adjoint_and_column_sums(type_name, N):
    t = parse_type(type_name)
    T = neighbour_operator(type_name, N)
    ok, bad = check_self_adjoint(T)
    assert ok and bad == []
    assert set(T.column_sums()) == {t.alpha(0, N // 2)}


def test_self_adjoint_negative_control():
    T = neighbour_operator("2eI", 16)
    entries = [list(r) for r in T.entries]
    entries[3][1] += 1
    ok, bad = check_self_adjoint(HeckeMatrix(1, T.basis, T.aut_orders, entries))
    assert not ok and bad == [(1, 3)]
    assert check_self_adjoint(neighbour_operator("2eII", 8))[0]


def test_spectrum_examples():
    t = parse_type("2eI")
    s = spectrum(neighbour_operator("2eI", 16), t, 8)
    assert s.row() == [1, 2, 1, 2, 1]
    assert s.eigenvalues[:5] == [254, 125, 59, 23, -1]
    assert s.complete and s.sigma_ok and s.orthogonal and s.merged == []
    s24 = spectrum(neighbour_operator("2eII", 24), parse_type("2eII"), 12)
    assert s24.row() == [1, 1, 1, 2, 2, 1, 1]
    s2 = spectrum(neighbour_operator("2eI", 2), t, 1)
    assert s2.row() == [1] and s2.eigenvalues[0] == 0


def test_spectrum_bases_are_eigenvectors():
    T = neighbour_operator("qH:q=4", 8)
    s = spectrum(T, parse_type("qH:q=4"), 4)
    for nu, basis in zip(s.eigenvalues, s.bases):
        for v in basis:
            assert T.apply(v) == [nu * x for x in v]
    assert s.row() == s.dims_by_m()[: len(s.row())]


def test_spectrum_alarm_on_corrupted_operator():
    T = neighbour_operator("2eI", 12)
    entries = [list(r) for r in T.entries]
    entries[0][0] += 1
    entries[1][0] -= 1
    bad = HeckeMatrix(1, T.basis, T.aut_orders, entries)
    with pytest.raises(SpectrumError):
        spectrum(bad, parse_type("2eI"), 6)
    assert not spectrum(bad, parse_type("2eI"), 6, strict=False).complete


def test_spectrum_requires_k1():
    T = neighbour_operator("2eI", 8)
    with pytest.raises(HeckeError):
        spectrum(HeckeMatrix(2, T.basis, T.aut_orders, T.entries), parse_type("2eI"), 4)


def test_json_round_trips():
    T = neighbour_operator("qH:q=4", 6)
    assert HeckeMatrix.from_json(json.loads(json.dumps(T.to_json()))) == T
    s = spectrum(T, parse_type("qH:q=4"), 3)
    back = Spectrum.from_json(json.loads(json.dumps(s.to_json())))
    assert back == s


def test_polynomial_relation_identity_and_scalar():
    T = neighbour_operator("2eI", 12)
    assert polynomial_relation(T, T) == [0, 1]
    T2 = hecke_matrix(classified("2eII", 8), 2)
    rel = polynomial_relation(T2, neighbour_operator("2eII", 8))
    assert rel is not None and len(rel) == 1 and rel[0] == T2.entries[0][0]


def test_polynomial_relation_2EI_12():
    T = neighbour_operator("2eI", 12)
    T2 = hecke_matrix(classified("2eI", 12), 2)
    rel = polynomial_relation(T2, T)
    # T_2 = (T^2 - T - 62)/3, found by exact solve
    assert rel == [Fraction(-62, 3), Fraction(-1, 3), Fraction(1, 3)]
    assert check_self_adjoint(T2)[0]
    T_sq = exact.matmul(T.entries, T.entries)
    lhs = [[3 * x for x in row] for row in T2.entries]
    rhs = [[T_sq[i][j] - T.entries[i][j] - 62 * (i == j) for j in range(3)] for i in range(3)]
    assert lhs == rhs


def test_polynomial_relation_basis_mismatch():
    T = neighbour_operator("2eI", 12)
    other = HeckeMatrix(1, list(reversed(T.basis)), T.aut_orders, T.entries)
    with pytest.raises(HeckeError):
        polynomial_relation(other, T)

from __future__ import annotations

import math

import pytest

from kneser_hecke.canonical import are_equivalent, canonical_form
from kneser_hecke.code import direct_sum, from_strings, rref
from kneser_hecke.family import parse_type
from kneser_hecke.field import gf
from kneser_hecke.oracle import brute_force_aut_order, self_dual_codes

from conftest import classified


def test_examples(hamming8):
    c = canonical_form(from_strings(["11"]))
    assert c.canon == from_strings(["11"]) and c.aut_order == 2
    assert canonical_form(from_strings(["1100", "0011"])).aut_order == 8
    assert canonical_form(hamming8).aut_order == 1344


def test_equivalence_examples(hamming8):
    assert are_equivalent(from_strings(["1100", "0011"]), from_strings(["1010", "0101"]))
    i2_4 = direct_sum(*[from_strings(["11"])] * 4)
    assert not are_equivalent(i2_4, hamming8)


@pytest.mark.parametrize("type_name,N", [("2eI", 2), ("2eI", 4), ("2eI", 6), ("2eI", 8), ("2eII", 8), ("qE:q=3", 4)])
def test_aut_order_matches_exhaustive_search(type_name, N):
    for C in self_dual_codes(parse_type(type_name), N):
        assert canonical_form(C).aut_order == brute_force_aut_order(C)


def test_aut_order_non_self_dual_ternary(rng):
    F = gf(3)
    for _ in range(15):
        C = rref(rng.integers(0, 3, size=(3, 6)), F, N=6)
        assert canonical_form(C).aut_order == brute_force_aut_order(C)


def test_trivial_dimensions():
    F = gf(2)
    assert canonical_form(rref([], F, N=5)).aut_order == math.factorial(5)
    assert canonical_form(rref([[1, 0, 0], [0, 1, 0], [0, 0, 1]], F)).aut_order == 6


@pytest.mark.parametrize("type_name,N", [("2eI", 16), ("2eII", 16), ("qH:q=4", 6), ("qE:q=3", 12)])
def test_invariance_under_random_permutations(type_name, N, rng):
    trials = 100 if N <= 12 else 40
    for cls in classified(type_name, N).classes:
        ref = canonical_form(cls.canon)
        assert ref.canon == cls.canon  # idempotent on stored representatives
        for _ in range(trials):
            got = canonical_form(cls.canon.permute(rng.permutation(N)))
            assert got.canon == ref.canon
            assert got.fingerprint == ref.fingerprint
            assert got.aut_order == ref.aut_order


def test_labeling_maps_code_to_canon(rng):
    for cls in classified("2eI", 12).classes:
        C = cls.canon.permute(rng.permutation(12))
        cf = canonical_form(C)
        assert C.permute(cf.labeling) == cf.canon
        for g in cf.automorphisms:
            assert C.permute(g) == C


def test_orbit_stabiliser_on_small_family():
    t = parse_type("2eI")
    codes = self_dual_codes(t, 8)
    by_class = {}
    for C in codes:
        cf = canonical_form(C)
        by_class.setdefault(cf.fingerprint, []).append(cf.aut_order)
    for orders in by_class.values():
        assert len(set(orders)) == 1
        assert len(orders) * orders[0] == math.factorial(8)

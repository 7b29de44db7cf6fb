from __future__ import annotations

import json

import pytest

from kneser_hecke.canonical import are_equivalent, canonical_form
from kneser_hecke.code import allones, from_strings, hyperplane_of, intersect, projective_points
from kneser_hecke.family import FamilyError, parse_type
from kneser_hecke.golden import TABLE_2EI, TABLE_2EII
from kneser_hecke.neighbor import (
    ClassDatabase,
    NeighborError,
    classify,
    condition_star_sum,
    construct_seed,
    k_neighbors,
    neighbors,
    neighbors_through,
    sample_admissible_tuple,
)
from kneser_hecke.oracle import self_dual_codes

from conftest import classified


def test_neighbor_count_examples(hamming8):
    t = parse_type("2eI")
    for cls in classified("2eI", 12).classes:
        nb = neighbors(cls.canon, t)
        assert len(nb) == 2**6 - 2 == len(set(nb))
        assert all(intersect(cls.canon, D).k == 5 and t.is_member(D) for D in nb)
    assert neighbors(from_strings(["11"]), t) == []
    t2 = parse_type("2eII")
    assert all(are_equivalent(D, hamming8) for D in neighbors(hamming8, t2))
    assert len(neighbors(hamming8, t2)) == 7


def test_neighbors_rejects_non_members():
    with pytest.raises(NeighborError):
        neighbors(from_strings(["1111"]), parse_type("2eI"))


@pytest.mark.parametrize("type_name,N,per_E", [("2eI", 10, 2), ("qE:q=3", 8, 1), ("qH:q=4", 6, 2), ("qE:q=5", 6, 1)])
def test_neighbors_per_hyperplane(type_name, N, per_E):
    t = parse_type(type_name)
    for cls in classified(type_name, N).classes:
        C = cls.canon
        one = allones(C.field, N)
        for f in projective_points(C.field, C.k):
            E = hyperplane_of(C, f)
            got = len(neighbors_through(C, E, t))
            if t.requires_allones and not E.contains(one):
                assert got == 0
            else:
                assert got == per_E


@pytest.mark.parametrize(
    "type_name,N",
    [("2eI", 12), ("2eII", 16), ("qE:q=3", 8), ("qE1:q=3", 12), ("qEI:q=4", 6), ("qH:q=4", 6), ("qH1:q=4", 6)],
)
def test_total_neighbour_count_is_alpha0(type_name, N):
    t = parse_type(type_name)
    db = classified(type_name, N)
    for cls in db.classes:
        assert len(neighbors(cls.canon, t)) == t.alpha(0, N // 2)
    totals = {}
    for r in db.neighbor_records:
        totals[r.source_class] = totals.get(r.source_class, 0) + r.count
    assert set(totals.values()) == {t.alpha(0, N // 2)}


@pytest.mark.parametrize("type_name,N", [("2eI", 8), ("qH:q=4", 4), ("qEI:q=4", 6), ("qH1:q=4", 6)])
def test_k_neighbors_against_exhaustive_family(type_name, N):
    t = parse_type(type_name)
    family = self_dual_codes(t, N)
    n = N // 2
    for C in family[:: max(1, len(family) // 6)]:
        for k in range(1, n + 1):
            try:
                got = set(k_neighbors(C, t, k))
            except NeighborError:
                continue
            want = {D for D in family if intersect(C, D).k == n - k}
            assert got == want, (k, C)


def test_k_neighbors_examples():
    t = parse_type("2eI")
    C = from_strings(["1100", "0011"])
    assert k_neighbors(C, t, 2) == []
    assert set(k_neighbors(C, t, 1)) == set(neighbors(C, t))
    with pytest.raises(NeighborError):
        k_neighbors(C, t, 3)
    with pytest.raises(NeighborError):
        k_neighbors(classified("2eI", 16).classes[0].canon, t, 4, cap=1000)


def test_k_neighbors_symmetry():
    t = parse_type("2eI")
    C = classified("2eI", 10).classes[1].canon
    found = k_neighbors(C, t, 2)
    assert found
    for D in found[:: max(1, len(found) // 4)]:
        assert intersect(C, D).k == 3
        assert C in set(k_neighbors(D, t, 2))


@pytest.mark.parametrize("N", [2, 4, 6, 8, 10, 12, 14, 16])
def test_class_counts_2EI(N):
    assert len(classified("2eI", N)) == sum(TABLE_2EI[N])


@pytest.mark.parametrize("N", [8, 16])
def test_class_counts_2EII(N):
    assert len(classified("2eII", N)) == sum(TABLE_2EII[N])


def records_by_fingerprint(db):
    fp = [c.fingerprint for c in db.classes]
    return {(fp[r.source_class], fp[r.target_class]): r.count for r in db.neighbor_records}


@pytest.mark.parametrize("type_name,N", [("2eI", 12), ("2eII", 16), ("qH:q=4", 6), ("qE:q=3", 8), ("qE1:q=3", 12)])
def test_orbit_reduction_matches_plain_path(type_name, N):
    fast = classified(type_name, N)
    plain = classified(type_name, N, use_orbits=False)
    assert {c.fingerprint for c in fast.classes} == {c.fingerprint for c in plain.classes}
    assert records_by_fingerprint(fast) == records_by_fingerprint(plain)


@pytest.mark.parametrize("type_name,N", [("2eI", 16), ("2eII", 16), ("qH:q=4", 8), ("qE:q=3", 12)])
def test_database_invariants(type_name, N):
    t = parse_type(type_name)
    db = classified(type_name, N)
    assert db.complete
    assert len({c.fingerprint for c in db.classes}) == len(db)
    assert db.total_codes() == t.code_count(N)
    counts = {(r.source_class, r.target_class): r.count for r in db.neighbor_records}
    aut = db.aut_orders()
    for (c, d), x in counts.items():
        # |Aut(C)| T[D][C] = |Aut(D)| T[C][D]
        assert aut[c] * counts.get((d, c), 0) == aut[d] * x
    if t.requires_allones or t.q == 2:
        assert all(cl.canon.contains(allones(t.field, N)) for cl in db.classes)


def test_database_json_round_trip():
    db = classified("qH:q=4", 6)
    data = json.loads(json.dumps(db.to_json()))
    back = ClassDatabase.from_json(data)
    assert back.to_json() == db.to_json()
    assert [c.canon for c in back.classes] == [c.canon for c in db.classes]


def test_threads_are_deterministic():
    t = parse_type("2eI")
    one = classify(t, 12).to_json()
    two = classify(t, 12, threads=2).to_json()
    assert json.dumps(one, sort_keys=True) == json.dumps(two, sort_keys=True)


def test_seed_independence(rng):
    t = parse_type("2eI")
    ref = classified("2eI", 14)
    other = ref.classes[-1].canon.permute(rng.permutation(14))
    db = classify(t, 14, seed=other)
    assert {c.fingerprint for c in db.classes} == {c.fingerprint for c in ref.classes}


@pytest.mark.parametrize(
    "type_name,N",
    [("2eI", 2), ("2eI", 10), ("2eII", 24), ("qE:q=3", 4), ("qE:q=3", 12), ("qE:q=5", 6), ("qE1:q=3", 12),
     ("qE1:q=5", 10), ("qEI:q=4", 6), ("qH:q=4", 2), ("qH:q=9", 4), ("qH1:q=4", 6), ("qEI:q=8", 4)],
)
def test_seed_construction(type_name, N):
    t = parse_type(type_name)
    assert t.is_member(construct_seed(t, N))


@pytest.mark.parametrize("type_name,N", [("qE:q=3", 6), ("qE1:q=3", 6), ("qE:q=7", 2)])
def test_empty_families_are_reported(type_name, N):
    t = parse_type(type_name)
    assert t.code_count(N) == 0
    with pytest.raises(FamilyError):
        construct_seed(t, N)


def test_bad_seed_rejected():
    with pytest.raises(NeighborError):
        classify(parse_type("2eI"), 4, seed=from_strings(["1100", "1010"]))


@pytest.mark.parametrize("type_name,N", [("2eI", 10), ("qE:q=3", 8), ("qH:q=4", 6), ("qE1:q=3", 12), ("qH1:q=4", 6)])
def test_condition_star(type_name, N, rng):
    t = parse_type(type_name)
    db = classified(type_name, N)
    n = N // 2
    for m in (1, 2):
        for i in range(12):
            C = db.classes[i % len(db)].canon
            c = sample_admissible_tuple(C, t, m, rng)
            assert c is not None
            assert condition_star_sum(C, t, c) == t.alpha(m, n)


def test_canonical_representatives_are_fixed_points():
    for cls in classified("qH:q=4", 8).classes:
        assert canonical_form(cls.canon).canon == cls.canon

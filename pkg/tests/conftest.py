from __future__ import annotations

import functools

import pytest

from kneser_hecke.code import from_strings
from kneser_hecke.family import parse_type
from kneser_hecke.hecke import hecke_matrix
from kneser_hecke.neighbor import classify

HAMMING_8 = ("11110000", "00111100", "00001111", "01010101")


@functools.lru_cache(maxsize=None)
def classified(type_name: str, N: int, use_orbits: bool = True):
    return classify(parse_type(type_name), N, use_orbits=use_orbits)


@functools.lru_cache(maxsize=None)
def neighbour_operator(type_name: str, N: int):
    return hecke_matrix(classified(type_name, N), 1)


@pytest.fixture
def hamming8():
    return from_strings(HAMMING_8)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)


# one line per acceptance criterion, echoed after the run
ACCEPTANCE: list[str] = []


def record_acceptance(criterion: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

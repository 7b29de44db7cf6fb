"""Reference data: Y_m dimension rows and Molien coefficients for binary codes."""

from __future__ import annotations

# dim Y_m, m = 0, 1, ..., for Type 2EI (all binary self-dual codes)
TABLE_2EI: dict[int, tuple[int, ...]] = {
    2: (1,),
    4: (1,),
    6: (1,),
    8: (1, 1),
    10: (1, 1),
    12: (1, 1, 1),
    14: (1, 1, 1, 1),
    16: (1, 2, 1, 2, 1),
    18: (1, 2, 2, 2, 2),
    20: (1, 2, 3, 4, 4, 2),
    22: (1, 2, 3, 6, 7, 4, 2),
    24: (1, 3, 5, 9, 15, 13, 7, 2),
    26: (1, 3, 6, 12, 23, 29, 20, 8, 1),
    28: (1, 3, 7, 18, 40, 67, 75, 39, 10, 1),
    30: (1, 3, 8, 23, 65, 142, 228, 189, 61, 10, 1),
    32: (1, 4, 10, 33, 111, 341, 825, 1176, 651, 127, 15, 1),
}

# dim Y_m for Type 2EII (doubly-even binary self-dual codes)
TABLE_2EII: dict[int, tuple[int, ...]] = {
    8: (1,),
    16: (1, 0, 0, 1),
    24: (1, 1, 1, 2, 2, 1, 1),
    32: (1, 1, 2, 5, 10, 15, 21, 18, 8, 3, 1),
}

# a_N(m) for N = 12..32; the last row holds for every m >= 11
_MOLIEN_LENGTHS = (12, 14, 16, 18, 20, 22, 24, 26, 28, 30, 32)
_MOLIEN_ROWS = (
    (2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 5),
    (3, 3, 4, 5, 6, 6, 9, 10, 11, 12, 15),
    (3, 4, 6, 7, 10, 12, 18, 22, 29, 35, 48),
    (3, 4, 7, 9, 14, 19, 33, 45, 69, 100, 159),
    (3, 4, 7, 9, 16, 23, 46, 74, 136, 242, 500),
    (3, 4, 7, 9, 16, 25, 53, 94, 211, 470, 1325),
    (3, 4, 7, 9, 16, 25, 55, 102, 250, 659, 2501),
    (3, 4, 7, 9, 16, 25, 55, 103, 260, 720, 3152),
    (3, 4, 7, 9, 16, 25, 55, 103, 261, 730, 3279),
    (3, 4, 7, 9, 16, 25, 55, 103, 261, 731, 3294),
    (3, 4, 7, 9, 16, 25, 55, 103, 261, 731, 3295),
)
# leading terms 1 + t^2 + t^4 + t^6 + 2t^8 + 2t^10
_MOLIEN_SMALL = {2: 1, 4: 1, 6: 1, 8: 2, 10: 2}

CLASS_COUNTS_2EII = {8: 1, 16: 2, 24: 9, 32: 85}


def table(name: str) -> dict[int, tuple[int, ...]]:
    if name == "2EI":
        return TABLE_2EI
    if name == "2EII":
        return TABLE_2EII
    raise KeyError(f"no reference table for {name}")


def molien(N: int, m: int) -> int:
    """Tabulated a_N(m) for binary self-dual codes, ``m >= 1``."""
    if m < 1:
        raise ValueError("the Molien table starts at m = 1")
    if N in _MOLIEN_SMALL:
        return _MOLIEN_SMALL[N]
    col = _MOLIEN_LENGTHS.index(N)
    return _MOLIEN_ROWS[min(m, 11) - 1][col]


def molien_lengths() -> tuple[int, ...]:
    return tuple(sorted(_MOLIEN_SMALL)) + _MOLIEN_LENGTHS


def cumulative(row) -> list[int]:
    out, s = [], 0
    for d in row:
        s += d
        out.append(s)
    return out

"""Small finite fields GF(q) with table-driven arithmetic.

Elements are integer indices ``0..q-1``.  For prime ``q`` the index is the
residue; for ``q = p^e`` the index ``sum c_i p^i`` encodes the polynomial
``sum c_i x^i`` reduced modulo a fixed defining polynomial.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

import numpy as np

# monic defining polynomials, coefficients low -> high degree
DEFINING_POLYNOMIALS: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (2, 2, 1),  # x^2 + 2x + 2
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
    25: (2, 4, 1),  # x^2 + 4x + 2
    27: (1, 2, 0, 1),  # x^3 + 2x + 1
}


class FormKind(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    HERMITIAN = "hermitian"


class FieldError(ValueError):
    pass


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise FieldError(f"field size must be >= 2, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


@dataclass(frozen=True)
class FieldSpec:
    """Parameters of GF(q) plus precomputed operation tables."""

    q: int
    p: int
    e: int
    poly: tuple[int, ...]
    conj_exponent: int | None
    add_table: np.ndarray = field(repr=False, compare=False, hash=False)
    mul_table: np.ndarray = field(repr=False, compare=False, hash=False)
    neg_table: np.ndarray = field(repr=False, compare=False, hash=False)
    sub_table: np.ndarray = field(repr=False, compare=False, hash=False)
    inv_table: np.ndarray = field(repr=False, compare=False, hash=False)
    conj_table: np.ndarray | None = field(repr=False, compare=False, hash=False)

    @property
    def is_binary(self) -> bool:
        return self.q == 2

    @property
    def is_prime(self) -> bool:
        return self.e == 1

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def to_json(self) -> dict:
        return {"q": self.q, "p": self.p, "e": self.e, "polynomial": list(self.poly)}

    # -- vectorised helpers over index arrays -------------------------------

    def vadd(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self.add_table[a, b]

    def vsub(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self.sub_table[a, b]

    def vmul(self, a, b):
        if self.q == 2:
            return np.bitwise_and(a, b)
        return self.mul_table[a, b]

    def vconj(self, a):
        if self.conj_table is None:
            raise FieldError(f"GF({self.q}) has no conjugation of order 2")
        return self.conj_table[a]

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Matrix product ``A @ B`` over the field (uint8 index arrays)."""
        A = np.asarray(A, dtype=np.uint8)
        B = np.asarray(B, dtype=np.uint8)
        if self.is_prime:
            return ((A.astype(np.int64) @ B.astype(np.int64)) % self.p).astype(np.uint8)
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.uint8)
        for i in range(A.shape[1]):
            out = self.vadd(out, self.mul_table[A[:, i, None], B[None, i, :]])
        return out

    def gram(self, A: np.ndarray, B: np.ndarray, kind: FormKind) -> np.ndarray:
        """Matrix of ``form(a_i, b_j)`` for the rows of ``A`` and ``B``."""
        B = np.asarray(B, dtype=np.uint8)
        if kind == FormKind.HERMITIAN:
            B = self.vconj(B)
        return self.matmul(A, B.T)


def _poly_mulmod(a: list[int], b: list[int], poly: tuple[int, ...], p: int) -> list[int]:
    e = len(poly) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, e - 1, -1):
        c = prod[d]
        if c:
            for i in range(e + 1):
                prod[d - e + i] = (prod[d - e + i] - c * poly[i]) % p
    return prod[:e]


def _digits(x: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds: list[int], p: int) -> int:
    return sum(d * p**i for i, d in enumerate(ds))


@functools.lru_cache(maxsize=None)
def gf(q: int) -> FieldSpec:
    """Return the (cached) field specification for GF(q)."""
    p, e = _prime_power(q)
    if e == 1:
        poly: tuple[int, ...] = (0, 1)
        idx = np.arange(q)
        add = (idx[:, None] + idx[None, :]) % q
        mul = (idx[:, None] * idx[None, :]) % q
    else:
        if q not in DEFINING_POLYNOMIALS:
            raise FieldError(f"no defining polynomial recorded for GF({q})")
        poly = DEFINING_POLYNOMIALS[q]
        digits = [_digits(x, p, e) for x in range(q)]
        add = np.array(
            [[_undigits([(u + v) % p for u, v in zip(a, b)], p) for b in digits] for a in digits]
        )
        mul = np.array(
            [[_undigits(_poly_mulmod(a, b, poly, p), p) for b in digits] for a in digits]
        )
    add = add.astype(np.uint8)
    mul = mul.astype(np.uint8)
    neg = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.uint8)
    sub = add[:, neg]
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        hits = np.nonzero(mul[a] == 1)[0]
        if len(hits) != 1:
            raise FieldError(f"defining polynomial for GF({q}) is not irreducible")
        inv[a] = hits[0]
    conj_exponent = None
    conj = None
    r = int(round(q**0.5))
    if r * r == q:
        conj_exponent = r
        conj = np.zeros(q, dtype=np.uint8)
        for a in range(q):
            x = 1
            for _ in range(r):
                x = int(mul[x, a])
            conj[a] = x
    for t in (add, mul, neg, sub, inv) + ((conj,) if conj is not None else ()):
        t.setflags(write=False)
    return FieldSpec(q, p, e, poly, conj_exponent, add, mul, neg, sub, inv, conj)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise FieldError(f"{self.value} is not an element index of GF({self.spec.q})")

    def __add__(self, other: FieldElement) -> FieldElement:
        return add(self, other)

    def __mul__(self, other: FieldElement) -> FieldElement:
        return mul(self, other)

    def __int__(self) -> int:
        return self.value


def _same(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.spec != b.spec:
        raise FieldError(f"mismatched fields GF({a.spec.q}) and GF({b.spec.q})")
    return a.spec


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    F = _same(a, b)
    return FieldElement(F, int(F.add_table[a.value, b.value]))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    F = _same(a, b)
    return FieldElement(F, int(F.mul_table[a.value, b.value]))


def inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise ZeroDivisionError("inverse of zero in a finite field")
    return FieldElement(a.spec, int(a.spec.inv_table[a.value]))


def conj(a: FieldElement) -> FieldElement:
    """Galois conjugation ``x -> x^r`` of GF(r^2)."""
    return FieldElement(a.spec, int(a.spec.vconj(a.value)))


def form(x, y, kind: FormKind | str, F: FieldSpec) -> int:
    """``sum x_i * conj(y_i)``; conjugation is the identity for Euclidean forms."""
    x = np.asarray(x, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"form needs equal-length vectors, got {x.shape} and {y.shape}")
    return int(F.gram(x[None, :], y[None, :], FormKind(kind))[0, 0])

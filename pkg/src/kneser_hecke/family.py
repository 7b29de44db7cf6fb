"""The six classical Types of self-dual codes and their spectral constants."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from kneser_hecke.code import (
    Code,
    contains_allones,
    is_doubly_even,
    is_self_dual,
)
from kneser_hecke.field import FieldSpec, FormKind, gf

TYPE_NAMES = ("qE", "qE1", "qEI", "qEII", "qH", "qH1")


class MonomialSet(str, enum.Enum):
    M_STAR = "M_star"
    M_ONE = "M_one"


class FamilyError(ValueError):
    """Invalid Type parameters or an incompatible (Type, length) pair."""


@dataclass(frozen=True)
class TypeSpec:
    name: str
    q: int

    def __post_init__(self):
        if self.name not in TYPE_NAMES:
            raise FamilyError(f"unknown Type {self.name!r}; expected one of {TYPE_NAMES}")
        F = gf(self.q)
        if self.name in ("qE", "qE1") and F.p == 2:
            raise FamilyError(f"{self.name} needs odd q, got q={self.q}")
        if self.name in ("qEI", "qEII") and F.p != 2:
            raise FamilyError(f"{self.name} needs even q, got q={self.q}")
        if self.name == "qEII" and self.q != 2:
            raise FamilyError("generalized doubly-even codes are only supported for q=2")
        if self.name in ("qH", "qH1") and F.conj_exponent is None:
            raise FamilyError(f"{self.name} needs a square q, got q={self.q}")

    @property
    def field(self) -> FieldSpec:
        return gf(self.q)

    @property
    def form_kind(self) -> FormKind:
        return FormKind.HERMITIAN if self.name in ("qH", "qH1") else FormKind.EUCLIDEAN

    @property
    def requires_allones(self) -> bool:
        return self.name in ("qE1", "qH1", "qEI", "qEII")

    @property
    def requires_doubly_even(self) -> bool:
        return self.name == "qEII"

    @property
    def monomial_set(self) -> MonomialSet:
        return MonomialSet.M_STAR if self.name in ("qE", "qH") else MonomialSet.M_ONE

    @property
    def label(self) -> str:
        """Short display name such as ``2EI`` or ``3E1``."""
        return f"{self.q}{self.name[1:]}"

    def cli_name(self) -> str:
        if self.q == 2 and self.name in ("qEI", "qEII"):
            return "2e" + self.name[2:]
        return f"{self.name}:q={self.q}"

    def to_json(self) -> dict:
        return {"name": self.name, "q": self.q}

    @classmethod
    def from_json(cls, data: dict) -> TypeSpec:
        return cls(data["name"], int(data["q"]))

    # -- families -----------------------------------------------------------

    def check_length(self, N: int) -> int:
        """Validate the length and return ``n = N/2``."""
        if N <= 0 or N % 2:
            raise FamilyError(f"self-dual codes need a positive even length, got N={N}")
        if self.name == "qEII" and N % 8:
            raise FamilyError(f"doubly-even self-dual binary codes need N = 0 mod 8, got N={N}")
        if self.requires_allones and N % self.field.p:
            raise FamilyError(
                f"{self.label}: the all-ones vector is isotropic only for N = 0 mod {self.field.p}"
            )
        return N // 2

    def is_member(self, C: Code) -> bool:
        if C.q != self.q:
            raise FamilyError(f"code over GF({C.q}) tested against a Type over GF({self.q})")
        if not is_self_dual(C, self.form_kind):
            return False
        if self.requires_allones and not contains_allones(C):
            return False
        if self.requires_doubly_even and not is_doubly_even(C):
            return False
        return True

    def code_count(self, N: int) -> int:
        """Number of codes of the Type at length N (0 when the family is empty).

        Closed forms for the number of maximal isotropic subspaces; they are
        checked against exhaustive enumeration in the test suite.
        """
        n = self.check_length(N)
        q = self.q
        if self.name == "qEI":
            return _prod(1, n - 1, lambda i: q**i + 1)
        if self.name == "qEII":
            return _prod(0, n - 2, lambda i: 2**i + 1)
        if self.name in ("qH", "qH1"):
            r = self.sqrt_q()
            top = n - 1 if self.name == "qH" else n - 2
            return _prod(0, top, lambda i: r ** (2 * i + 1) + 1)
        # odd q: the Euclidean space is hyperbolic iff (-1)^n is a square
        if q % 4 == 3 and n % 2:
            return 0
        top = n - 1 if self.name == "qE" else n - 2
        return 2 * _prod(1, top, lambda i: q**i + 1)

    # -- spectral constants -------------------------------------------------

    def sqrt_q(self) -> int:
        return self.field.conj_exponent

    def alpha(self, m: int, n: int) -> Fraction:
        """Condition-star constant: sum of neighbour counts over the admissible hyperplanes."""
        if not 0 <= m <= n:
            raise FamilyError(f"genus m={m} outside 0..{n}")
        q = Fraction(self.q)
        if self.name == "qEI":
            top = q ** (n - m) - q
        elif self.name in ("qEII", "qE1"):
            top = q ** (n - m - 1) - 1
        elif self.name == "qE":
            top = q ** (n - m) - 1
        elif self.name == "qH":
            top = self.sqrt_q() * (q ** (n - m) - 1)
        else:  # qH1
            top = self.sqrt_q() * (q ** (n - m - 1) - 1)
        return top / (q - 1)

    def nu(self, m: int, n: int) -> Fraction:
        """Eigenvalue of the neighbour operator on the genus-m cusp space."""
        return self.alpha(m, n) - beta(m, self.q)

    def spectral_data(self, n: int) -> SpectralData:
        ms = range(n + 1)
        return SpectralData(
            n,
            tuple(Fraction(beta(m, self.q)) for m in ms),
            tuple(self.alpha(m, n) for m in ms),
            tuple(self.nu(m, n) for m in ms),
        )


def _prod(lo: int, hi: int, f) -> int:
    return math.prod(f(i) for i in range(lo, hi + 1))


def beta(m: int, q: int) -> int:
    """Number of hyperplanes of GF(q)^m."""
    if m < 0:
        raise FamilyError(f"beta needs m >= 0, got {m}")
    return (q**m - 1) // (q - 1)


@dataclass(frozen=True)
class SpectralData:
    n: int
    betas: tuple[Fraction, ...]
    alphas: tuple[Fraction, ...]
    nus: tuple[Fraction, ...]

    def collisions(self) -> list[tuple[int, int]]:
        """Pairs ``(m, m')`` with equal eigenvalues."""
        return [
            (a, b)
            for a in range(len(self.nus))
            for b in range(a + 1, len(self.nus))
            if self.nus[a] == self.nus[b]
        ]

    def strictly_decreasing(self) -> bool:
        return all(x > y for x, y in zip(self.nus, self.nus[1:]))


_ALIASES = {
    "2ei": ("qEI", 2),
    "2eii": ("qEII", 2),
}


def parse_type(text: str) -> TypeSpec:
    """Parse CLI names: ``2eI``, ``2eII``, ``qE:q=3``, ``qE1:q=3``, ``qH:q=4``, ``qH1:q=4``.

    Compact labels such as ``3E``, ``4H1`` or ``4EI`` are accepted too.
    """
    t = text.strip()
    if t.lower() in _ALIASES:
        return TypeSpec(*_ALIASES[t.lower()])
    m = re.fullmatch(r"(qE|qE1|qEI|qEII|qH|qH1)\s*:\s*q\s*=\s*(\d+)", t)
    if m:
        return TypeSpec(m.group(1), int(m.group(2)))
    m = re.fullmatch(r"(\d+)(E|E1|EI|EII|H|H1)", t, flags=re.IGNORECASE)
    if m:
        suffix = m.group(2).upper()
        return TypeSpec("q" + suffix, int(m.group(1)))
    raise FamilyError(f"cannot parse Type {text!r}; try 2eI, 2eII, qE:q=3, qE1:q=3, qH:q=4, qH1:q=4")

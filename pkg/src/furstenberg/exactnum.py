"""Exact arithmetic: reduced roots of unity, rational weights and ℤ[1/6].

All values are immutable; Python integers are unbounded so nothing here can
overflow or wrap.
"""
from __future__ import annotations

import re
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InvalidDenominatorError

__all__ = [
    "CyclotomicPoint",
    "SixAdic",
    "cyclotomic_normalize",
    "cyclotomic_power",
    "rational_weight",
    "sixadic_add",
    "sixadic_normalize",
    "sixadic_scale23",
]


class CyclotomicPoint(namedtuple("CyclotomicPoint", ["m", "r"])):
    """The root of unity exp(2πi m/r) in lowest terms.

    Construction validates the normal form ``0 <= m < r``, ``gcd(m, r) == 1``
    and ``(0, 1)`` for the point 1.  Use :func:`cyclotomic_normalize` to
    reduce an arbitrary pair.
    """

    __slots__ = ()

    def __new__(cls, m: int, r: int):
        m, r = int(m), int(r)
        if r < 1:
            raise InvalidDenominatorError(f"denominator must be positive, got {r}")
        if not 0 <= m < r or gcd(m, r) != 1:
            raise ValueError(f"({m}, {r}) is not a reduced angle fraction")
        return super().__new__(cls, m, r)

    @classmethod
    def _trusted(cls, m: int, r: int) -> "CyclotomicPoint":
        return tuple.__new__(cls, (m, r))

    @property
    def angle(self) -> Fraction:
        """Angle as a fraction of a full turn."""
        return Fraction(self.m, self.r)

    def __complex__(self) -> complex:
        import cmath

        x = self.m / self.r
        if x > 0.5:
            x -= 1.0
        return cmath.exp(2j * cmath.pi * x)

    def __pow__(self, n: int) -> "CyclotomicPoint":
        return cyclotomic_power(self, n)

    def __str__(self) -> str:
        return f"{self.m}/{self.r}"

    @classmethod
    def parse(cls, text: str) -> "CyclotomicPoint":
        """Parse ``"m/r"``; the pair must already be in normal form."""
        match = re.fullmatch(r"\s*(\d+)\s*/\s*(\d+)\s*", text)
        if match is None:
            raise ValueError(f"cannot parse cyclotomic point {text!r}")
        return cls(int(match.group(1)), int(match.group(2)))


ONE = CyclotomicPoint(0, 1)


def cyclotomic_normalize(m: int, r: int) -> CyclotomicPoint:
    """Reduced representative of exp(2πi m/r)."""
    if r == 0:
        raise InvalidDenominatorError("denominator must be nonzero")
    if r < 0:
        m, r = -m, -r
    m %= r
    g = gcd(m, r)
    return CyclotomicPoint._trusted(m // g, r // g)


def cyclotomic_power(x: CyclotomicPoint, n: int) -> CyclotomicPoint:
    return cyclotomic_normalize(n * x.m, x.r)


def rational_weight(value) -> Fraction:
    """Coerce ``value`` (int, Fraction, ``"num/den"``) to a weight in [0, 1]."""
    w = Fraction(value)
    if not 0 <= w <= 1:
        raise ValueError(f"weight {w} outside [0, 1]")
    return w


def _split23(n: int) -> tuple[int, int, int]:
    """Write nonzero n as u * 2^a * 3^b with u coprime to 6."""
    a = b = 0
    while n % 2 == 0:
        n //= 2
        a += 1
    while n % 3 == 0:
        n //= 3
        b += 1
    return n, a, b


@dataclass(frozen=True, slots=True)
class SixAdic:
    """The number ``num / (2**e2 * 3**e3)`` of ℤ[1/6] in reduced form."""

    num: int
    e2: int = 0
    e3: int = 0

    def __post_init__(self):
        if self.e2 < 0 or self.e3 < 0:
            raise ValueError("exponents must be non-negative")
        if self.num == 0 and (self.e2 or self.e3):
            raise ValueError("zero must be represented as (0, 0, 0)")
        if self.e2 and self.num % 2 == 0:
            raise ValueError(f"{self!r} is not reduced (even numerator)")
        if self.e3 and self.num % 3 == 0:
            raise ValueError(f"{self!r} is not reduced (numerator divisible by 3)")

    @classmethod
    def from_fraction(cls, value) -> "SixAdic":
        q = Fraction(value)
        u, a, b = _split23(q.denominator)
        if u != 1:
            raise ValueError(f"{q} does not lie in Z[1/6]")
        return sixadic_normalize(q.numerator, a, b)

    @classmethod
    def parse(cls, text: str) -> "SixAdic":
        """Inverse of ``str``: ``"num/2^e2·3^e3"``; plain integers and fractions also accepted."""
        text = text.strip()
        match = re.fullmatch(r"(-?\d+)\s*/\s*2\^(\d+)\s*[·*]\s*3\^(\d+)", text)
        if match:
            return cls(int(match.group(1)), int(match.group(2)), int(match.group(3)))
        try:
            return cls.from_fraction(Fraction(text))
        except ValueError as exc:
            raise ValueError(f"cannot parse six-adic number {text!r}") from exc

    @property
    def denominator(self) -> int:
        return 2**self.e2 * 3**self.e3

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.denominator)

    def integer_lift(self) -> tuple[int, int]:
        """Return ``(m, n)`` with ``6**n * self == m`` and n minimal."""
        n = max(self.e2, self.e3)
        return self.num * 2 ** (n - self.e2) * 3 ** (n - self.e3), n

    def __add__(self, other: "SixAdic") -> "SixAdic":
        if not isinstance(other, SixAdic):
            return NotImplemented
        return sixadic_add(self, other)

    def __neg__(self) -> "SixAdic":
        return SixAdic(-self.num, self.e2, self.e3)

    def __sub__(self, other: "SixAdic") -> "SixAdic":
        if not isinstance(other, SixAdic):
            return NotImplemented
        return sixadic_add(self, -other)

    def __bool__(self) -> bool:
        return self.num != 0

    def __str__(self) -> str:
        return f"{self.num}/2^{self.e2}·3^{self.e3}"


ZERO = SixAdic(0)


def sixadic_normalize(num: int, e2: int, e3: int) -> SixAdic:
    """Reduce ``num / (2^e2 3^e3)``; the exponents may be negative."""
    if num == 0:
        return ZERO
    if e2 < 0:
        num, e2 = num * 2**-e2, 0
    if e3 < 0:
        num, e3 = num * 3**-e3, 0
    while e2 and num % 2 == 0:
        num //= 2
        e2 -= 1
    while e3 and num % 3 == 0:
        num //= 3
        e3 -= 1
    return SixAdic(num, e2, e3)


def sixadic_add(a: SixAdic, b: SixAdic) -> SixAdic:
    e2 = max(a.e2, b.e2)
    e3 = max(a.e3, b.e3)
    num = a.num * 2 ** (e2 - a.e2) * 3 ** (e3 - a.e3) + b.num * 2 ** (e2 - b.e2) * 3 ** (e3 - b.e3)
    return sixadic_normalize(num, e2, e3)


def sixadic_scale23(a: SixAdic, j: int, k: int) -> SixAdic:
    """Multiply by ``2**j * 3**k`` (j, k may be negative)."""
    return sixadic_normalize(a.num, a.e2 - j, a.e3 - k)

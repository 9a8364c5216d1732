"""Arithmetic in ℤ² ⋉ ℤ[1/6] and characters on it.

The generators of ℤ² act on ℤ[1/6] by multiplication by 2 and 3, so
(j,k;p)(l,m;q) = (j+l, k+m; p + 2^j 3^k q).  Characters are evaluation
rules; only finite probe sets are ever materialized.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.linalg import eigvalsh

from .dynamics import Measure, exponent, is_invariant
from .errors import InvalidInputError, NotAlmostInvariantError, NotInvariantError, UnsupportedVariantError
from .exactnum import ZERO, SixAdic, sixadic_add, sixadic_scale23
from .harmonic import fourier_coefficient

__all__ = [
    "Character",
    "ConstantCharacter",
    "GroupElement",
    "IDENTITY",
    "InducedCharacter",
    "Lattice",
    "MeasureCharacter",
    "PROBE_FIBER",
    "RegularCharacter",
    "TrivialExtension",
    "chi_of_measure_eval",
    "cndm_bounds",
    "conjugation_invariance_check",
    "conjugation_violations",
    "delta_eval",
    "gmul",
    "ginv",
    "gram_matrix",
    "gram_min_eigenvalue",
    "induce_character_eval",
    "recoverability_check",
    "trivial_extension_eval",
]


@dataclass(frozen=True, slots=True)
class GroupElement:
    """The element (j, k; p) with p in ℤ[1/6]."""

    j: int
    k: int
    p: SixAdic = ZERO

    def __post_init__(self):
        if not isinstance(self.p, SixAdic):
            object.__setattr__(self, "p", SixAdic.from_fraction(self.p))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        return gmul(self, other)

    def inverse(self) -> "GroupElement":
        return ginv(self)

    @property
    def in_fiber(self) -> bool:
        return self.j == 0 and self.k == 0

    def __str__(self) -> str:
        return f"({self.j},{self.k}; {self.p})"

    @classmethod
    def parse(cls, text: str) -> "GroupElement":
        match = re.fullmatch(r"\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*;\s*(.+?)\s*\)\s*", text)
        if match is None:
            raise ValueError(f"cannot parse group element {text!r}")
        return cls(int(match.group(1)), int(match.group(2)), SixAdic.parse(match.group(3)))


IDENTITY = GroupElement(0, 0, ZERO)


def gmul(a: GroupElement, b: GroupElement) -> GroupElement:
    return GroupElement(a.j + b.j, a.k + b.k, sixadic_add(a.p, sixadic_scale23(b.p, a.j, a.k)))


def ginv(a: GroupElement) -> GroupElement:
    return GroupElement(-a.j, -a.k, -sixadic_scale23(a.p, -a.j, -a.k))


def _conjugate(t: GroupElement, g: GroupElement) -> GroupElement:
    """t g t⁻¹."""
    return gmul(gmul(t, g), ginv(t))


class Character:
    """Base class for evaluation rules on the group; call with a GroupElement."""

    def __call__(self, g: GroupElement) -> complex:
        raise NotImplementedError


class RegularCharacter(Character):
    """Indicator of the identity."""

    def __call__(self, g: GroupElement) -> complex:
        return complex(delta_eval(g))

    def __repr__(self) -> str:
        return "RegularCharacter()"


class ConstantCharacter(Character):
    """The trivial rule g ↦ 1 (a character of every subgroup)."""

    def __call__(self, g: GroupElement) -> complex:
        return 1 + 0j

    def __repr__(self) -> str:
        return "ConstantCharacter()"


class MeasureCharacter(Character):
    """Fourier transform of a circle measure, pulled back to the fiber and zero off it.

    ``check=False`` skips the invariance test, which makes it possible to
    build the (non-character) functional of an arbitrary measure for audits.
    """

    def __init__(self, mu: Measure, check: bool = True):
        if check and not is_invariant(mu):
            raise NotInvariantError("measure is not ×(2,3)-invariant")
        self.measure = mu
        self._values: dict[int, complex] = {}

    def __call__(self, g: GroupElement) -> complex:
        if not g.in_fiber:
            return 0j
        m, _ = g.p.integer_lift()
        if self.measure.is_lebesgue:
            return 1 + 0j if m == 0 else 0j
        if m not in self._values:
            self._values[m] = fourier_coefficient(self.measure, m)
        return self._values[m]

    def __repr__(self) -> str:
        return f"MeasureCharacter({self.measure!r})"


def chi_of_measure_eval(mu: Measure, g: GroupElement) -> complex:
    return MeasureCharacter(mu)(g)


def delta_eval(g: GroupElement) -> int:
    return int(g == IDENTITY)


def gram_matrix(chi: Character, F: Sequence[GroupElement]) -> np.ndarray:
    """G[a, b] = χ(F[b]⁻¹ F[a])."""
    F = list(F)
    if not F:
        raise InvalidInputError("element set must be nonempty")
    if len(set(F)) != len(F):
        raise InvalidInputError("element set contains duplicates")
    inv = [ginv(h) for h in F]
    G = np.empty((len(F), len(F)), dtype=complex)
    for a, g in enumerate(F):
        for b, h in enumerate(inv):
            G[a, b] = chi(gmul(h, g))
    return G


def gram_min_eigenvalue(chi: Character, F: Sequence[GroupElement]) -> float:
    """Smallest eigenvalue of the (Hermitian part of the) Gram matrix on F."""
    G = gram_matrix(chi, F)
    return float(eigvalsh((G + G.conj().T) / 2)[0])


def conjugation_violations(chi: Character, pairs: Iterable[tuple[GroupElement, GroupElement]], tol: float) -> int:
    """Number of pairs (g, h) with |χ(h⁻¹ g h) - χ(g)| > tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return sum(abs(chi(_conjugate(ginv(h), g)) - chi(g)) > tol for g, h in pairs)


def conjugation_invariance_check(chi: Character, pairs: Iterable[tuple[GroupElement, GroupElement]], tol: float) -> bool:
    return conjugation_violations(chi, pairs, tol) == 0


@dataclass(frozen=True)
class Lattice:
    """Finite-index subgroup of ℤ² with Hermite normal form rows (a, b), (0, d).

    a > 0, d > 0 and 0 <= b < d; the subgroup is spanned by the rows.
    """

    a: int
    b: int
    d: int

    def __post_init__(self):
        if self.a <= 0 or self.d <= 0 or not 0 <= self.b < self.d:
            raise ValueError(f"({self.a}, {self.b}; 0, {self.d}) is not in Hermite normal form")

    @classmethod
    def full(cls) -> "Lattice":
        return cls(1, 0, 1)

    @classmethod
    def from_generators(cls, vectors: Iterable[tuple[int, int]]) -> "Lattice":
        """Hermite normal form of the subgroup spanned by integer vectors."""
        rows = [(int(x), int(y)) for x, y in vectors]
        # gcd of first coordinates, carrying the second along (extended Euclid)
        a, b = 0, 0
        rest = []
        for x, y in rows:
            while x:
                q = a // x
                a, b, x, y = x, y, a - q * x, b - q * y
            rest.append(y)
        if a < 0:
            a, b = -a, -b
        # rest holds second coordinates of vectors with first coordinate 0
        d = 0
        for y in rest:
            d = gcd(d, y)
        if a == 0 or d == 0:
            raise ValueError("generators do not span a finite-index subgroup")
        return cls(a, b % d, d)

    @property
    def basis(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.b), (0, self.d)

    @property
    def index(self) -> int:
        return self.a * self.d

    def __contains__(self, v) -> bool:
        j, k = (v.j, v.k) if isinstance(v, GroupElement) else v
        if j % self.a:
            return False
        return (k - (j // self.a) * self.b) % self.d == 0

    def transversal(self, shifted: bool = False) -> list[tuple[int, int]]:
        """Coset representatives of ℤ²/lattice.

        Canonical choice reduces coordinates modulo the diagonal; the shifted
        choice adds the lattice vector (a, b + d) to each representative.
        """
        ds, dt = (self.a, self.b + self.d) if shifted else (0, 0)
        return [(s + ds, t + dt) for s in range(self.a) for t in range(self.d)]


class TrivialExtension(Character):
    """inner on lattice ⋉ ℤ[1/6], zero elsewhere."""

    def __init__(self, lattice: Lattice, inner: Character):
        self.lattice = lattice
        self.inner = inner

    def __call__(self, g: GroupElement) -> complex:
        return complex(self.inner(g)) if g in self.lattice else 0j


def trivial_extension_eval(lattice: Lattice, inner: Character, g: GroupElement) -> complex:
    return TrivialExtension(lattice, inner)(g)


class InducedCharacter(Character):
    """Average of the trivial extension over conjugates t g t⁻¹, t in a transversal.

    With ``verify=True`` every evaluation is repeated on a second transversal
    and :class:`NotAlmostInvariantError` is raised if the two disagree.
    """

    def __init__(self, lattice: Lattice, inner: Character, verify: bool = False, tol: float = 1e-12):
        self.lattice = lattice
        self.extension = TrivialExtension(lattice, inner)
        self.verify = verify
        self.tol = tol

    def _average(self, g: GroupElement, shifted: bool) -> complex:
        reps = self.lattice.transversal(shifted)
        total = sum(self.extension(_conjugate(GroupElement(s, t), g)) for s, t in reps)
        return complex(total) / len(reps)

    def __call__(self, g: GroupElement) -> complex:
        value = self._average(g, False)
        if self.verify:
            other = self._average(g, True)
            if abs(value - other) > self.tol:
                raise NotAlmostInvariantError(f"induced value at {g} depends on the transversal: {value} vs {other}")
        return value


def induce_character_eval(lattice: Lattice, inner: Character, g: GroupElement, verify: bool = False) -> complex:
    return InducedCharacter(lattice, inner, verify=verify)(g)


def cndm_bounds(mu: Measure) -> tuple[int, int]:
    """Interval (|supp|, min(6^|supp|, e)) containing the conditional dimension.

    e is the exponent of the support (lcm of denominators): the Fourier
    coefficients at multiples of e all equal 1, which caps the dimension at
    e.  For an ergodic measure e is the largest denominator.
    """
    if mu.is_lebesgue:
        raise UnsupportedVariantError("Lebesgue measure has infinite conditional dimension")
    if not is_invariant(mu):
        raise NotInvariantError("measure is not ×(2,3)-invariant")
    n = mu.support_size
    e = exponent(mu)
    # 6**n only wins for tiny supports; avoid building it otherwise
    upper = 6**n if n < 64 and 6**n < e else e
    return n, upper


PROBE_FIBER = tuple(
    SixAdic.from_fraction(Fraction(s) * q)
    for q in (Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 6), Fraction(2), Fraction(3))
    for s in (1, -1)
) + (ZERO,)


def recoverability_check(chi: Character, window: int = 3, tol: float = 1e-12, probes: Optional[Sequence[SixAdic]] = None) -> bool:
    """True iff χ vanishes (within tol) at every probe (j, k; q) with (j, k) != (0, 0)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    probes = PROBE_FIBER if probes is None else probes
    for j in range(-window, window + 1):
        for k in range(-window, window + 1):
            if j == 0 and k == 0:
                continue
            if any(abs(chi(GroupElement(j, k, q))) > tol for q in probes):
                return False
    return True

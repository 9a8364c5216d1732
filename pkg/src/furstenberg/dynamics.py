"""Finitely supported ×(2,3)-invariant measures on the circle.

Atomic measures keep their atoms in integer numpy arrays (angle numerator,
denominator, weight numerator over one common weight denominator).  Values
that do not fit comfortably in int64 switch the arrays to ``dtype=object``
so the arithmetic stays exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Iterable, Sequence

import numpy as np

from .errors import NotErgodicError, NotInvariantError, UnsupportedVariantError
from .exactnum import CyclotomicPoint, cyclotomic_normalize, rational_weight

__all__ = [
    "MULTIPLIERS",
    "Measure",
    "Orbit",
    "check_maxr_bounds",
    "convex_combination",
    "ergodic_decompose",
    "exponent",
    "is_ergodic",
    "is_invariant",
    "is_times_n_invariant",
    "maxr",
    "orbit",
    "periodic_orbits",
    "pushforward_power",
    "uniform_orbit_measure",
]

MULTIPLIERS: tuple[int, int] = (2, 3)

# int64 fast paths are used only while products stay below this bound.
_SAFE = 2**62
# Orbit closure uses a dense visited mask up to this modulus.
_DENSE_LIMIT = 2**22


def _int_array(values) -> np.ndarray:
    values = list(values) if not isinstance(values, np.ndarray) else values
    if isinstance(values, np.ndarray) and values.dtype == np.int64:
        return values
    if len(values) == 0:
        return np.zeros(0, dtype=np.int64)
    lo, hi = min(int(v) for v in values), max(int(v) for v in values)
    if -_SAFE < lo and hi < _SAFE:
        return np.asarray([int(v) for v in values], dtype=np.int64)
    out = np.empty(len(values), dtype=object)
    out[:] = [int(v) for v in values]
    return out


def _to_object(a: np.ndarray) -> np.ndarray:
    out = np.empty(len(a), dtype=object)
    out[:] = [int(v) for v in a]
    return out


def _mulmod(m: np.ndarray, n: int, r: np.ndarray) -> np.ndarray:
    """``(n * m) % r`` elementwise, escalating to Python ints if needed."""
    if m.dtype == np.int64 and r.dtype == np.int64 and len(r):
        if abs(n) * int(r.max()) < _SAFE:
            return (m * n) % r
    if m.dtype != object:
        m, r = _to_object(m), _to_object(r)
    return (m * n) % r


def _reduce(m: np.ndarray, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g = np.gcd(m, r)
    return m // g, r // g


@dataclass(frozen=True, eq=False)
class Orbit:
    """Forward orbit of a root of unity under the multiplier semigroup.

    ``points`` are sorted by angle.  Every orbit point has a denominator
    dividing ``base.r``.
    """

    base: CyclotomicPoint
    numerators: np.ndarray
    denominators: np.ndarray

    @property
    def points(self) -> tuple[CyclotomicPoint, ...]:
        mk = CyclotomicPoint._trusted
        return tuple(mk(int(m), int(r)) for m, r in zip(self.numerators, self.denominators))

    def __len__(self) -> int:
        return len(self.numerators)

    def __contains__(self, point) -> bool:
        m, r = point
        hit = (self.numerators == m) & (self.denominators == r)
        return bool(hit.any())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Orbit):
            return NotImplemented
        return self.points == other.points


def _closure_residues(seed: int, r: int, multipliers: Sequence[int]) -> np.ndarray:
    """Residues mod r reachable from ``seed`` by repeated multiplication.

    The dense path closes under one multiplier a at a time by doubling:
    U <- U ∪ a^(2^i) U, which is closed under a as soon as a step adds
    nothing.  Closing under each multiplier once suffices since they commute.
    """
    if r <= _DENSE_LIMIT:
        seen = np.zeros(r, dtype=bool)
        seen[seed % r] = True
        found = np.array([seed % r], dtype=np.int64)
        for a in multipliers:
            step = a % r
            while True:
                image = np.unique((found * step) % r)
                fresh = image[~seen[image]]
                if not len(fresh):
                    break
                seen[fresh] = True
                found = np.concatenate((found, fresh))
                step = (step * step) % r
        return found
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for x in frontier:
            for a in multipliers:
                y = (a * x) % r
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return _int_array(sorted(seen))


def _angle_keys(m: np.ndarray, r: np.ndarray, common: int) -> np.ndarray:
    """Integers ordered like the angles m/r; every r must divide ``common``."""
    if m.dtype == np.int64 and r.dtype == np.int64 and common < _SAFE:
        return m * (common // r)
    return _to_object(m) * (common // _to_object(r))


def _angle_order(m: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Permutation sorting the points m/r by angle, exactly."""
    if len(m) == 0:
        return np.zeros(0, dtype=np.int64)
    common = lcm(*(int(d) for d in np.unique(r)))
    return np.argsort(_angle_keys(m, r, common), kind="stable")


def orbit(seed: CyclotomicPoint, multipliers: Sequence[int] = MULTIPLIERS) -> Orbit:
    """Closure of ``{seed}`` under x ↦ x^a for each multiplier a."""
    m, r = seed
    residues = _closure_residues(m, r, multipliers)
    if r < _SAFE:
        dens = np.full(len(residues), r, dtype=np.int64)
    else:
        dens = _to_object(np.full(len(residues), r, dtype=object))
    nums, dens = _reduce(_int_array(residues), dens)
    order = _angle_order(nums, dens)
    return Orbit(CyclotomicPoint(m, r), nums[order], dens[order])


def periodic_orbits(r: int, multipliers: Sequence[int] = MULTIPLIERS) -> list[Orbit]:
    """All orbits of primitive r-th roots of unity, for r coprime to the multipliers.

    These are exactly the supports of the ergodic measures whose atoms have
    denominator r.  Orbits are listed by their smallest angle.
    """
    if any(gcd(r, a) != 1 for a in multipliers):
        raise ValueError(f"{r} is not coprime to the multipliers {tuple(multipliers)}")
    if r == 1:
        return [orbit(CyclotomicPoint(0, 1), multipliers)]
    unseen = np.zeros(r, dtype=bool)
    units = np.flatnonzero(np.gcd(np.arange(r), r) == 1)
    unseen[units] = True
    out = []
    for m in units:
        if unseen[m]:
            o = orbit(CyclotomicPoint._trusted(int(m), r), multipliers)
            unseen[o.numerators] = False
            out.append(o)
    return out


class Measure:
    """A Borel probability measure on the circle: Lebesgue or finitely atomic.

    Atomic measures have exact rational weights.  Build them with
    :meth:`Measure.atomic`, :func:`uniform_orbit_measure` or
    :func:`convex_combination`.
    """

    __slots__ = ("_lebesgue", "_m", "_r", "_w", "_wden", "_cache")

    def __init__(self, *, _lebesgue: bool = False, _m=None, _r=None, _w=None, _wden: int = 1):
        self._lebesgue = _lebesgue
        self._m = _m
        self._r = _r
        self._w = _w
        self._wden = _wden
        self._cache: dict = {}

    # construction -------------------------------------------------------

    @classmethod
    def lebesgue(cls) -> "Measure":
        return cls(_lebesgue=True)

    @classmethod
    def delta(cls, point: CyclotomicPoint) -> "Measure":
        return cls.atomic([(point, 1)])

    @classmethod
    def atomic(cls, atoms: Iterable[tuple]) -> "Measure":
        """Atomic measure from ``(point, weight)`` pairs.

        Points may be :class:`CyclotomicPoint` or raw ``(m, r)`` pairs (they
        are normalized).  Weights must be positive, exact, sum to 1, and
        points must be pairwise distinct.
        """
        pts, ws = [], []
        for point, weight in atoms:
            m, r = point
            pts.append(cyclotomic_normalize(m, r))
            w = rational_weight(weight)
            if w <= 0:
                raise ValueError("atom weights must be strictly positive")
            ws.append(w)
        if not pts:
            raise ValueError("an atomic measure needs at least one atom")
        if len(set(pts)) != len(pts):
            raise ValueError("atom points must be pairwise distinct")
        if sum(ws) != 1:
            raise ValueError(f"weights sum to {sum(ws)}, not 1")
        wden = lcm(*(w.denominator for w in ws))
        return cls._build(
            _int_array([p.m for p in pts]),
            _int_array([p.r for p in pts]),
            _int_array([w.numerator * (wden // w.denominator) for w in ws]),
            wden,
        )

    @classmethod
    def _build(cls, m, r, w, wden: int) -> "Measure":
        """Canonicalize arrays: angle order, reduced common weight denominator."""
        order = _angle_order(m, r)
        m, r, w = m[order], r[order], w[order]
        g = gcd(wden, *(int(x) for x in np.unique(w)))
        if g > 1:
            w = w // g
            wden //= g
        return cls(_m=m, _r=r, _w=w, _wden=wden)

    # accessors ----------------------------------------------------------

    @property
    def is_lebesgue(self) -> bool:
        return self._lebesgue

    def _require_atomic(self, what: str = "operation"):
        if self._lebesgue:
            raise UnsupportedVariantError(f"{what} is undefined for Lebesgue measure")

    @property
    def atoms(self) -> tuple[tuple[CyclotomicPoint, Fraction], ...]:
        self._require_atomic("atoms")
        mk = CyclotomicPoint._trusted
        d = self._wden
        return tuple(
            (mk(int(m), int(r)), Fraction(int(w), d)) for m, r, w in zip(self._m, self._r, self._w)
        )

    @property
    def support(self) -> tuple[CyclotomicPoint, ...]:
        return tuple(p for p, _ in self.atoms)

    @property
    def support_size(self) -> int:
        self._require_atomic("support_size")
        return len(self._m)

    def weight_of(self, point) -> Fraction:
        self._require_atomic("weight_of")
        m, r = point
        hit = np.flatnonzero((self._m == m) & (self._r == r))
        return Fraction(int(self._w[hit[0]]), self._wden) if len(hit) else Fraction(0)

    def float_weights(self) -> np.ndarray:
        self._require_atomic()
        if self._w.dtype == np.int64 and self._wden < 2**53:
            return self._w / self._wden
        return np.array([float(Fraction(int(w), self._wden)) for w in self._w])

    # equality / display -------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Measure):
            return NotImplemented
        if self._lebesgue or other._lebesgue:
            return self._lebesgue and other._lebesgue
        return (
            self._wden == other._wden
            and len(self._m) == len(other._m)
            and bool(np.all(self._m == other._m))
            and bool(np.all(self._r == other._r))
            and bool(np.all(self._w == other._w))
        )

    def __hash__(self) -> int:
        if self._lebesgue:
            return hash("lebesgue")
        return hash((self._wden, tuple(self._m.tolist()), tuple(self._r.tolist()), tuple(self._w.tolist())))

    def __repr__(self) -> str:
        if self._lebesgue:
            return "Measure.lebesgue()"
        if len(self._m) > 6:
            return f"<Measure: {len(self._m)} atoms, maxr {maxr(self)}>"
        body = ", ".join(f"({p}, {w})" for p, w in self.atoms)
        return f"Measure.atomic([{body}])"

    def to_json(self) -> str:
        if self._lebesgue:
            return json.dumps({"variant": "lebesgue"})
        atoms = [[str(p), f"{w.numerator}/{w.denominator}"] for p, w in self.atoms]
        return json.dumps({"variant": "atomic", "atoms": atoms})

    @classmethod
    def from_json(cls, text: str) -> "Measure":
        data = json.loads(text)
        if data["variant"] == "lebesgue":
            return cls.lebesgue()
        if data["variant"] != "atomic":
            raise ValueError(f"unknown measure variant {data['variant']!r}")
        return cls.atomic((CyclotomicPoint.parse(p), Fraction(w)) for p, w in data["atoms"])


def convex_combination(parts: Iterable[tuple[Measure, object]]) -> Measure:
    """Exact weighted sum ``Σ t_i μ_i`` of atomic measures; the t_i must sum to 1."""
    acc: dict[CyclotomicPoint, Fraction] = {}
    total = Fraction(0)
    for mu, t in parts:
        t = rational_weight(t)
        total += t
        if t == 0:
            continue
        for p, w in mu.atoms:
            acc[p] = acc.get(p, Fraction(0)) + t * w
    if total != 1:
        raise ValueError(f"mixture weights sum to {total}, not 1")
    return Measure.atomic(acc.items())


def uniform_orbit_measure(seed, multipliers: Sequence[int] = MULTIPLIERS) -> Measure:
    """Equal weights on the orbit of ``seed`` (a point or a precomputed :class:`Orbit`).

    The result is invariant exactly when the seed is periodic, i.e. its
    denominator is coprime to every multiplier.
    """
    o = seed if isinstance(seed, Orbit) else orbit(seed, multipliers)
    n = len(o)
    mu = Measure(_m=o.numerators, _r=o.denominators, _w=np.ones(n, dtype=np.int64), _wden=n)
    return mu


def pushforward_power(mu: Measure, n: int) -> Measure:
    """Image of ``mu`` under ω ↦ ω^n, merging atoms that collide."""
    if mu.is_lebesgue:
        return mu
    m, r = _reduce(_mulmod(mu._m, n, mu._r), mu._r)
    w = mu._w
    # merge duplicates: lexsort by (r, m), then sum runs
    order = np.lexsort((m, r))
    m, r, w = m[order], r[order], w[order]
    if len(m) > 1:
        new = np.ones(len(m), dtype=bool)
        new[1:] = (m[1:] != m[:-1]) | (r[1:] != r[:-1])
        if not new.all():
            starts = np.flatnonzero(new)
            w = np.add.reduceat(w, starts)
            m, r = m[starts], r[starts]
    return Measure._build(m, r, w, mu._wden)


def is_times_n_invariant(mu: Measure, n: int) -> bool:
    if mu.is_lebesgue:
        return True
    key = ("invariant", n)
    if key not in mu._cache:
        mu._cache[key] = pushforward_power(mu, n) == mu
    return mu._cache[key]


def is_invariant(mu: Measure, multipliers: Sequence[int] = MULTIPLIERS) -> bool:
    return all(is_times_n_invariant(mu, a) for a in multipliers)


def _require_invariant_atomic(mu: Measure, multipliers: Sequence[int]) -> None:
    mu._require_atomic("ergodic decomposition")
    if not is_invariant(mu, multipliers):
        raise NotInvariantError(f"measure is not ×{tuple(multipliers)}-invariant")


def ergodic_decompose(mu: Measure, multipliers: Sequence[int] = MULTIPLIERS) -> list[tuple[Measure, Fraction]]:
    """Split an invariant atomic measure into uniform orbit measures.

    Returns ``[(component, weight), ...]`` sorted by each component's
    smallest atom angle; the weighted sum reproduces ``mu`` exactly.
    """
    _require_invariant_atomic(mu, multipliers)
    key = ("decompose", tuple(multipliers))
    if key in mu._cache:
        return mu._cache[key]
    common = exponent(mu)
    keys = _angle_keys(mu._m, mu._r, common)
    done = np.zeros(len(mu._m), dtype=bool)
    parts = []
    for i in range(len(mu._m)):
        if done[i]:
            continue
        o = orbit(CyclotomicPoint._trusted(int(mu._m[i]), int(mu._r[i])), multipliers)
        # invariance puts the whole orbit inside the (angle-sorted) support
        idx = np.searchsorted(keys, _angle_keys(o.numerators, o.denominators, common))
        done[idx] = True
        wsum = int(mu._w[idx].sum()) if mu._w.dtype == np.int64 else sum(mu._w[idx])
        parts.append((uniform_orbit_measure(o), Fraction(wsum, mu._wden)))
    # atoms are visited in angle order, so parts are already sorted by smallest angle
    mu._cache[key] = parts
    return parts


def is_ergodic(mu: Measure, multipliers: Sequence[int] = MULTIPLIERS) -> bool:
    return len(ergodic_decompose(mu, multipliers)) == 1


def maxr(mu: Measure) -> int:
    """Largest d such that the support contains a primitive d-th root of unity."""
    mu._require_atomic("maxr")
    return int(mu._r.max())


def exponent(mu: Measure) -> int:
    """Smallest r > 0 with ω^r = 1 on the whole support (lcm of denominators)."""
    mu._require_atomic("exponent")
    return lcm(*(int(d) for d in np.unique(mu._r)))


def _le_power(x: int, base: int, n: int) -> bool:
    """Exact test of ``x <= base**n`` without building huge powers."""
    acc = 1
    for _ in range(n):
        if acc >= x:
            return True
        acc *= base
    return acc >= x


def check_maxr_bounds(mu: Measure, multipliers: Sequence[int] = MULTIPLIERS) -> tuple[bool, bool]:
    """Check ``|supp| <= maxr <= 6**|supp|`` for an ergodic invariant measure.

    The base 6 is the product of the multipliers.
    """
    if not is_ergodic(mu, multipliers):
        raise NotErgodicError("maxr bounds require an ergodic measure")
    n = mu.support_size
    top = maxr(mu)
    return n <= top, _le_power(top, prod(multipliers), n)

"""Seeded fixture generators shared by the test modules."""
from fractions import Fraction
from math import gcd

from furstenberg.dynamics import Measure, convex_combination, uniform_orbit_measure
from furstenberg.exactnum import CyclotomicPoint, cyclotomic_normalize


def coprime6_denominator(rng, rmax):
    while True:
        r = int(rng.integers(1, rmax + 1))
        if gcd(r, 6) == 1:
            return r


def random_seed_point(rng, rmax, coprime6=True):
    r = coprime6_denominator(rng, rmax) if coprime6 else int(rng.integers(1, rmax + 1))
    return cyclotomic_normalize(int(rng.integers(0, r)), r)


def random_orbit_measure(rng, rmax=500):
    """Uniform measure on the orbit of a random root of unity of order <= rmax, coprime to 6."""
    return uniform_orbit_measure(random_seed_point(rng, rmax))


def random_weights(rng, k, top=9):
    raw = [int(x) for x in rng.integers(1, top + 1, size=k)]
    total = sum(raw)
    return [Fraction(x, total) for x in raw]


def random_invariant_measure(rng, rmax=100, max_parts=3):
    """Convex combination of 1..max_parts orbit measures with random rational weights."""
    parts = int(rng.integers(1, max_parts + 1))
    measures = [random_orbit_measure(rng, rmax) for _ in range(parts)]
    return convex_combination(zip(measures, random_weights(rng, parts)))


def random_atomic_measure(rng, k, rmax=500):
    """k distinct random roots of unity of order <= rmax with random rational weights."""
    points = set()
    while len(points) < k:
        points.add(random_seed_point(rng, rmax, coprime6=False))
    return Measure.atomic(zip(sorted(points), random_weights(rng, k)))


def perturbed_measure(rng, rmax=100):
    """An invariant measure knocked off invariance by one of a few deliberate edits."""
    while True:
        mu = random_invariant_measure(rng, rmax)
        if mu.support_size > 1:
            break
    atoms = list(mu.atoms)
    how = int(rng.integers(0, 3))
    if how == 0:
        # reweight one atom against another
        (p, w), (q, v) = atoms[0], atoms[1]
        shift = min(w, v) / 2
        atoms[0], atoms[1] = (p, w + shift), (q, v - shift)
        return Measure.atomic(atoms)
    if how == 1:
        # move one atom to a point of the same order outside the support
        p, w = atoms[-1]
        support = {a for a, _ in atoms}
        for m in range(p.r * 7 + 1):
            cand = cyclotomic_normalize(p.m + m + 1, p.r * 7)
            if cand not in support:
                atoms[-1] = (cand, w)
                return Measure.atomic(atoms)
    # mix in a delta at a primitive root of order 4 * r (never invariant)
    r = 4 * coprime6_denominator(rng, rmax)
    return convex_combination([(mu, Fraction(1, 2)), (Measure.delta(CyclotomicPoint(1, r)), Fraction(1, 2))])

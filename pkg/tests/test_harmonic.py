import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from furstenberg.dynamics import Measure, is_times_n_invariant, maxr, uniform_orbit_measure
from furstenberg.errors import InvalidWindowError
from furstenberg.exactnum import CyclotomicPoint
from furstenberg.harmonic import (
    CoefficientWindow,
    fourier_coefficient,
    fourier_window,
    invariance_window_check,
    toeplitz_support_rank,
    vague_distance,
)

from helpers import random_atomic_measure, random_invariant_measure

P = CyclotomicPoint
ONE = P(0, 1)
ORBIT5 = uniform_orbit_measure(P(1, 5))


def naive_coefficient(mu, l):
    return sum(float(w) * cmath.exp(-2j * cmath.pi * float(Fraction(p.m * l, p.r) % 1)) for p, w in mu.atoms)


def test_coefficient_examples():
    assert fourier_coefficient(Measure.lebesgue(), 3) == 0
    assert fourier_coefficient(Measure.lebesgue(), 0) == 1
    assert all(abs(fourier_coefficient(Measure.delta(ONE), l) - 1) < 1e-15 for l in (-3, 0, 7))
    assert abs(fourier_coefficient(ORBIT5, 1) + 0.25) < 1e-15


def test_coefficients_match_naive_sum():
    rng = np.random.default_rng(0)
    for _ in range(30):
        mu = random_atomic_measure(rng, int(rng.integers(1, 10)))
        for l in rng.integers(-100, 100, size=5):
            assert abs(fourier_coefficient(mu, int(l)) - naive_coefficient(mu, int(l))) < 1e-12


def test_large_frequency_and_denominator_use_exact_phases():
    r = 10**12 + 39
    mu = Measure.delta(P(1, r))
    l = 3 * 10**15
    assert abs(fourier_coefficient(mu, l) - naive_coefficient(mu, l)) < 1e-12
    assert abs(fourier_coefficient(mu, r * 10**9) - 1) < 1e-15


def test_conjugate_symmetry_and_window_invariants():
    rng = np.random.default_rng(1)
    for _ in range(20):
        mu = random_atomic_measure(rng, int(rng.integers(1, 12)))
        w = fourier_window(mu, 64)
        w.validate(1e-12)
        for l in range(65):
            assert abs(w[-l] - np.conj(w[l])) <= 1e-12


def test_window_validation_and_csv():
    w = fourier_window(ORBIT5, 4)
    assert CoefficientWindow.from_csv(w.to_csv()).values.tolist() == w.values.tolist()
    bad = CoefficientWindow(1, np.array([0.5, 2, 0.5], dtype=complex))
    with pytest.raises(InvalidWindowError):
        bad.validate()
    with pytest.raises(InvalidWindowError):
        toeplitz_support_rank(bad)
    with pytest.raises(InvalidWindowError):
        CoefficientWindow(2, np.ones(3))
    with pytest.raises(IndexError):
        w[5]


def test_invariance_window_examples():
    assert invariance_window_check(ORBIT5, 2, 16, 1e-12)
    assert not invariance_window_check(Measure.delta(P(1, 5)), 2, 16, 1e-12)
    assert invariance_window_check(Measure.lebesgue(), 3, 16, 1e-12)
    with pytest.raises(ValueError):
        invariance_window_check(ORBIT5, 2, 16, 0)


def test_window_and_exact_invariance_agree():
    rng = np.random.default_rng(2)
    for i in range(200):
        if i % 2:
            mu = random_invariant_measure(rng, rmax=500)
        else:
            mu = random_atomic_measure(rng, int(rng.integers(1, 6)))
        for n in (2, 3):
            assert invariance_window_check(mu, n, maxr(mu), 1e-10) == is_times_n_invariant(mu, n)


def test_vague_distance_examples():
    assert vague_distance(ORBIT5, ORBIT5, 10) == 0
    assert abs(vague_distance(Measure.delta(ONE), Measure.lebesgue(), 1) - 1) < 1e-15
    assert abs(vague_distance(ORBIT5, Measure.lebesgue(), 1) - 0.25) < 1e-15


def test_vague_distance_is_pseudometric():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b, c = (random_atomic_measure(rng, int(rng.integers(1, 6))) for _ in range(3))
        L = int(rng.integers(1, 20))
        ab, bc, ac = vague_distance(a, b, L), vague_distance(b, c, L), vague_distance(a, c, L)
        assert abs(ab - vague_distance(b, a, L)) <= 1e-12
        assert ac <= ab + bc + 1e-12


@given(st.integers(1, 30))
def test_vague_distance_matches_two_sided_sum(L):
    mu, nu = ORBIT5, Measure.delta(ONE)
    two_sided = sum(2.0 ** -abs(l) * abs(fourier_coefficient(mu, l) - fourier_coefficient(nu, l)) for l in range(-L, L + 1))
    assert abs(vague_distance(mu, nu, L) - two_sided) < 1e-12


def test_toeplitz_rank_examples():
    assert toeplitz_support_rank(fourier_window(Measure.delta(ONE), 4)) == 1
    assert toeplitz_support_rank(fourier_window(ORBIT5, 8)) == 4
    assert toeplitz_support_rank(fourier_window(Measure.lebesgue(), 8)) is None


def test_toeplitz_rank_beyond_window():
    # 6 atoms cannot be resolved with L = 5
    assert toeplitz_support_rank(fourier_window(uniform_orbit_measure(P(1, 7)), 5)) is None
    assert toeplitz_support_rank(fourier_window(uniform_orbit_measure(P(1, 7)), 6)) == 6


def test_toeplitz_rank_random():
    rng = np.random.default_rng(4)
    for _ in range(60):
        k = int(rng.integers(1, 13))
        assert toeplitz_support_rank(fourier_window(random_atomic_measure(rng, k), 64)) == k

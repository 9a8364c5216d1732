from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import eigvalsh

from furstenberg.characters import (
    IDENTITY,
    ConstantCharacter,
    GroupElement,
    InducedCharacter,
    Lattice,
    MeasureCharacter,
    RegularCharacter,
    chi_of_measure_eval,
    cndm_bounds,
    conjugation_invariance_check,
    delta_eval,
    gmul,
    ginv,
    gram_matrix,
    gram_min_eigenvalue,
    induce_character_eval,
    recoverability_check,
    trivial_extension_eval,
)
from furstenberg.dynamics import Measure, convex_combination, exponent, uniform_orbit_measure
from furstenberg.errors import InvalidInputError, NotAlmostInvariantError, NotInvariantError, UnsupportedVariantError
from furstenberg.exactnum import CyclotomicPoint, SixAdic
from furstenberg.experiments import random_group_elements, random_pairs
from furstenberg.harmonic import fourier_window, toeplitz_support_rank

from helpers import random_invariant_measure

G = GroupElement
P = CyclotomicPoint
ORBIT5 = uniform_orbit_measure(P(1, 5))
HALF_LATTICE = Lattice.from_generators([(2, 0), (0, 1)])


def as_fraction_triple(g):
    return g.j, g.k, g.p.to_fraction()


def oracle_mul(a, b):
    (j, k, p), (l, m, q) = a, b
    return j + l, k + m, p + Fraction(2) ** j * Fraction(3) ** k * q


def test_group_law_examples():
    assert gmul(G(1, 0), G(0, 0, 1)) == G(1, 0, 2)
    assert gmul(G(0, 0, Fraction(1, 2)), G(0, 0, Fraction(1, 3))) == G(0, 0, Fraction(5, 6))
    assert ginv(G(1, 0, 2)) == G(-1, 0, -1)
    assert ginv(IDENTITY) == IDENTITY
    assert ginv(G(0, 1, Fraction(1, 3))) == G(0, -1, SixAdic(-1, 0, 2))


def test_group_axioms_on_random_triples():
    rng = np.random.default_rng(0)
    els = random_group_elements(rng, 600, shift=4, height=30)
    for _ in range(10**4):
        a, b, c = (els[i] for i in rng.integers(0, len(els), size=3))
        assert gmul(gmul(a, b), c) == gmul(a, gmul(b, c))
        assert gmul(a, IDENTITY) == a == gmul(IDENTITY, a)
        assert gmul(a, ginv(a)) == IDENTITY == gmul(ginv(a), a)
        assert as_fraction_triple(a * b) == oracle_mul(as_fraction_triple(a), as_fraction_triple(b))


def test_element_text_round_trip():
    g = G(2, -1, Fraction(-5, 12))
    assert str(g) == "(2,-1; -5/2^2·3^1)"
    assert G.parse(str(g)) == g
    assert G.parse("(0,0; 1/6)") == G(0, 0, Fraction(1, 6))


def test_measure_character_examples():
    assert chi_of_measure_eval(ORBIT5, G(1, 0, 3)) == 0
    assert abs(chi_of_measure_eval(ORBIT5, G(0, 0, Fraction(1, 6))) + 0.25) < 1e-15
    assert chi_of_measure_eval(Measure.lebesgue(), G(0, 0, 2)) == 0
    assert chi_of_measure_eval(Measure.lebesgue(), IDENTITY) == 1
    with pytest.raises(NotInvariantError):
        chi_of_measure_eval(Measure.delta(P(1, 5)), IDENTITY)


def test_regular_character_examples():
    assert delta_eval(IDENTITY) == 1
    assert delta_eval(G(0, 0, Fraction(1, 2))) == 0
    assert delta_eval(G(2, -1)) == 0


def test_gram_examples():
    rng = np.random.default_rng(1)
    F = random_group_elements(rng, 9)
    assert abs(gram_min_eigenvalue(RegularCharacter(), F) - 1) < 1e-15
    assert abs(gram_min_eigenvalue(MeasureCharacter(Measure.delta(P(0, 1))), [IDENTITY, G(0, 0, 1)])) < 1e-15
    assert gram_min_eigenvalue(MeasureCharacter(ORBIT5), random_group_elements(rng, 8)) >= -1e-10
    with pytest.raises(InvalidInputError):
        gram_min_eigenvalue(RegularCharacter(), [IDENTITY, IDENTITY])
    with pytest.raises(InvalidInputError):
        gram_min_eigenvalue(RegularCharacter(), [])


def test_conjugation_examples():
    rng = np.random.default_rng(2)
    pairs = random_pairs(rng, 100)
    assert conjugation_invariance_check(RegularCharacter(), pairs, 1e-12)
    assert conjugation_invariance_check(MeasureCharacter(ORBIT5), pairs, 1e-12)
    forced = MeasureCharacter(Measure.delta(P(1, 5)), check=False)
    assert not conjugation_invariance_check(forced, [(G(0, 0, 1), G(1, 0))], 1e-9)
    with pytest.raises(ValueError):
        conjugation_invariance_check(forced, pairs, 0)


def test_fiber_gram_is_toeplitz_matrix():
    rng = np.random.default_rng(3)
    for _ in range(10):
        mu = random_invariant_measure(rng, rmax=40)
        d = 12
        F = [G(0, 0, l) for l in range(d + 1)]
        gram = gram_matrix(MeasureCharacter(mu), F)
        window = fourier_window(mu, d)
        toeplitz = np.array([[window[l - m] for m in range(d + 1)] for l in range(d + 1)])
        assert np.max(np.abs(gram - toeplitz)) < 1e-13
        ev = eigvalsh(gram)
        rank = int(np.count_nonzero(ev > 1e-8 * ev[-1]))
        assert rank == toeplitz_support_rank(window) or (rank == d + 1 and toeplitz_support_rank(window) is None)


def test_lattice_normal_form():
    assert HALF_LATTICE == Lattice(2, 0, 1) and HALF_LATTICE.index == 2
    L = Lattice.from_generators([(4, 6), (6, 4)])
    assert L.index == 20
    for v in [(4, 6), (6, 4), (10, 10), (-2, 2)]:
        assert v in L
    assert (1, 0) not in L and (2, 0) not in L
    assert Lattice.from_generators([(3, 1), (1, 2), (5, 5)]) == Lattice.from_generators([(1, 2), (0, 5)])
    with pytest.raises(ValueError):
        Lattice.from_generators([(1, 1), (2, 2)])
    with pytest.raises(ValueError):
        Lattice(2, 3, 3)


def test_transversals_are_complete():
    L = Lattice.from_generators([(4, 6), (6, 4)])
    for shifted in (False, True):
        reps = L.transversal(shifted)
        assert len(reps) == L.index
        for a, (s, t) in enumerate(reps):
            for u, v in reps[a + 1:]:
                assert (s - u, t - v) not in L


def test_trivial_extension_examples():
    inner = MeasureCharacter(ORBIT5)
    g = G(0, 0, Fraction(1, 6))
    assert trivial_extension_eval(Lattice.full(), inner, g) == inner(g)
    assert trivial_extension_eval(HALF_LATTICE, RegularCharacter(), G(1, 0)) == 0
    assert trivial_extension_eval(HALF_LATTICE, ConstantCharacter(), G(2, 0)) == 1


def test_induction_examples():
    inner = MeasureCharacter(ORBIT5)
    g = G(0, 0, Fraction(1, 6))
    assert induce_character_eval(Lattice.full(), inner, g, verify=True) == inner(g)
    assert induce_character_eval(HALF_LATTICE, ConstantCharacter(), G(1, 0), verify=True) == 0
    assert induce_character_eval(HALF_LATTICE, ConstantCharacter(), G(2, 0), verify=True) == 1


def test_induction_vanishes_off_subgroup():
    rng = np.random.default_rng(4)
    L = Lattice.from_generators([(2, 1), (0, 3)])
    induced = InducedCharacter(L, ConstantCharacter(), verify=True)
    for g in random_group_elements(rng, 200, shift=5):
        assert induced(g) == (1 if g in L else 0)


def test_induction_detects_transversal_dependence():
    class Skewed(ConstantCharacter):
        # not invariant under conjugation by the lattice, so the two transversals disagree
        def __call__(self, g):
            return complex(np.exp(2j * np.pi * float(g.p.to_fraction()) / 7))

    with pytest.raises(NotAlmostInvariantError):
        induce_character_eval(HALF_LATTICE, Skewed(), G(0, 0, 1), verify=True)
    induce_character_eval(HALF_LATTICE, Skewed(), G(0, 0, 1))


def test_cndm_examples():
    assert cndm_bounds(ORBIT5) == (4, 5)
    assert cndm_bounds(Measure.delta(P(0, 1))) == (1, 1)
    assert cndm_bounds(uniform_orbit_measure(P(1, 7))) == (6, 7)
    with pytest.raises(UnsupportedVariantError):
        cndm_bounds(Measure.lebesgue())
    with pytest.raises(NotInvariantError):
        cndm_bounds(Measure.delta(P(1, 5)))


def test_cndm_for_mixtures_uses_exponent():
    mix = convex_combination([(ORBIT5, "1/2"), (uniform_orbit_measure(P(1, 7)), "1/2")])
    lo, hi = cndm_bounds(mix)
    assert lo == 10 and hi == exponent(mix) == 35
    rng = np.random.default_rng(5)
    for _ in range(30):
        mu = random_invariant_measure(rng, rmax=200, max_parts=4)
        lo, hi = cndm_bounds(mu)
        assert lo == mu.support_size <= hi


def test_recoverability_examples():
    assert recoverability_check(MeasureCharacter(ORBIT5))
    assert recoverability_check(RegularCharacter())
    assert not recoverability_check(InducedCharacter(HALF_LATTICE, ConstantCharacter()))
    with pytest.raises(ValueError):
        recoverability_check(RegularCharacter(), tol=0)

"""Tests for comparison families, Schwarz witnesses and the S*(ψ)/K(ψ) generators."""

import math
from fractions import Fraction

import numpy as np
import pytest
import hypothesis.strategies as st
from hypothesis import given, settings

from conftest import BUILTIN_FAMILIES, WITNESS_CATALOGUE
from schlicht_classes import (
    PhiFamily,
    SchwarzSpec,
    lemma3_bound,
    lemma4_bound,
    make_convex,
    make_starlike,
    phi_series,
    prime0_abs,
    sample_schwarz,
    schwarz_series,
    subordinate_series,
)
from series_core import (
    Backend,
    DomainError,
    GaussianRational,
    Series,
    UsageError,
    scalar_abs2,
    ser_compose,
    ser_div,
    ser_shift_down,
    ser_z_shift_derivative,
    series_close,
)


def within(value, bound, tolerance=1e-9):
    """|value| <= bound, exactly for exact values."""
    a2 = scalar_abs2(value)
    if isinstance(a2, Fraction):
        return a2 <= bound * bound
    return math.sqrt(a2) <= float(bound) * (1 + tolerance) + tolerance


class TestPhiFamily:

    def test_half_plane_series(self):
        assert phi_series(PhiFamily.half_plane(), 3).coeffs == (1, 2, 2, 2)

    def test_janowski_series(self):
        assert phi_series(PhiFamily.janowski(1, 0), 3).coeffs == (1, 1, 0, 0)
        fam = PhiFamily.janowski('1/2', '-1/3')
        assert phi_series(fam, 4).coeffs[1] == Fraction(5, 6)
        assert phi_series(fam, 4).coeffs[3] == Fraction(5, 6) * Fraction(1, 9)

    def test_special_cases_are_janowski(self):
        assert phi_series(PhiFamily.janowski(1, -1), 8) == phi_series(PhiFamily.half_plane(), 8)
        assert phi_series(PhiFamily.order_alpha('1/4'), 8) == phi_series(PhiFamily.janowski('1/2', -1), 8)

    @pytest.mark.parametrize('args', [('1/2', '1/2'), (1, 2), ('-2', -1)])
    def test_janowski_domain(self, args):
        with pytest.raises(DomainError):
            PhiFamily.janowski(*args)

    def test_order_domain(self):
        with pytest.raises(DomainError):
            PhiFamily.order_alpha(1)

    def test_decimal_parameters_rejected(self):
        with pytest.raises(UsageError):
            PhiFamily.janowski(0.5, 0)

    def test_prime0_abs(self):
        assert prime0_abs(PhiFamily.half_plane()) == 2
        assert prime0_abs(PhiFamily.order_alpha('1/3')) == Fraction(4, 3)
        user = PhiFamily.user(Series.from_values([1, -3, 0], 2))
        assert prime0_abs(user) == 3

    def test_image_disk(self):
        centre, radius = PhiFamily.janowski(1, '1/2').image_disk()
        assert (centre, radius) == (Fraction(2, 3), Fraction(2, 3))
        assert PhiFamily.half_plane().image_disk() is None
        assert PhiFamily.order_alpha('1/4').leftmost_real_part() == Fraction(1, 4)

    def test_positive_real_part(self):
        for fam in BUILTIN_FAMILIES:
            assert fam.has_positive_real_part()
        # Re φ > (1 - A)/(1 - B) on the whole Janowski range
        assert PhiFamily.janowski('-1/2', '-3/4').leftmost_real_part() == Fraction(6, 7)
        with pytest.raises(UsageError):
            PhiFamily.user(Series.one(2)).has_positive_real_part()

    def test_parse_describe(self):
        for fam in BUILTIN_FAMILIES:
            assert PhiFamily.parse(fam.describe()) == fam
        with pytest.raises(UsageError):
            PhiFamily.parse('janowski:0.5:0')


class TestSchwarz:

    def test_basic_variants(self):
        assert schwarz_series(SchwarzSpec.monomial(1), 3) == Series.identity(3)
        assert schwarz_series(SchwarzSpec.rotation(math.pi), 3).coeffs == (0, -1, 0, 0)
        assert schwarz_series(SchwarzSpec.zero(), 3) == Series.zero(3)

    def test_blaschke_factor(self):
        w = schwarz_series(SchwarzSpec.blaschke('1/2'), 3)
        assert w.coeffs == (0, Fraction(1, 2), Fraction(3, 4), Fraction(-3, 8))

    def test_blaschke_domain(self):
        with pytest.raises(DomainError):
            SchwarzSpec.blaschke(1)
        with pytest.raises(DomainError):
            SchwarzSpec.parse('blaschke:3/5,4/5')

    def test_monomial_domain(self):
        with pytest.raises(DomainError):
            SchwarzSpec.monomial(0)

    def test_quarter_turns_stay_exact(self):
        w = SchwarzSpec.parse('rotation:pi/2')
        assert not w.requires_float
        assert schwarz_series(w, 2).coeffs[1] == GaussianRational(0, 1)
        assert SchwarzSpec.rotation(1.0).requires_float
        with pytest.raises(UsageError):
            schwarz_series(SchwarzSpec.rotation(1.0), 3, Backend.EXACT)

    def test_parse_describe(self):
        for w in WITNESS_CATALOGUE:
            assert SchwarzSpec.parse(w.describe()) == w
        assert SchwarzSpec.parse('blaschke:0.25,0.1').c == complex(0.25, 0.1)

    def test_sampler_is_deterministic(self):
        first = [sample_schwarz(np.random.default_rng([3, i])) for i in range(20)]
        second = [sample_schwarz(np.random.default_rng([3, i])) for i in range(20)]
        assert first == second
        for w in first:
            if w.kind == 'blaschke':
                assert isinstance(w.c, GaussianRational)
            if w.kind == 'monomial':
                assert 1 <= w.m <= 4


class TestSubordinateSeries:

    @pytest.mark.parametrize('fam', BUILTIN_FAMILIES, ids=lambda f: f.describe())
    def test_quotient_matches_composition(self, fam):
        for w in (SchwarzSpec.monomial(2), SchwarzSpec.blaschke('1/3'), SchwarzSpec.parse('rotation:pi')):
            direct = subordinate_series(fam, w, 8)
            composed = ser_compose(phi_series(fam, 8), schwarz_series(w, 8))
            assert direct == composed

    def test_user_family_goes_through_composition(self):
        user = PhiFamily.user(Series.from_values([1, 1, 1], 6))
        result = subordinate_series(user, SchwarzSpec.monomial(2), 6)
        assert result.coeffs == (1, 0, 1, 0, 1, 0, 0)


class TestGenerators:

    def test_koebe(self, half_plane):
        g = make_starlike(half_plane, SchwarzSpec.monomial(1), 12)
        assert g.series.coeffs == tuple(range(13))
        for n in range(2, 13):
            assert g.series.coeffs[n] == lemma4_bound(2, n)

    def test_zero_witness_gives_identity(self):
        for fam in BUILTIN_FAMILIES:
            assert make_starlike(fam, SchwarzSpec.zero(), 6).series == Series.identity(6)
            assert make_convex(fam, SchwarzSpec.zero(), 6).series == Series.identity(6)

    def test_convex_koebe(self, half_plane):
        g = make_convex(half_plane, SchwarzSpec.monomial(1), 10)
        assert g.series.coeffs == (0,) + (1,) * 10
        assert g.class_tag == 'convex'

    def test_convex_is_antiderivative_of_starlike(self):
        for fam in BUILTIN_FAMILIES:
            for w in WITNESS_CATALOGUE:
                s = make_starlike(fam, w, 10)
                g = make_convex(fam, w, 10)
                shifted = ser_z_shift_derivative(g.series, 1)
                if s.series.backend is Backend.EXACT:
                    assert shifted == s.series
                else:
                    assert series_close(shifted, s.series)

    def test_defining_quotient_round_trip(self):
        for fam in BUILTIN_FAMILIES:
            w = SchwarzSpec.blaschke('-1/4')
            g = make_starlike(fam, w, 12).series
            quotient = ser_div(ser_shift_down(ser_z_shift_derivative(g, 1)), ser_shift_down(g))
            assert quotient.coeffs[:12] == subordinate_series(fam, w, 12).coeffs[:12]

    def test_members_respect_lemma_bounds(self):
        order = 14
        for fam in BUILTIN_FAMILIES:
            psi1 = phi_series(fam, 1).coeffs[1].re
            for w in WITNESS_CATALOGUE:
                s = make_starlike(fam, w, order).series
                g = make_convex(fam, w, order).series
                assert s.is_normalized() and g.is_normalized()
                for n in range(2, order + 1):
                    assert within(s.coeffs[n], lemma4_bound(psi1, n))
                    assert within(g.coeffs[n], lemma3_bound(psi1, n))


class TestLemmaBounds:

    def test_examples(self):
        assert lemma3_bound(2, 4) == 1
        assert lemma3_bound(1, 3) == Fraction(1, 3)
        assert lemma4_bound(2, 5) == 5
        for n in range(2, 21):
            assert lemma3_bound(2, n) == 1
            assert lemma4_bound(2, n) == n

    def test_n_below_two(self):
        with pytest.raises(UsageError):
            lemma3_bound(2, 1)
        with pytest.raises(UsageError):
            lemma4_bound(2, 0)

    @given(st.fractions(min_value=0, max_value=4, max_denominator=12), st.integers(2, 25))
    @settings(max_examples=200)
    def test_lemma4_is_n_times_lemma3(self, psi1, n):
        assert lemma4_bound(psi1, n) == n * lemma3_bound(psi1, n)

"""Tests for the L_K / L_S operators and the K_{λ,δ} / S_{λ,δ} member constructors."""

from fractions import Fraction

import pytest
import hypothesis.strategies as st
from hypothesis import given, settings

from conftest import BUILTIN_FAMILIES, WITNESS_CATALOGUE
from membership import (
    K_CLASS,
    S_CLASS,
    ClassSpec,
    OperatorParams,
    d_k,
    d_s,
    k_coefficient_from_sum,
    make_K_member,
    make_S_member,
    named_class,
    operator_LK,
    operator_LS,
    s_coefficient_from_sum,
)
from schlicht_classes import PhiFamily, SchwarzSpec, prime0_abs
from series_core import (
    Backend,
    DomainError,
    Series,
    UsageError,
    scalar_abs2,
    ser_derivative,
    ser_div,
    ser_mul,
    ser_shift_down,
    ser_z_shift_derivative,
    series_close,
)

HALF = PhiFamily.half_plane()
OPERATORS = [OperatorParams(0, 0), OperatorParams(1, 0), OperatorParams('1/2', '1/4'),
             OperatorParams(1, 1), OperatorParams('3/4', '1/2')]

unit_rationals = st.fractions(min_value=0, max_value=1, max_denominator=16)


def spec(kind, prm=OperatorParams(0, 0), phi=HALF, psi=HALF):
    return ClassSpec(kind, prm, phi, psi)


def same_upto(f, g, stop):
    if f.backend is Backend.EXACT and g.backend is Backend.EXACT:
        return f.coeffs[:stop] == g.coeffs[:stop]
    return series_close(f, g, upto=stop - 1)


class TestBrackets:

    def test_d_k_example(self):
        assert d_k(3, OperatorParams(1, 1)) == 7

    @given(unit_rationals, unit_rationals, st.integers(2, 50))
    @settings(max_examples=300)
    def test_d_k_equals_d_s(self, x, y, n):
        lam, delta = max(x, y), min(x, y)
        prm = OperatorParams(lam, delta)
        assert d_k(n, prm) == d_s(n, prm)
        assert d_k(n, prm) >= 1

    def test_parameter_domain(self):
        with pytest.raises(DomainError):
            OperatorParams('1/2', '3/4')
        with pytest.raises(DomainError):
            OperatorParams(2, 0)
        with pytest.raises(UsageError):
            OperatorParams(0.5, 0)


class TestOperators:

    def test_lk_expansion_example(self):
        f = Series.from_values([0, 1, 0, 1], 4)
        assert operator_LK(f, OperatorParams(1, 1)).coeffs[2] == 21

    def test_lk_collapses(self):
        f = Series.from_values([0, 1, 3, -2, 5, 1, 4], 6)
        assert same_upto(operator_LK(f, OperatorParams(0, 0)), ser_derivative(f), 6)
        zf_prime_derivative = ser_derivative(ser_z_shift_derivative(f, 1))
        assert same_upto(operator_LK(f, OperatorParams(1, 0)), zf_prime_derivative, 6)

    def test_ls_collapses(self):
        f = Series.from_values([0, 1, 3, -2, 5], 4)
        assert operator_LS(f, OperatorParams(0, 0)) == f
        assert operator_LS(f, OperatorParams(1, 0)) == ser_z_shift_derivative(f, 1)

    def test_operator_coefficients_are_brackets(self):
        f = Series.from_values([0, 1, 2, 3, 4, 5, 6], 6)
        for prm in OPERATORS:
            lk, ls = operator_LK(f, prm), operator_LS(f, prm)
            for n in range(1, 6):
                assert lk.coeffs[n - 1] == n * d_k(n, prm) * f.coeffs[n]
                assert ls.coeffs[n] == d_s(n, prm) * f.coeffs[n]

    def test_order_requirements(self):
        with pytest.raises(UsageError):
            operator_LK(Series.identity(2), OperatorParams(0, 0))
        with pytest.raises(UsageError):
            operator_LS(Series.identity(1), OperatorParams(0, 0))


class TestMembers:

    def test_zero_witnesses_give_identity(self):
        zero = SchwarzSpec.zero()
        for prm in OPERATORS:
            assert make_K_member(spec(K_CLASS, prm), zero, zero, 8).f == Series.identity(8)
            assert make_S_member(spec(S_CLASS, prm), zero, zero, 8).f == Series.identity(8)

    def test_close_to_convex_extremal(self, identity_witnesses):
        member = make_K_member(spec(K_CLASS), *identity_witnesses, 16)
        assert member.f.coeffs == tuple(range(17))

    def test_quasi_convex_extremal(self, identity_witnesses):
        prm = OperatorParams(1, 0)
        member = make_K_member(spec(K_CLASS, prm, PhiFamily.janowski(1, -1)), *identity_witnesses, 16)
        assert member.f.coeffs == (0,) + (1,) * 16

    def test_close_to_starlike_extremal(self, identity_witnesses):
        member = make_S_member(spec(S_CLASS), *identity_witnesses, 12)
        assert member.f.coeffs == tuple(n * n for n in range(13))

    def test_wrong_kind(self, identity_witnesses):
        with pytest.raises(UsageError):
            make_K_member(spec(S_CLASS), *identity_witnesses, 6)
        with pytest.raises(UsageError):
            make_S_member(spec(K_CLASS), *identity_witnesses, 6)
        with pytest.raises(UsageError):
            ClassSpec('Q', OperatorParams(0, 0), HALF, HALF)

    def test_k_operator_round_trip(self):
        order = 10
        for prm in OPERATORS:
            for w_g, w_p in zip(WITNESS_CATALOGUE, reversed(WITNESS_CATALOGUE)):
                member = make_K_member(spec(K_CLASS, prm, PhiFamily.janowski('1/2', '-1/2')), w_g, w_p, order)
                quotient = ser_div(operator_LK(member.f, prm), ser_derivative(member.g.series))
                assert same_upto(quotient, member.quotient, order - 1)

    def test_s_operator_round_trip(self):
        order = 10
        for prm in OPERATORS:
            for w_g, w_q in zip(WITNESS_CATALOGUE, reversed(WITNESS_CATALOGUE)):
                member = make_S_member(spec(S_CLASS, prm, psi=PhiFamily.order_alpha('1/3')), w_g, w_q, order)
                quotient = ser_div(ser_shift_down(operator_LS(member.f, prm)), ser_shift_down(member.g.series))
                assert same_upto(quotient, member.quotient, order)

    def test_close_to_convex_is_plain_product(self):
        w_g, w_p = SchwarzSpec.blaschke('1/2'), SchwarzSpec.monomial(2)
        member = make_K_member(spec(K_CLASS), w_g, w_p, 10)
        product = ser_mul(member.quotient, ser_derivative(member.g.series))
        assert same_upto(operator_LK(member.f, OperatorParams(0, 0)), product, 10)

    def test_members_are_normalized_and_quotients_dominated(self):
        for fam in BUILTIN_FAMILIES:
            phi1 = prime0_abs(fam)
            for w in WITNESS_CATALOGUE:
                for kind in (K_CLASS, S_CLASS):
                    cls = spec(kind, OperatorParams('1/2', '1/4'), fam, HALF)
                    builder = make_K_member if kind == K_CLASS else make_S_member
                    member = builder(cls, SchwarzSpec.monomial(1), w, 8)
                    assert member.f.coeffs[0] == 0 and member.f.coeffs[1] == 1
                    assert member.quotient.coeffs[0] == 1
                    if member.quotient.backend is Backend.EXACT:
                        assert scalar_abs2(member.quotient.coeffs[1]) <= phi1 * phi1
                    else:
                        assert abs(member.quotient.coeffs[1]) <= float(phi1) + 1e-9

    def test_summation_forms_agree(self):
        order = 10
        for prm in OPERATORS:
            for w_g, w_q in [(SchwarzSpec.blaschke('1/3'), SchwarzSpec.monomial(1)),
                             (SchwarzSpec.parse('rotation:pi/2'), SchwarzSpec.parse('blaschke:-1/2,1/4'))]:
                k_member = make_K_member(spec(K_CLASS, prm), w_g, w_q, order)
                s_member = make_S_member(spec(S_CLASS, prm), w_g, w_q, order)
                for n in range(2, order + 1):
                    assert k_coefficient_from_sum(k_member.g.series, k_member.quotient, n, prm) == k_member.f.coeffs[n]
                    assert s_coefficient_from_sum(s_member.g.series, s_member.quotient, n, prm) == s_member.f.coeffs[n]

    def test_float_backend_request(self, identity_witnesses):
        member = make_K_member(spec(K_CLASS), *identity_witnesses, 8, Backend.FLOAT)
        assert member.f.backend is Backend.FLOAT
        assert series_close(member.f, Series.from_values(range(9), 8))


class TestNamedClasses:

    def test_operator_presets(self):
        jan = PhiFamily.janowski(1, 0)
        assert named_class('QK', phi=jan, psi=HALF) == ClassSpec(K_CLASS, OperatorParams(1, 0), jan, HALF)
        assert named_class('C', phi=jan, psi=HALF).params == OperatorParams(0, 0)
        assert named_class('CS', phi=jan, psi=HALF).kind == S_CLASS

    def test_janowski_presets(self):
        assert named_class('CCV', A=1, B=0).phi == PhiFamily.janowski(1, 0)
        assert named_class('CST', A=1, B=0).kind == S_CLASS
        q_st = named_class('Q_ST', lam=Fraction(1, 2), A=1, B=-1)
        assert (q_st.kind, q_st.params.lam, q_st.psi) == (S_CLASS, Fraction(1, 2), HALF)

    def test_libera_and_plain_classes(self):
        libera = named_class('libera', alpha='1/3', beta='1/2')
        assert prime0_abs(libera.phi) == Fraction(4, 3)
        assert prime0_abs(libera.psi) == 1
        assert named_class('quasi-convex') == ClassSpec(K_CLASS, OperatorParams(1, 0), HALF, HALF)
        assert named_class('close-to-starlike').kind == S_CLASS

    @pytest.mark.parametrize('args', [('QK', {}), ('CCV', {'A': 1}), ('Q_CV', {'A': 1, 'B': 0}),
                                      ('libera', {'alpha': 0}), ('starlike-ish', {})])
    def test_missing_or_unknown(self, args):
        name, params = args
        with pytest.raises(UsageError):
            named_class(name, **params)

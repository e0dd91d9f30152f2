"""Tests for randomized bound verification, the specialization lattice and suites."""

import json
import os
from fractions import Fraction

import pytest

from membership import K_CLASS, S_CLASS, ClassSpec, OperatorParams, make_member
from records import dumps, verification_report_document
from schlicht_classes import PhiFamily, SchwarzSpec
from series_core import Backend, Series, UsageError
from verify import (
    PresetNotFoundError,
    VerificationConfig,
    check_subordination_coeffs,
    draw_witnesses,
    evaluate_member,
    load_preset,
    load_presets,
    load_suite_config,
    run_suite,
    verify_config,
    verify_specialization_lattice,
    verify_theorem1,
    verify_theorem2,
)

HALF = PhiFamily.half_plane()


class TestSubordinationCheck:

    def test_half_plane_identity_is_tight(self):
        check = check_subordination_coeffs(HALF, SchwarzSpec.monomial(1), 12)
        assert check.passed
        assert check.a1 == 2
        assert check.worst_ratio_sq == 1

    @pytest.mark.parametrize('w', ['monomial:3', 'rotation:pi/2', 'blaschke:1/2', 'blaschke:-1/3,1/4', 'rotation:1.0'])
    def test_domination(self, w):
        for fam in (HALF, PhiFamily.janowski('1/2', '-1/2'), PhiFamily.janowski(1, '1/2'), PhiFamily.order_alpha('1/4')):
            check = check_subordination_coeffs(fam, SchwarzSpec.parse(w), 16)
            assert check.passed, (fam.describe(), w, check.failing)

    def test_exact_ratios_stay_exact(self):
        check = check_subordination_coeffs(PhiFamily.janowski(1, 0), SchwarzSpec.blaschke('1/2'), 10)
        assert isinstance(check.worst_ratio_sq, Fraction)
        # φ(z) = 1 + z, so φ∘ω - 1 = ω; its largest coefficient is 1 - c²
        assert check.worst_ratio_sq == Fraction(9, 16)

    def test_user_family_rejected(self):
        user = PhiFamily.user(Series.from_values([1, 1], 4))
        with pytest.raises(UsageError):
            check_subordination_coeffs(user, SchwarzSpec.monomial(1), 4)


class TestEvaluateMember:

    def test_violations_are_reported(self, identity_witnesses):
        spec = ClassSpec(K_CLASS, OperatorParams(0, 0), HALF, HALF)
        member = make_member(spec, *identity_witnesses, 6)
        outcome = evaluate_member(member, [Fraction(1)] * 5, Fraction(2))
        assert [v.n for v in outcome.violations] == [2, 3, 4, 5, 6]
        assert all(v.check == 'bound' for v in outcome.violations)
        assert outcome.violations[-1].ratio == 6
        assert outcome.quotient_ratio_sq == 1

    def test_lemma2_violation(self, identity_witnesses):
        spec = ClassSpec(K_CLASS, OperatorParams(0, 0), HALF, HALF)
        member = make_member(spec, *identity_witnesses, 4)
        outcome = evaluate_member(member, [Fraction(n) for n in range(2, 5)], Fraction(1))
        assert {v.check for v in outcome.violations} == {'lemma2'}
        skipped = evaluate_member(member, [Fraction(n) for n in range(2, 5)], Fraction(1), lemma2_checks=False)
        assert not skipped.violations


class TestVerification:

    def test_extremal_ratios_are_exactly_one(self, presets):
        preset = presets['extremal']
        for kind in (K_CLASS, S_CLASS):
            cfg = VerificationConfig(preset.spec(kind), sample_count=1, witnesses=preset.witnesses)
            report = verify_config(cfg)
            assert report.passed
            assert report.order == 24
            assert all(report.worst_case(n).ratio_sq == 1 for n in report.ns)
            assert report.quotient_worst.ratio_sq == 1

    def test_quasi_convex_bound_is_one(self, presets):
        cfg = VerificationConfig(presets['quasi'].spec(K_CLASS), order=8, sample_count=1,
                                 witnesses=(SchwarzSpec.monomial(1), SchwarzSpec.monomial(1)))
        report = verify_theorem1(cfg)
        assert [report.bound(n) for n in report.ns] == [1] * 7
        assert all(report.worst_ratio(n) == 1.0 for n in report.ns)

    def test_zero_witnesses(self):
        zero = SchwarzSpec.zero()
        cfg = VerificationConfig(ClassSpec(S_CLASS, OperatorParams('1/2', '1/4'), HALF, HALF),
                                 order=6, sample_count=3, witnesses=(zero, zero))
        report = verify_theorem2(cfg)
        assert report.passed
        assert all(report.worst_case(n).ratio_sq == 0 for n in report.ns)

    @pytest.mark.parametrize('preset_id', ['quasi', 'disk_image', 'full_operator', 'reade_order'])
    def test_random_members_respect_bounds(self, presets, preset_id):
        for kind in (K_CLASS, S_CLASS):
            cfg = VerificationConfig(presets[preset_id].spec(kind), order=10, sample_count=30, seed=17)
            report = verify_config(cfg)
            assert report.passed, report.violations[:3]
            assert len(report.worst) == 9
            assert 0 <= report.float_samples <= 30
            for n in report.ns:
                assert report.worst_ratio(n) <= 1 + 1e-9

    def test_float_backend(self, presets):
        cfg = VerificationConfig(presets['janowski_half'].spec(K_CLASS), order=10, sample_count=20,
                                 seed=5, backend='float')
        report = verify_theorem1(cfg)
        assert report.passed
        assert report.float_samples == 20
        assert all(isinstance(case.ratio_sq, float) for case in report.worst)

    def test_reports_are_deterministic(self, presets):
        spec = presets['mixed_operator'].spec(S_CLASS)
        runs = [verify_config(VerificationConfig(spec, order=8, sample_count=16, seed=11, workers=workers))
                for workers in (1, 1, 2)]
        documents = [dumps(verification_report_document(r)) for r in runs]
        assert documents[0] == documents[1] == documents[2]

    def test_seed_changes_draws(self):
        assert draw_witnesses(1, 0) == draw_witnesses(1, 0)
        draws = {tuple(w.describe() for w in draw_witnesses(seed, 0)) for seed in range(12)}
        assert len(draws) > 1

    def test_kind_mismatch(self, presets):
        with pytest.raises(UsageError):
            verify_theorem1(VerificationConfig(presets['quasi'].spec(S_CLASS), sample_count=1))
        with pytest.raises(UsageError):
            verify_theorem2(VerificationConfig(presets['quasi'].spec(K_CLASS), sample_count=1))

    @pytest.mark.parametrize('field,value', [('order', 3), ('sample_count', 0), ('seed', -1),
                                             ('backend', 'exact'), ('workers', 0), ('tolerance', 0.0)])
    def test_config_validation(self, presets, field, value):
        with pytest.raises(UsageError):
            VerificationConfig(presets['quasi'].spec(K_CLASS), **{field: value})


class TestLattice:

    def test_lattice_passes(self):
        report = verify_specialization_lattice(12)
        assert report.passed
        assert report.points >= 200
        names = [check.name for check in report.checks]
        assert 'D_K == D_S' in names and 'cor_c -> cor_libera' in names
        assert all(check.points >= 50 for check in report.checks)

    def test_lattice_needs_n(self):
        with pytest.raises(UsageError):
            verify_specialization_lattice(1)


class TestPresets:

    def test_bundled_presets(self, presets):
        assert len(presets) >= 9
        assert presets['extremal'].witnesses == (SchwarzSpec.monomial(1), SchwarzSpec.monomial(1))
        assert presets['libera'].phi == PhiFamily.order_alpha('1/3')
        assert presets['full_operator'].params == OperatorParams(1, 1)
        assert load_preset('quasi').params == OperatorParams(1, 0)

    def test_unknown_preset(self):
        with pytest.raises(PresetNotFoundError):
            load_preset('nope')

    def test_custom_directory(self, tmp_path):
        (tmp_path / 'index.json').write_text(json.dumps({
            'presets': [{'id': 'mine', 'file': 'mine.json', 'category': 'Test'},
                        {'id': 'gone', 'file': 'gone.json'}],
            'suites': [{'id': 'default', 'file': 'suite.json'}],
        }))
        (tmp_path / 'mine.json').write_text(json.dumps({'lambda': '1/2', 'delta': '0', 'phi': 'janowski:1:0',
                                                        'psi': 'halfplane'}))
        (tmp_path / 'suite.json').write_text(json.dumps({'samples': 4, 'order': 6, 'lattice': False}))
        presets = load_presets(str(tmp_path))
        assert list(presets) == ['mine']
        assert presets['mine'].name == 'mine'

        suite = run_suite(None, str(tmp_path))
        assert suite.passed
        assert [r.preset for r in suite.reports] == ['mine', 'mine']
        assert suite.lattice is None

    def test_incomplete_preset(self, tmp_path):
        (tmp_path / 'index.json').write_text(json.dumps({'presets': [{'id': 'bad', 'file': 'bad.json'}]}))
        (tmp_path / 'bad.json').write_text(json.dumps({'lambda': '0', 'phi': 'halfplane', 'psi': 'halfplane'}))
        with pytest.raises(UsageError):
            load_presets(str(tmp_path))


class TestSuites:

    def test_default_suite_config(self):
        config = load_suite_config()
        assert config['kinds'] == [K_CLASS, S_CLASS]
        assert config['order'] == 24 and config['samples'] == 10000
        assert config['presets'] == 'all'
        assert config['workers'] == (os.cpu_count() or 1)

    def test_auto_workers(self):
        assert load_suite_config({'workers': 'auto'})['workers'] == (os.cpu_count() or 1)
        assert load_suite_config({'workers': 3})['workers'] == 3
        with pytest.raises(UsageError):
            load_suite_config({'workers': 'many'})

    @pytest.mark.parametrize('bad', [{'bogus': 1}, {'schema_version': 2}, {'kinds': ['Q']}, {'kinds': []},
                                     {'order': 3}, {'samples': True}, {'backend': 'exact'},
                                     {'lattice': 'yes'}, {'tolerance': 0}, {'presets': 'some'}])
    def test_invalid_configs(self, bad):
        with pytest.raises(UsageError):
            load_suite_config(bad)

    def test_missing_file(self, tmp_path):
        with pytest.raises(UsageError):
            load_suite_config(str(tmp_path / 'absent.json'))

    def test_small_suite(self):
        suite = run_suite({'presets': ['extremal', 'quasi'], 'samples': 5, 'order': 8, 'seed': 1, 'lattice': False})
        assert suite.passed
        assert [(r.preset, r.spec.kind) for r in suite.reports] == [
            ('extremal', K_CLASS), ('extremal', S_CLASS), ('quasi', K_CLASS), ('quasi', S_CLASS)]
        assert [r.sample_count for r in suite.reports] == [1, 1, 5, 5]
        assert suite.violation_count == 0

    def test_unknown_suite_preset(self):
        with pytest.raises(PresetNotFoundError):
            run_suite({'presets': ['nope'], 'samples': 1, 'order': 4, 'lattice': False})

    @pytest.mark.slow
    def test_default_suite(self):
        suite = run_suite()
        assert suite.passed
        assert suite.lattice is not None and suite.lattice.passed
        assert len(suite.reports) == 2 * len(load_presets())

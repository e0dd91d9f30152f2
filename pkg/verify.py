"""
Bound Verification

Randomized and exhaustive checks of the coefficient bounds:
- Rogosinski-type domination of subordinate coefficients (check_subordination_coeffs)
- |a_n| <= bound for members built from random Schwarz witnesses (verify_theorem1/2)
- exact identities between the bound formulas (verify_specialization_lattice)
- declarative suites over the named presets (run_suite)

Violations are report content, never exceptions. Every sample draws its
witnesses from a random stream seeded by (seed, sample index), so a report
depends only on its configuration, whatever the worker count.

Usage:
    from verify import VerificationConfig, load_presets, verify_theorem1

    spec = load_presets()['quasi'].spec('K')
    report = verify_theorem1(VerificationConfig(spec, sample_count=200, seed=7))
    report.passed, report.worst_ratio(5)
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from bounds import (
    BoundParams,
    cor1_QCV_bound,
    cor2_QST_bound,
    cor_C_bound,
    cor_CS_bound,
    cor_QK_bound,
    cor_libera_bound,
    params_for,
    bound_for,
    thm1_bound,
    thm2_bound,
    thmA_bound,
    thmB_bound,
)
from membership import (
    CLASS_KINDS,
    K_CLASS,
    S_CLASS,
    ClassSpec,
    MemberWitness,
    OperatorParams,
    d_k,
    d_s,
    make_member,
)
from schlicht_classes import (
    PhiFamily,
    SchwarzSpec,
    lemma3_bound,
    lemma4_bound,
    prime0_abs,
    sample_schwarz,
    subordinate_series,
)
from series_core import (
    DEFAULT_TOLERANCE,
    Backend,
    Scalar,
    UsageError,
    parse_rational,
    resolve_backend,
    scalar_abs2,
)

logger = logging.getLogger(__name__)

VERIFY_ORDER = 24
DEFAULT_SAMPLES = 10000
DEFAULT_WORKERS = int(os.getenv('SCHLICHT_WORKERS', '1'))
# Suite configs may ask for one worker per CPU.
AUTO_WORKERS = 'auto'
PRESETS_DIR = os.getenv('SCHLICHT_PRESETS_DIR') or os.path.join(
    os.path.dirname(os.path.abspath(__file__)), 'presets')
BACKEND_CHOICES = ('auto', 'float')
SUITE_SCHEMA_VERSION = 1

Number = Union[Fraction, float]
WitnessPair = Tuple[SchwarzSpec, SchwarzSpec]

# Deterministic grids for the formula identities
LAMBDA_GRID = tuple(Fraction(x) for x in ('0', '1/4', '1/3', '1/2', '3/4', '1'))
OPERATOR_GRID = tuple((lam, delta) for lam in LAMBDA_GRID for delta in LAMBDA_GRID if delta <= lam)
DERIVATIVE_GRID = tuple(Fraction(x) for x in ('1/2', '1', '3/2', '2'))
JANOWSKI_VALUES = tuple(Fraction(x) for x in ('-1', '-1/2', '0', '1/2', '1'))
JANOWSKI_GRID = tuple((A, B) for A in JANOWSKI_VALUES for B in JANOWSKI_VALUES if B < A)
ORDER_GRID = tuple(Fraction(x) for x in ('0', '1/4', '1/2', '3/4'))
BRACKET_N_MAX = 50
MAX_LISTED_MISMATCHES = 10


class PresetNotFoundError(UsageError):
    """Raised when a preset id is not listed in the presets index."""
    pass


# ============================================================================
# Rogosinski check
# ============================================================================

@dataclass
class SubordinationCheck:
    """Outcome of |B_n| <= |A_1| for φ∘ω - 1 against φ - 1."""

    phi: PhiFamily
    witness: SchwarzSpec
    order: int
    a1: Number
    worst_ratio_sq: Number
    failing: List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failing


def _ratio_sq(value: Scalar, limit: Number) -> Number:
    """|value|² / limit², exact whenever both sides are."""
    a2 = scalar_abs2(value)
    if not limit:
        return Fraction(0) if not a2 else math.inf
    return a2 / (limit * limit)


def _exceeds(ratio_sq: Number, tolerance: float) -> bool:
    if isinstance(ratio_sq, Fraction):
        return ratio_sq > 1
    return ratio_sq > (1 + tolerance) ** 2


def check_subordination_coeffs(inner_phi: PhiFamily, w: SchwarzSpec, N: int = VERIFY_ORDER,
                               tolerance: float = DEFAULT_TOLERANCE) -> SubordinationCheck:
    """
    Coefficients B_n of φ∘ω - 1 against A_1 of φ - 1, n = 1..N.

    Raises:
        UsageError: For user comparison series, whose convexity cannot be certified
    """
    if not inner_phi.is_builtin:
        raise UsageError("Coefficient domination needs a convex comparison function; user series are not certified")
    backend = resolve_backend(None, inner_phi, w)
    a1 = prime0_abs(inner_phi)
    composed = subordinate_series(inner_phi, w, N, backend)

    check = SubordinationCheck(inner_phi, w, N, a1, Fraction(0))
    for n in range(1, N + 1):
        ratio = _ratio_sq(composed.coeffs[n], a1)
        if ratio > check.worst_ratio_sq:
            check.worst_ratio_sq = ratio
        if _exceeds(ratio, tolerance):
            check.failing.append(n)
    if check.failing:
        logger.warning(f"Coefficient domination fails for {inner_phi.describe()} with {w.describe()} at n={check.failing}")
    return check


# ============================================================================
# Randomized bound verification
# ============================================================================

@dataclass(frozen=True)
class VerificationConfig:
    """One randomized verification run over a single class."""

    spec: ClassSpec
    order: int = VERIFY_ORDER
    sample_count: int = DEFAULT_SAMPLES
    seed: int = 0
    backend: str = 'auto'
    tolerance: float = DEFAULT_TOLERANCE
    workers: int = DEFAULT_WORKERS
    # Fixed (w_g, w_quotient) pair used for every sample instead of random draws
    witnesses: Optional[WitnessPair] = None
    lemma2_checks: bool = True
    preset: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 4:
            raise UsageError(f"Verification order must be an integer >= 4, got {self.order!r}")
        if not isinstance(self.sample_count, int) or self.sample_count < 1:
            raise UsageError(f"Sample count must be a positive integer, got {self.sample_count!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise UsageError(f"Seed must be a nonnegative integer, got {self.seed!r}")
        if self.backend not in BACKEND_CHOICES:
            raise UsageError(f"Backend must be one of {BACKEND_CHOICES}, got {self.backend!r}")
        if not self.tolerance > 0:
            raise UsageError(f"Tolerance must be positive, got {self.tolerance!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise UsageError(f"Worker count must be a positive integer, got {self.workers!r}")

    @property
    def requested_backend(self) -> Optional[Backend]:
        return Backend.FLOAT if self.backend == 'float' else None


@dataclass(frozen=True)
class Violation:
    """A sample whose coefficient (check='bound') or quotient coefficient (check='lemma2') broke its limit."""

    sample: int
    n: int
    check: str
    ratio: float
    witnesses: WitnessPair


@dataclass
class SampleOutcome:
    index: int
    witnesses: WitnessPair
    backend: Backend
    ratio_sq: List[Number]
    quotient_ratio_sq: Number
    violations: List[Violation]


@dataclass
class WorstCase:
    ratio_sq: Number
    sample: int
    witnesses: WitnessPair

    @property
    def ratio(self) -> float:
        return math.sqrt(self.ratio_sq)


@dataclass
class VerificationReport:
    """Aggregate of a verification run: bounds and worst ratios for n = 2..order."""

    spec: ClassSpec
    order: int
    sample_count: int
    seed: int
    backend: str
    tolerance: float
    bounds: List[Number]
    worst: List[WorstCase] = field(default_factory=list)
    quotient_worst: Optional[WorstCase] = None
    violations: List[Violation] = field(default_factory=list)
    float_samples: int = 0
    preset: Optional[str] = None

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def ns(self) -> range:
        return range(2, self.order + 1)

    def bound(self, n: int) -> Number:
        return self.bounds[n - 2]

    def worst_case(self, n: int) -> WorstCase:
        return self.worst[n - 2]

    def worst_ratio(self, n: int) -> float:
        return self.worst[n - 2].ratio

    @property
    def worst_witness(self) -> WitnessPair:
        """Witnesses of the largest ratio over all n (lowest n on ties)."""
        best = self.worst[0]
        for case in self.worst[1:]:
            if case.ratio_sq > best.ratio_sq:
                best = case
        return best.witnesses


def evaluate_member(member: MemberWitness, bounds: List[Number], phi1: Number,
                    tolerance: float = DEFAULT_TOLERANCE, index: int = 0,
                    lemma2_checks: bool = True) -> SampleOutcome:
    """
    Ratios |a_n| / bound_n for n = 2..N and, optionally, |c_m| / |φ'(0)| for m = 1..N.

    Args:
        member: Member to check
        bounds: Bound for n = 2..N, in order
        phi1: |φ'(0)| for the quotient coefficient checks
        tolerance: Relative slack for floating members
        index: Sample index recorded on violations
        lemma2_checks: Also check the quotient coefficients

    Returns:
        Squared ratios per n, the quotient worst ratio and any violations
    """
    f, quotient = member.f, member.quotient
    witnesses = member.witnesses
    ratios, violations = [], []
    for n in range(2, f.order + 1):
        ratio = _ratio_sq(f.coeffs[n], bounds[n - 2])
        ratios.append(ratio)
        if _exceeds(ratio, tolerance):
            violations.append(Violation(index, n, 'bound', math.sqrt(ratio), witnesses))

    quotient_worst = Fraction(0)
    if lemma2_checks:
        for m in range(1, quotient.order + 1):
            ratio = _ratio_sq(quotient.coeffs[m], phi1)
            if ratio > quotient_worst:
                quotient_worst = ratio
            if _exceeds(ratio, tolerance):
                violations.append(Violation(index, m, 'lemma2', math.sqrt(ratio), witnesses))
    return SampleOutcome(index, witnesses, f.backend, ratios, quotient_worst, violations)


def draw_witnesses(seed: int, index: int, exact: bool = True) -> WitnessPair:
    """Independent (w_g, w_quotient) pair from the stream seeded by (seed, index)."""
    rng = np.random.default_rng([seed, index])
    return sample_schwarz(rng, exact), sample_schwarz(rng, exact)


def _run_sample(cfg: VerificationConfig, bounds: List[Number], phi1: Number, index: int) -> SampleOutcome:
    w_g, w_q = cfg.witnesses or draw_witnesses(cfg.seed, index, exact=cfg.backend == 'auto')
    member = make_member(cfg.spec, w_g, w_q, cfg.order, cfg.requested_backend)
    return evaluate_member(member, bounds, phi1, cfg.tolerance, index, cfg.lemma2_checks)


def _collect(cfg: VerificationConfig, bounds: List[Number], outcomes: Iterable[SampleOutcome]) -> VerificationReport:
    report = VerificationReport(cfg.spec, cfg.order, cfg.sample_count, cfg.seed, cfg.backend,
                                cfg.tolerance, bounds, preset=cfg.preset)
    # Outcomes arrive in sample order; strict comparison keeps the lowest index on ties
    for outcome in outcomes:
        if outcome.backend is Backend.FLOAT:
            report.float_samples += 1
        for i, ratio in enumerate(outcome.ratio_sq):
            if i == len(report.worst):
                report.worst.append(WorstCase(ratio, outcome.index, outcome.witnesses))
            elif ratio > report.worst[i].ratio_sq:
                report.worst[i] = WorstCase(ratio, outcome.index, outcome.witnesses)
        if report.quotient_worst is None or outcome.quotient_ratio_sq > report.quotient_worst.ratio_sq:
            report.quotient_worst = WorstCase(outcome.quotient_ratio_sq, outcome.index, outcome.witnesses)
        report.violations.extend(outcome.violations)
    return report


def _verify(cfg: VerificationConfig) -> VerificationReport:
    bounds = [bound_for(cfg.spec, n) for n in range(2, cfg.order + 1)]
    worker = partial(_run_sample, cfg, bounds, params_for(cfg.spec).phi1)
    logger.info(f"Verifying {cfg.spec.label}: {cfg.sample_count} sample(s), order {cfg.order}, seed {cfg.seed}")

    if cfg.workers > 1 and cfg.sample_count > 1:
        chunksize = max(1, cfg.sample_count // (cfg.workers * 8))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            report = _collect(cfg, bounds, pool.map(worker, range(cfg.sample_count), chunksize=chunksize))
    else:
        report = _collect(cfg, bounds, map(worker, range(cfg.sample_count)))

    if report.violations:
        logger.warning(f"{len(report.violations)} violation(s) for {cfg.spec.label}")
    else:
        logger.info(f"No violations for {cfg.spec.label} ({report.float_samples} floating sample(s))")
    return report


def verify_theorem1(cfg: VerificationConfig) -> VerificationReport:
    """|a_n| <= thm1_bound for random members of K_{λ,δ}(φ, ψ)."""
    if cfg.spec.kind != K_CLASS:
        raise UsageError(f"verify_theorem1 needs a {K_CLASS}-class spec, got {cfg.spec.kind!r}")
    return _verify(cfg)


def verify_theorem2(cfg: VerificationConfig) -> VerificationReport:
    """|a_n| <= thm2_bound for random members of S_{λ,δ}(φ, ψ)."""
    if cfg.spec.kind != S_CLASS:
        raise UsageError(f"verify_theorem2 needs an {S_CLASS}-class spec, got {cfg.spec.kind!r}")
    return _verify(cfg)


def verify_config(cfg: VerificationConfig) -> VerificationReport:
    if cfg.spec.kind == K_CLASS:
        return verify_theorem1(cfg)
    return verify_theorem2(cfg)


# ============================================================================
# Specialization lattice
# ============================================================================

@dataclass
class LatticeCheck:
    """One family of exact identities (or inequalities) checked over a grid."""

    name: str
    points: int = 0
    mismatches: List[str] = field(default_factory=list)
    mismatch_count: int = 0

    @property
    def passed(self) -> bool:
        return self.mismatch_count == 0

    def record(self, ok: bool, label: str):
        self.points += 1
        if not ok:
            self.mismatch_count += 1
            if len(self.mismatches) < MAX_LISTED_MISMATCHES:
                self.mismatches.append(label)


@dataclass
class LatticeReport:
    n_max: int
    checks: List[LatticeCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def points(self) -> int:
        return sum(check.points for check in self.checks)


def verify_specialization_lattice(n_max: int = 20) -> LatticeReport:
    """Exact checks of every specialization arrow between the bound formulas, n = 2..n_max."""
    if n_max < 2:
        raise UsageError(f"n_max must be at least 2, got {n_max}")
    ns = range(2, n_max + 1)
    report = LatticeReport(n_max)

    def check(name: str) -> LatticeCheck:
        entry = LatticeCheck(name)
        report.checks.append(entry)
        return entry

    qk, c, cs = check('thm1 -> cor_qk'), check('thm1 -> cor_c'), check('thm2 -> cor_cs')
    scaled = check('thm2 == n * thm1')
    for phi1 in DERIVATIVE_GRID:
        for psi1 in DERIVATIVE_GRID:
            for n in ns:
                label = f"phi1={phi1}, psi1={psi1}, n={n}"
                qk.record(thm1_bound(BoundParams(1, 0, phi1, psi1), n) == cor_QK_bound(phi1, psi1, n), label)
                c.record(thm1_bound(BoundParams(0, 0, phi1, psi1), n) == cor_C_bound(phi1, psi1, n), label)
                cs.record(thm2_bound(BoundParams(0, 0, phi1, psi1), n) == cor_CS_bound(phi1, psi1, n), label)
                for lam, delta in OPERATOR_GRID:
                    p = BoundParams(lam, delta, phi1, psi1)
                    scaled.record(thm2_bound(p, n) == n * thm1_bound(p, n), f"lambda={lam}, delta={delta}, {label}")

    libera = check('cor_c -> cor_libera')
    for alpha in ORDER_GRID:
        for beta in ORDER_GRID:
            for n in ns:
                libera.record(cor_C_bound(2 * (1 - alpha), 2 * (1 - beta), n) == cor_libera_bound(alpha, beta, n),
                              f"alpha={alpha}, beta={beta}, n={n}")

    cor1, cor2 = check('thm1 -> cor1'), check('thm2 -> cor2')
    improvement = check('cor1 <= thmA, cor2 <= thmB')
    for lam in LAMBDA_GRID:
        for A, B in JANOWSKI_GRID:
            for n in ns:
                label = f"lambda={lam}, A={A}, B={B}, n={n}"
                p = BoundParams(lam, 0, A - B, 2)
                c1, c2 = cor1_QCV_bound(lam, A, B, n), cor2_QST_bound(lam, A, B, n)
                ta, tb = thmA_bound(lam, A, B, n), thmB_bound(lam, A, B, n)
                cor1.record(thm1_bound(p, n) == c1, label)
                cor2.record(thm2_bound(p, n) == c2, label)
                if B == -1:
                    improvement.record(c1 == ta and c2 == tb, label)
                else:
                    improvement.record(c1 < ta and c2 < tb, label)

    classical = check('classical reductions')
    for n in ns:
        classical.record(cor1_QCV_bound(0, 1, -1, n) == n, f"cor1(0,1,-1), n={n}")
        classical.record(cor2_QST_bound(0, 1, -1, n) == n * n, f"cor2(0,1,-1), n={n}")
        classical.record(cor1_QCV_bound(1, 1, -1, n) == 1, f"cor1(1,1,-1), n={n}")
        classical.record(lemma3_bound(2, n) == 1, f"lemma3(2), n={n}")
        classical.record(lemma4_bound(2, n) == n, f"lemma4(2), n={n}")
        classical.record(cor_libera_bound(0, 0, n) == n, f"cor_libera(0,0), n={n}")

    bracket = check('D_K == D_S')
    for lam, delta in OPERATOR_GRID:
        prm = OperatorParams(lam, delta)
        for n in range(2, BRACKET_N_MAX + 1):
            bracket.record(d_k(n, prm) == d_s(n, prm), f"lambda={lam}, delta={delta}, n={n}")

    for entry in report.checks:
        if not entry.passed:
            logger.error(f"Lattice check '{entry.name}' failed at {entry.mismatch_count} point(s)")
    logger.info(f"Specialization lattice: {report.points} point(s), passed={report.passed}")
    return report


# ============================================================================
# Presets and suites
# ============================================================================

@dataclass(frozen=True)
class ClassPreset:
    """A named (λ, δ, φ, ψ) tuple, optionally pinned to a fixed witness pair."""

    id: str
    name: str
    description: str
    category: str
    params: OperatorParams
    phi: PhiFamily
    psi: PhiFamily
    witnesses: Optional[WitnessPair] = None

    def spec(self, kind: str) -> ClassSpec:
        return ClassSpec(kind, self.params, self.phi, self.psi)


def _read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        raise UsageError(f"File not found: {path}")
    except json.JSONDecodeError as e:
        raise UsageError(f"Invalid JSON in {path}: {e}")


def _load_index(presets_dir: Optional[str]) -> Tuple[str, Dict[str, Any]]:
    presets_dir = presets_dir or PRESETS_DIR
    return presets_dir, _read_json(os.path.join(presets_dir, 'index.json'))


def _parse_preset(info: Dict[str, Any], data: Dict[str, Any]) -> ClassPreset:
    try:
        params = OperatorParams(parse_rational(str(data['lambda'])), parse_rational(str(data['delta'])))
        phi, psi = PhiFamily.parse(data['phi']), PhiFamily.parse(data['psi'])
    except KeyError as e:
        raise UsageError(f"Preset {info['id']!r} is missing field {e}")
    witnesses = data.get('witnesses')
    if witnesses is not None:
        if len(witnesses) != 2:
            raise UsageError(f"Preset {info['id']!r} needs exactly two witnesses")
        witnesses = (SchwarzSpec.parse(witnesses[0]), SchwarzSpec.parse(witnesses[1]))
    return ClassPreset(info['id'], data.get('name', info['id']), data.get('description', ''),
                       info.get('category', ''), params, phi, psi, witnesses)


def load_presets(presets_dir: Optional[str] = None) -> Dict[str, ClassPreset]:
    """All class presets listed in index.json, in index order."""
    presets_dir, index_data = _load_index(presets_dir)
    presets = {}
    for info in index_data.get('presets', []):
        preset_file = os.path.join(presets_dir, info['file'])
        if not os.path.exists(preset_file):
            logger.warning(f"Preset file missing: {preset_file}")
            continue
        presets[info['id']] = _parse_preset(info, _read_json(preset_file))
    logger.debug(f"Loaded {len(presets)} preset(s) from {presets_dir}")
    return presets


def load_preset(preset_id: str, presets_dir: Optional[str] = None) -> ClassPreset:
    presets = load_presets(presets_dir)
    if preset_id not in presets:
        raise PresetNotFoundError(f"Unknown preset {preset_id!r}; available: {', '.join(presets)}")
    return presets[preset_id]


SUITE_DEFAULTS: Dict[str, Any] = {
    'schema_version': SUITE_SCHEMA_VERSION,
    'presets': 'all',
    'kinds': list(CLASS_KINDS),
    'order': VERIFY_ORDER,
    'samples': DEFAULT_SAMPLES,
    'seed': 0,
    'backend': 'auto',
    'tolerance': DEFAULT_TOLERANCE,
    'workers': DEFAULT_WORKERS,
    'lattice': True,
    'lemma2_checks': True,
}


def default_suite_path(presets_dir: Optional[str] = None) -> str:
    presets_dir, index_data = _load_index(presets_dir)
    suites = index_data.get('suites', [])
    if not suites:
        raise UsageError(f"No suites listed in {os.path.join(presets_dir, 'index.json')}")
    return os.path.join(presets_dir, suites[0]['file'])


def _positive_int(config: Dict[str, Any], key: str, minimum: int):
    value = config[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise UsageError(f"Suite key {key!r} must be an integer >= {minimum}, got {value!r}")


def load_suite_config(source: Union[str, Dict[str, Any], None] = None,
                      presets_dir: Optional[str] = None) -> Dict[str, Any]:
    """
    Suite configuration with defaults filled in.

    ``source`` is a path to a JSON file, an already-parsed mapping, or None for
    the default suite listed in the presets index.
    ``workers`` may be "auto" for one worker process per CPU.

    Raises:
        UsageError: Unknown keys, a wrong schema_version or ill-typed values
    """
    if source is None:
        source = default_suite_path(presets_dir)
    raw = _read_json(source) if isinstance(source, str) else dict(source)

    unknown = sorted(set(raw) - set(SUITE_DEFAULTS))
    if unknown:
        raise UsageError(f"Unknown suite config key(s): {', '.join(unknown)}")
    config = {**SUITE_DEFAULTS, **raw}

    if config['schema_version'] != SUITE_SCHEMA_VERSION:
        raise UsageError(f"Unsupported suite schema_version {config['schema_version']!r}; expected {SUITE_SCHEMA_VERSION}")
    if config['presets'] != 'all' and not (isinstance(config['presets'], list)
                                          and all(isinstance(p, str) for p in config['presets'])):
        raise UsageError(f"Suite key 'presets' must be \"all\" or a list of preset ids, got {config['presets']!r}")
    if not isinstance(config['kinds'], list) or not config['kinds'] or set(config['kinds']) - set(CLASS_KINDS):
        raise UsageError(f"Suite key 'kinds' must be a nonempty subset of {list(CLASS_KINDS)}, got {config['kinds']!r}")
    _positive_int(config, 'order', 4)
    _positive_int(config, 'samples', 1)
    _positive_int(config, 'seed', 0)
    if config['workers'] == AUTO_WORKERS:
        config['workers'] = os.cpu_count() or 1
    _positive_int(config, 'workers', 1)
    if config['backend'] not in BACKEND_CHOICES:
        raise UsageError(f"Suite key 'backend' must be one of {BACKEND_CHOICES}, got {config['backend']!r}")
    if isinstance(config['tolerance'], bool) or not isinstance(config['tolerance'], (int, float)) or config['tolerance'] <= 0:
        raise UsageError(f"Suite key 'tolerance' must be a positive number, got {config['tolerance']!r}")
    config['tolerance'] = float(config['tolerance'])
    for key in ('lattice', 'lemma2_checks'):
        if not isinstance(config[key], bool):
            raise UsageError(f"Suite key {key!r} must be true or false, got {config[key]!r}")
    return config


@dataclass
class SuiteReport:
    config: Dict[str, Any]
    reports: List[VerificationReport] = field(default_factory=list)
    lattice: Optional[LatticeReport] = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports) and (self.lattice is None or self.lattice.passed)

    @property
    def violation_count(self) -> int:
        return sum(len(r.violations) for r in self.reports)


def run_suite(config: Union[str, Dict[str, Any], None] = None,
              presets_dir: Optional[str] = None) -> SuiteReport:
    """
    Run every (preset, kind) verification a suite config names, then the lattice.
    Presets pinned to a witness pair run a single sample.

    Args:
        config: Suite config path, mapping, or None for the default suite
        presets_dir: Directory holding ``index.json``; None for the bundled one

    Returns:
        Reports in (preset, kind) order and the lattice report when enabled

    Raises:
        UsageError: Invalid config or an unknown preset id
    """
    config = load_suite_config(config, presets_dir)
    presets = load_presets(presets_dir)
    if config['presets'] == 'all':
        selected = list(presets.values())
    else:
        missing = [p for p in config['presets'] if p not in presets]
        if missing:
            raise PresetNotFoundError(f"Unknown preset(s) in suite: {', '.join(missing)}")
        selected = [presets[p] for p in config['presets']]

    logger.info(f"Running suite over {len(selected)} preset(s), kinds {config['kinds']}")
    suite = SuiteReport(config)
    for preset in selected:
        for kind in config['kinds']:
            cfg = VerificationConfig(
                spec=preset.spec(kind),
                order=config['order'],
                sample_count=1 if preset.witnesses else config['samples'],
                seed=config['seed'],
                backend=config['backend'],
                tolerance=config['tolerance'],
                workers=config['workers'],
                witnesses=preset.witnesses,
                lemma2_checks=config['lemma2_checks'],
                preset=preset.id,
            )
            suite.reports.append(verify_config(cfg))
    if config['lattice']:
        suite.lattice = verify_specialization_lattice()
    logger.info(f"Suite finished: passed={suite.passed}, violations={suite.violation_count}")
    return suite

"""
Coefficient Bounds

Exact closed forms of every coefficient bound for the comprehensive classes and
their classical specializations, plus the earlier Janowski-type bounds they
improve on. All values are returned with the bracket already divided out, so
the statement read off is always |a_n| <= value.

Bounds depend on φ and ψ only through |φ'(0)| and |ψ'(0)|; ``params_for``
extracts those from a ``ClassSpec``.

Usage:
    from bounds import BoundParams, thm1_bound, bound_table

    thm1_bound(BoundParams(lam=1, delta=0, phi1=2, psi1=2), 5)   # Fraction(1)
    rows = bound_table(['cor1', 'thmA'], {'lam': 0, 'A': 1, 'B': 0}, range(2, 6))
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Tuple, Union

from membership import K_CLASS, ClassSpec, OperatorParams, d_k, d_s
from schlicht_classes import PhiFamily, lemma3_bound, lemma4_bound, prime0_abs, rising_factorial
from series_core import DomainError, UsageError, exact_rational

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]


def _nonnegative(value, name: str) -> Number:
    if not isinstance(value, float):
        value = exact_rational(value)
    if value < 0:
        raise DomainError(f"{name} must be nonnegative, got {value}")
    return value


def _check_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise UsageError(f"Coefficient bounds are defined for n >= 2, got {n!r}")
    return n


@dataclass(frozen=True)
class BoundParams:
    """λ, δ and the two derivative moduli |φ'(0)|, |ψ'(0)|."""

    lam: Fraction
    delta: Fraction
    phi1: Number
    psi1: Number

    def __post_init__(self):
        prm = OperatorParams(self.lam, self.delta)
        object.__setattr__(self, 'lam', prm.lam)
        object.__setattr__(self, 'delta', prm.delta)
        object.__setattr__(self, 'phi1', _nonnegative(self.phi1, '|phi\'(0)|'))
        object.__setattr__(self, 'psi1', _nonnegative(self.psi1, '|psi\'(0)|'))

    @property
    def operator(self) -> OperatorParams:
        return OperatorParams(self.lam, self.delta)


def _tail(psi1: Number, n: int) -> Number:
    """1 + sum_{k=1}^{n-2} prod_{j=0}^{n-k-2} (j + psi1) / (n-k-1)!; 1 at n = 2."""
    total = Fraction(1) if not isinstance(psi1, float) else 1.0
    for k in range(1, n - 1):
        m = n - k - 1
        total += rising_factorial(psi1, m) / math.factorial(m)
    return total


def thm1_bound(p: BoundParams, n: int) -> Number:
    """
    Bound for K_{λ,δ}(φ, ψ): [lemma3 + (|φ'(0)|/n)·tail] / D_K(n).

    Args:
        p: λ, δ and the derivative magnitudes |φ'(0)|, |ψ'(0)|
        n: Coefficient index, at least 2

    Returns:
        The bound on |a_n|, exact for rational parameters

    Raises:
        UsageError: If n < 2
    """
    n = _check_n(n)
    numerator = lemma3_bound(p.psi1, n) + p.phi1 * _tail(p.psi1, n) / n
    return numerator / d_k(n, p.operator)


def thm2_bound(p: BoundParams, n: int) -> Number:
    """Bound for S_{λ,δ}(φ, ψ): [lemma4 + |φ'(0)|·tail] / D_S(n)."""
    n = _check_n(n)
    numerator = lemma4_bound(p.psi1, n) + p.phi1 * _tail(p.psi1, n)
    return numerator / d_s(n, p.operator)


def cor_QK_bound(phi1, psi1, n: int) -> Number:
    """Quasi-convex QK(φ, ψ): (1/n²)[prod (j + ψ1)/(n-1)! + φ1·tail]."""
    n = _check_n(n)
    phi1, psi1 = _nonnegative(phi1, 'phi1'), _nonnegative(psi1, 'psi1')
    return (rising_factorial(psi1, n - 1) / math.factorial(n - 1) + phi1 * _tail(psi1, n)) / (n * n)


def cor_C_bound(phi1, psi1, n: int) -> Number:
    """Close-to-convex C(φ, ψ)."""
    n = _check_n(n)
    phi1, psi1 = _nonnegative(phi1, 'phi1'), _nonnegative(psi1, 'psi1')
    return rising_factorial(psi1, n - 1) / math.factorial(n) + phi1 * _tail(psi1, n) / n


def cor_CS_bound(phi1, psi1, n: int) -> Number:
    """Close-to-starlike CS(φ, ψ)."""
    n = _check_n(n)
    phi1, psi1 = _nonnegative(phi1, 'phi1'), _nonnegative(psi1, 'psi1')
    return rising_factorial(psi1, n - 1) / math.factorial(n - 1) + phi1 * _tail(psi1, n)


def cor_libera_bound(alpha, beta, n: int) -> Fraction:
    """
    Close-to-convex of order (α, β):
    2 (3 - 2β)(4 - 2β)...(n - 2β) [n(1 - α) + (α - β)] / n!.
    """
    n = _check_n(n)
    alpha, beta = exact_rational(alpha), exact_rational(beta)
    if not (0 <= alpha < 1 and 0 <= beta < 1):
        raise DomainError(f"Orders need 0 <= alpha, beta < 1, got alpha={alpha}, beta={beta}")
    product = Fraction(1)
    for j in range(3, n + 1):
        product *= j - 2 * beta
    return 2 * product * (n * (1 - alpha) + (alpha - beta)) / math.factorial(n)


def _janowski_args(lam, A, B) -> Tuple[Fraction, Fraction, Fraction]:
    lam = OperatorParams(lam, 0).lam
    fam = PhiFamily.janowski(A, B)
    return lam, fam.A, fam.B


def cor1_QCV_bound(lam, A, B, n: int) -> Fraction:
    """Q_CV(λ, A, B): (1 + (n-1)(A-B)/2) / (1 + (n-1)λ)."""
    n = _check_n(n)
    lam, A, B = _janowski_args(lam, A, B)
    return (1 + (n - 1) * (A - B) / 2) / (1 + (n - 1) * lam)


def cor2_QST_bound(lam, A, B, n: int) -> Fraction:
    """Q_ST(λ, A, B): n times the Q_CV bound."""
    return n * cor1_QCV_bound(lam, A, B, n)


def thmA_bound(lam, A, B, n: int) -> Fraction:
    """Earlier Q_CV bound: (1 + (n-1)(A-B)/(1-B)) / (1 + (n-1)λ)."""
    n = _check_n(n)
    lam, A, B = _janowski_args(lam, A, B)
    return (1 + (n - 1) * (A - B) / (1 - B)) / (1 + (n - 1) * lam)


def thmB_bound(lam, A, B, n: int) -> Fraction:
    """Earlier Q_ST bound: n times ``thmA_bound``."""
    return n * thmA_bound(lam, A, B, n)


@dataclass
class BoundRow:
    """Bound values at one n, keyed by formula id (or ratio name) in insertion order."""

    n: int
    values: Dict[str, Number] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Number:
        return self.values[key]


def improvement_holds(row: BoundRow) -> bool:
    return row['cor1'] <= row['thmA'] and row['cor2'] <= row['thmB']


def compare_improvement(lam, A, B, n_max: int) -> List[BoundRow]:
    """
    Rows n = 2..n_max of cor1, cor2, thmA, thmB and the ratios thmA/cor1,
    thmB/cor2. Every row satisfies cor1 <= thmA and cor2 <= thmB, with
    equality exactly when B = -1.

    Args:
        lam: λ in [0, 1]
        A: Janowski A
        B: Janowski B, -1 <= B < A
        n_max: Last n, at least 2

    Returns:
        One ``BoundRow`` per n, keyed cor1, cor2, thmA, thmB, ratio_A, ratio_B
    """
    _check_n(n_max)
    rows = []
    for n in range(2, n_max + 1):
        cor1, cor2 = cor1_QCV_bound(lam, A, B, n), cor2_QST_bound(lam, A, B, n)
        thm_a, thm_b = thmA_bound(lam, A, B, n), thmB_bound(lam, A, B, n)
        row = BoundRow(n, {'cor1': cor1, 'cor2': cor2, 'thmA': thm_a, 'thmB': thm_b,
                           'ratio_A': thm_a / cor1, 'ratio_B': thm_b / cor2})
        if not improvement_holds(row):
            logger.error(f"Improvement fails at n={n} for lambda={lam}, A={A}, B={B}")
        rows.append(row)
    return rows


@dataclass(frozen=True)
class Formula:
    """A registered bound: its evaluator, the parameter names it reads and a short label."""

    evaluate: Callable[..., Number]
    params: Tuple[str, ...]
    label: str


def _thm1(lam, delta, phi1, psi1, n):
    return thm1_bound(BoundParams(lam, delta, phi1, psi1), n)


def _thm2(lam, delta, phi1, psi1, n):
    return thm2_bound(BoundParams(lam, delta, phi1, psi1), n)


FORMULAS: Dict[str, Formula] = {
    'thm1': Formula(_thm1, ('lam', 'delta', 'phi1', 'psi1'), 'K_{lambda,delta}(phi,psi)'),
    'thm2': Formula(_thm2, ('lam', 'delta', 'phi1', 'psi1'), 'S_{lambda,delta}(phi,psi)'),
    'cor_qk': Formula(cor_QK_bound, ('phi1', 'psi1'), 'QK(phi,psi)'),
    'cor_c': Formula(cor_C_bound, ('phi1', 'psi1'), 'C(phi,psi)'),
    'cor_cs': Formula(cor_CS_bound, ('phi1', 'psi1'), 'CS(phi,psi)'),
    'cor_libera': Formula(cor_libera_bound, ('alpha', 'beta'), 'C(alpha,beta)'),
    'cor1': Formula(cor1_QCV_bound, ('lam', 'A', 'B'), 'Q_CV(lambda,A,B)'),
    'cor2': Formula(cor2_QST_bound, ('lam', 'A', 'B'), 'Q_ST(lambda,A,B)'),
    'thmA': Formula(thmA_bound, ('lam', 'A', 'B'), 'Q_CV(lambda,A,B), earlier bound'),
    'thmB': Formula(thmB_bound, ('lam', 'A', 'B'), 'Q_ST(lambda,A,B), earlier bound'),
    'lemma3': Formula(lemma3_bound, ('psi1',), 'K(psi)'),
    'lemma4': Formula(lemma4_bound, ('psi1',), 'S*(psi)'),
}


def evaluate_formula(formula_id: str, params: Dict[str, object], n: int) -> Number:
    """
    Evaluate a registered formula; parameters it does not read are ignored.

    Raises:
        UsageError: Unknown formula id or a missing parameter
    """
    formula = FORMULAS.get(formula_id)
    if formula is None:
        raise UsageError(f"Unknown formula {formula_id!r}; expected one of {sorted(FORMULAS)}")
    missing = [name for name in formula.params if params.get(name) is None]
    if missing:
        raise UsageError(f"Formula {formula_id} needs parameter(s): {', '.join(missing)}")
    return formula.evaluate(*[params[name] for name in formula.params], n)


def bound_table(formula_ids: Iterable[str], params: Dict[str, object], ns: Iterable[int]) -> List[BoundRow]:
    """
    One ``BoundRow`` per n with a value for each requested formula.

    Args:
        formula_ids: Ids from ``FORMULAS``
        params: Parameter values by name; unused ones are ignored
        ns: Coefficient indices

    Returns:
        Rows in the order of ``ns``

    Raises:
        UsageError: Unknown formula id or a missing parameter
        DomainError: Parameters outside a formula's domain
    """
    formula_ids = list(formula_ids)
    if not formula_ids:
        raise UsageError("At least one formula id is required")
    rows = []
    for n in ns:
        rows.append(BoundRow(n, {fid: evaluate_formula(fid, params, n) for fid in formula_ids}))
    logger.debug(f"Evaluated {len(formula_ids)} formula(s) over {len(rows)} value(s) of n")
    return rows


def params_for(spec: ClassSpec) -> BoundParams:
    return BoundParams(spec.params.lam, spec.params.delta, prime0_abs(spec.phi), prime0_abs(spec.psi))


def bound_for(spec: ClassSpec, n: int) -> Number:
    """thm1_bound for K-class specs, thm2_bound for S-class specs."""
    if spec.kind == K_CLASS:
        return thm1_bound(params_for(spec), n)
    return thm2_bound(params_for(spec), n)

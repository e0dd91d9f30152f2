"""
Comprehensive Class Members

Implements the two differential operators

    L_K f = f' + (λ - δ + 2λδ) z f'' + λδ z² f'''
    L_S f = (1 - λ + δ) f + (λ - δ) z f' + λδ z² f''

and manufactures members of K_{λ,δ}(φ, ψ) (L_K f / g' ≺ φ with g ∈ K(ψ)) and
S_{λ,δ}(φ, ψ) (L_S f / g ≺ φ with g ∈ S*(ψ)) by solving the coefficient
recurrences those definitions impose. Two independent Schwarz witnesses are
always taken: one for g, one for the subordinate quotient.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from schlicht_classes import (
    GeneratedMember,
    PhiFamily,
    SchwarzSpec,
    make_convex,
    make_starlike,
    subordinate_series,
)
from series_core import (
    DEFAULT_ORDER,
    Backend,
    DomainError,
    Scalar,
    Series,
    UsageError,
    exact_rational,
    resolve_backend,
    ser_add,
    ser_mul,
    ser_scale,
    ser_shift_down,
    ser_z_shift_derivative,
    to_scalar,
)

logger = logging.getLogger(__name__)

K_CLASS = 'K'
S_CLASS = 'S'
CLASS_KINDS = (K_CLASS, S_CLASS)


@dataclass(frozen=True)
class OperatorParams:
    """Operator parameters with 0 <= δ <= λ <= 1."""

    lam: Fraction
    delta: Fraction

    def __post_init__(self):
        lam, delta = exact_rational(self.lam), exact_rational(self.delta)
        object.__setattr__(self, 'lam', lam)
        object.__setattr__(self, 'delta', delta)
        if not (0 <= delta <= lam <= 1):
            raise DomainError(f"Operator parameters need 0 <= delta <= lambda <= 1, got lambda={lam}, delta={delta}")

    @property
    def mu(self) -> Fraction:
        """Coefficient of z f'' in L_K."""
        return self.lam - self.delta + 2 * self.lam * self.delta

    @property
    def product(self) -> Fraction:
        return self.lam * self.delta


def d_k(n: int, prm: OperatorParams) -> Fraction:
    """1 + (n-1)(λ - δ + 2λδ) + (n-1)(n-2)λδ."""
    return 1 + (n - 1) * prm.mu + (n - 1) * (n - 2) * prm.product


def d_s(n: int, prm: OperatorParams) -> Fraction:
    """1 - λ + δ + n(λ - δ) + n(n-1)λδ; equal to d_k(n) as a polynomial."""
    return 1 - prm.lam + prm.delta + n * (prm.lam - prm.delta) + n * (n - 1) * prm.product


@dataclass(frozen=True)
class ClassSpec:
    """Full description of K_{λ,δ}(φ, ψ) or S_{λ,δ}(φ, ψ)."""

    kind: str
    params: OperatorParams
    phi: PhiFamily
    psi: PhiFamily

    def __post_init__(self):
        if self.kind not in CLASS_KINDS:
            raise UsageError(f"Class kind must be one of {CLASS_KINDS}, got {self.kind!r}")

    @property
    def requires_float(self) -> bool:
        return self.phi.requires_float or self.psi.requires_float

    @property
    def label(self) -> str:
        return (f"{self.kind}[lambda={self.params.lam},delta={self.params.delta}]"
                f"({self.phi.describe()},{self.psi.describe()})")

    def with_kind(self, kind: str) -> 'ClassSpec':
        return ClassSpec(kind, self.params, self.phi, self.psi)


@dataclass(frozen=True)
class MemberWitness:
    """A constructed class member f with its auxiliary g and subordinate quotient."""

    f: Series
    g: GeneratedMember
    quotient: Series
    spec: ClassSpec
    quotient_witness: SchwarzSpec

    @property
    def witnesses(self):
        return self.g.witness, self.quotient_witness


def operator_LK(f: Series, prm: OperatorParams) -> Series:
    """
    f' + (λ - δ + 2λδ) z f'' + λδ z² f''', built from z^k f^(k) so only the top
    coefficient is lost to truncation. [z^{n-1}] L_K f = n d_k(n) a_n.
    """
    if f.order < 3:
        raise UsageError(f"operator_LK needs order >= 3, got {f.order}")
    shifted = ser_add(ser_z_shift_derivative(f, 1),
                      ser_add(ser_scale(ser_z_shift_derivative(f, 2), prm.mu),
                              ser_scale(ser_z_shift_derivative(f, 3), prm.product)))
    return ser_shift_down(shifted)


def operator_LS(f: Series, prm: OperatorParams) -> Series:
    """(1 - λ + δ) f + (λ - δ) z f' + λδ z² f''; [z^n] L_S f = d_s(n) a_n."""
    if f.order < 2:
        raise UsageError(f"operator_LS needs order >= 2, got {f.order}")
    return ser_add(ser_scale(f, 1 - prm.lam + prm.delta),
                   ser_add(ser_scale(ser_z_shift_derivative(f, 1), prm.lam - prm.delta),
                           ser_scale(ser_z_shift_derivative(f, 2), prm.product)))


def make_K_member(spec: ClassSpec, w_g: SchwarzSpec, w_p: SchwarzSpec,
                  N: int = DEFAULT_ORDER, backend: Optional[Backend] = None) -> MemberWitness:
    """
    Member f of K_{λ,δ}(φ, ψ).

    g = make_convex(ψ, w_g), p = φ∘w_p, then n d_k(n) a_n = [z^{n-1}] (p g'),
    read off as [z^n] (p · z g') so nothing is lost to truncation.

    Args:
        spec: A K-kind class
        w_g: Schwarz witness for g
        w_p: Schwarz witness for the quotient p
        N: Truncation order
        backend: Requested backend; None picks exact when the inputs allow it

    Returns:
        The member f with its g, p and witnesses

    Raises:
        UsageError: If ``spec`` is not a K-kind class
    """
    if spec.kind != K_CLASS:
        raise UsageError(f"make_K_member needs a {K_CLASS}-class spec, got {spec.kind!r}")
    backend = resolve_backend(backend, spec, w_g, w_p)
    g = make_convex(spec.psi, w_g, N, backend)
    p = subordinate_series(spec.phi, w_p, N, backend)
    rhs = ser_mul(p, ser_z_shift_derivative(g.series, 1))

    coeffs = [to_scalar(0, backend)]
    for n in range(1, N + 1):
        coeffs.append(rhs.coeffs[n] / to_scalar(n * d_k(n, spec.params), backend))
    f = Series(tuple(coeffs), backend)
    logger.debug(f"Built K member for {spec.label} with witnesses {w_g.describe()}, {w_p.describe()}")
    return MemberWitness(f, g, p, spec, w_p)


def make_S_member(spec: ClassSpec, w_g: SchwarzSpec, w_q: SchwarzSpec,
                  N: int = DEFAULT_ORDER, backend: Optional[Backend] = None) -> MemberWitness:
    """
    Member f of S_{λ,δ}(φ, ψ).

    g = make_starlike(ψ, w_g), q = φ∘w_q, then d_s(n) a_n = [z^n] (q g).
    """
    if spec.kind != S_CLASS:
        raise UsageError(f"make_S_member needs an {S_CLASS}-class spec, got {spec.kind!r}")
    backend = resolve_backend(backend, spec, w_g, w_q)
    g = make_starlike(spec.psi, w_g, N, backend)
    q = subordinate_series(spec.phi, w_q, N, backend)
    rhs = ser_mul(q, g.series)

    coeffs = [to_scalar(0, backend)]
    for n in range(1, N + 1):
        coeffs.append(rhs.coeffs[n] / to_scalar(d_s(n, spec.params), backend))
    f = Series(tuple(coeffs), backend)
    logger.debug(f"Built S member for {spec.label} with witnesses {w_g.describe()}, {w_q.describe()}")
    return MemberWitness(f, g, q, spec, w_q)


def make_member(spec: ClassSpec, w_g: SchwarzSpec, w_q: SchwarzSpec,
                N: int = DEFAULT_ORDER, backend: Optional[Backend] = None) -> MemberWitness:
    """Dispatch on the class kind."""
    if spec.kind == K_CLASS:
        return make_K_member(spec, w_g, w_q, N, backend)
    return make_S_member(spec, w_g, w_q, N, backend)


def k_coefficient_from_sum(b: Series, c: Series, n: int, prm: OperatorParams) -> Scalar:
    """a_n = (n b_n + sum_{k=1}^{n-1} (n - k) c_k b_{n-k}) / (n d_k(n))."""
    acc = n * b.coeffs[n]
    for k in range(1, n):
        acc = acc + (n - k) * c.coeffs[k] * b.coeffs[n - k]
    return acc / to_scalar(n * d_k(n, prm), b.backend)


def s_coefficient_from_sum(b: Series, c: Series, n: int, prm: OperatorParams) -> Scalar:
    """a_n = (b_n + sum_{k=1}^{n-1} c_k b_{n-k}) / d_s(n)."""
    acc = b.coeffs[n]
    for k in range(1, n):
        acc = acc + c.coeffs[k] * b.coeffs[n - k]
    return acc / to_scalar(d_s(n, prm), b.backend)


def named_class(name: str, lam=None, A=None, B=None, alpha=None, beta=None,
                phi: Optional[PhiFamily] = None, psi: Optional[PhiFamily] = None) -> ClassSpec:
    """
    ClassSpec of a classical class.

    QK, C, CS take arbitrary φ, ψ; CCV, CST, QCV take Janowski (A, B);
    Q_CV, Q_ST take (λ, A, B); libera takes (α, β); close-to-convex,
    close-to-starlike and quasi-convex take nothing.
    """
    key = (name or '').strip()
    half = PhiFamily.half_plane()
    if key in ('QK', 'C', 'CS'):
        if phi is None or psi is None:
            raise UsageError(f"Class {key} needs both phi and psi")
        if key == 'QK':
            return ClassSpec(K_CLASS, OperatorParams(1, 0), phi, psi)
        if key == 'C':
            return ClassSpec(K_CLASS, OperatorParams(0, 0), phi, psi)
        return ClassSpec(S_CLASS, OperatorParams(0, 0), phi, psi)
    if key in ('CCV', 'CST', 'QCV', 'Q_CV', 'Q_ST'):
        if A is None or B is None:
            raise UsageError(f"Class {key} needs Janowski parameters A and B")
        janowski = PhiFamily.janowski(A, B)
        if key == 'CCV':
            return ClassSpec(K_CLASS, OperatorParams(0, 0), janowski, half)
        if key == 'CST':
            return ClassSpec(S_CLASS, OperatorParams(0, 0), janowski, half)
        if key == 'QCV':
            return ClassSpec(K_CLASS, OperatorParams(1, 0), janowski, half)
        if lam is None:
            raise UsageError(f"Class {key} needs lambda")
        kind = K_CLASS if key == 'Q_CV' else S_CLASS
        return ClassSpec(kind, OperatorParams(lam, 0), janowski, half)
    if key == 'libera':
        if alpha is None or beta is None:
            raise UsageError("Class libera needs alpha and beta")
        return ClassSpec(K_CLASS, OperatorParams(0, 0), PhiFamily.order_alpha(alpha), PhiFamily.order_alpha(beta))
    if key == 'close-to-convex':
        return ClassSpec(K_CLASS, OperatorParams(0, 0), half, half)
    if key == 'close-to-starlike':
        return ClassSpec(S_CLASS, OperatorParams(0, 0), half, half)
    if key == 'quasi-convex':
        return ClassSpec(K_CLASS, OperatorParams(1, 0), half, half)
    raise UsageError(f"Unknown class name {name!r}")

"""
Comparison Functions, Schwarz Witnesses and Generated Members

Builds the data every class definition is made of:
- comparison functions φ, ψ from the Janowski family and its special cases (PhiFamily)
- Schwarz functions ω from a finite catalogue of disk self-maps (SchwarzSpec)
- members g of S*(ψ) and K(ψ), solved from z g'(z) = g(z) ψ(ω(z))

Members are always manufactured from a Schwarz witness, so the defining
subordination holds by construction; nothing here tests membership of an
arbitrary series.

Usage:
    from schlicht_classes import PhiFamily, SchwarzSpec, make_starlike

    koebe = make_starlike(PhiFamily.half_plane(), SchwarzSpec.monomial(1), 8)
    # koebe.series.coeffs == (0, 1, 2, 3, 4, 5, 6, 7, 8)
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

import numpy as np

from series_core import (
    DEFAULT_ORDER,
    Backend,
    DomainError,
    GaussianRational,
    Scalar,
    Series,
    UsageError,
    exact_rational,
    parse_rational,
    resolve_backend,
    scalar_abs2,
    ser_compose,
    ser_div,
    ser_scale,
    to_scalar,
)

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]

PHI_KINDS = ('janowski', 'order', 'halfplane', 'user')
SCHWARZ_KINDS = ('rotation', 'monomial', 'blaschke', 'zero')

# Sampler ranges for randomized suites
MAX_MONOMIAL_DEGREE = 4
BLASCHKE_RADIUS = 0.9
BLASCHKE_GRID = 64

_ANGLE_RE = re.compile(r'^([+-]?\d*)\*?pi(?:/(\d+))?$')


@dataclass(frozen=True)
class PhiFamily:
    """A comparison function φ with φ(0) = 1 and convex image in the right half-plane."""

    kind: str
    A: Optional[Fraction] = None
    B: Optional[Fraction] = None
    alpha: Optional[Fraction] = None
    series: Optional[Series] = None

    def __post_init__(self):
        if self.kind not in PHI_KINDS:
            raise UsageError(f"Unknown comparison family {self.kind!r}; expected one of {PHI_KINDS}")
        if self.kind == 'janowski':
            A, B = exact_rational(self.A), exact_rational(self.B)
            object.__setattr__(self, 'A', A)
            object.__setattr__(self, 'B', B)
            if not (-1 <= B < A <= 1):
                raise DomainError(f"Janowski parameters need -1 <= B < A <= 1, got A={A}, B={B}")
        elif self.kind == 'order':
            alpha = exact_rational(self.alpha)
            object.__setattr__(self, 'alpha', alpha)
            if not (0 <= alpha < 1):
                raise DomainError(f"Order alpha needs 0 <= alpha < 1, got {alpha}")
        elif self.kind == 'user':
            if not isinstance(self.series, Series):
                raise UsageError("A user comparison family needs a Series")
            if self.series.coeffs[0] != 1:
                logger.warning(f"User comparison series has phi(0) = {self.series.coeffs[0]}, expected 1")

    @classmethod
    def janowski(cls, A, B) -> 'PhiFamily':
        return cls('janowski', A=A, B=B)

    @classmethod
    def order_alpha(cls, alpha) -> 'PhiFamily':
        return cls('order', alpha=alpha)

    @classmethod
    def half_plane(cls) -> 'PhiFamily':
        return cls('halfplane')

    @classmethod
    def user(cls, series: Series) -> 'PhiFamily':
        """Accepted unchecked: convexity and positivity of the range are the caller's claim."""
        return cls('user', series=series)

    @property
    def is_builtin(self) -> bool:
        return self.kind != 'user'

    @property
    def requires_float(self) -> bool:
        return self.kind == 'user' and self.series.backend is Backend.FLOAT

    def janowski_params(self) -> Tuple[Fraction, Fraction]:
        """(A, B) such that φ(z) = (1 + Az)/(1 + Bz)."""
        if self.kind == 'janowski':
            return self.A, self.B
        if self.kind == 'order':
            return 1 - 2 * self.alpha, Fraction(-1)
        if self.kind == 'halfplane':
            return Fraction(1), Fraction(-1)
        raise UsageError("A user comparison series has no Janowski parameters")

    def image_disk(self) -> Optional[Tuple[Fraction, Fraction]]:
        """
        Centre and radius of φ(𝔻) when it is a disk (|B| < 1).

        Returns None for B = -1, where the image is the half-plane
        Re w > (1 - A)/2.
        """
        A, B = self.janowski_params()
        if B == -1:
            return None
        return (1 - A * B) / (1 - B * B), (A - B) / (1 - B * B)

    def leftmost_real_part(self) -> Fraction:
        """Infimum of Re φ over the disk."""
        A, B = self.janowski_params()
        if B == -1:
            return (1 - A) / 2
        centre, radius = self.image_disk()
        return centre - radius

    def has_positive_real_part(self) -> bool:
        if not self.is_builtin:
            raise UsageError("Positivity of a user comparison series cannot be certified")
        return self.leftmost_real_part() >= 0

    def describe(self) -> str:
        if self.kind == 'janowski':
            return f"janowski:{self.A}:{self.B}"
        if self.kind == 'order':
            return f"order:{self.alpha}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> 'PhiFamily':
        """Parse ``halfplane``, ``janowski:A:B`` or ``order:alpha``."""
        parts = [p.strip() for p in (text or '').strip().lower().split(':')]
        if parts == ['halfplane']:
            return cls.half_plane()
        if parts[0] == 'janowski' and len(parts) == 3:
            return cls.janowski(parse_rational(parts[1]), parse_rational(parts[2]))
        if parts[0] == 'order' and len(parts) == 2:
            return cls.order_alpha(parse_rational(parts[1]))
        raise UsageError(f"Cannot parse comparison family {text!r} (halfplane | janowski:A:B | order:alpha)")


def _parse_angle(text: str) -> float:
    cleaned = text.strip().replace(' ', '').lower()
    match = _ANGLE_RE.match(cleaned)
    if match:
        factor = match.group(1)
        factor = -1.0 if factor == '-' else float(factor) if factor not in ('', '+') else 1.0
        return factor * math.pi / float(match.group(2) or 1)
    try:
        return float(cleaned)
    except ValueError:
        raise UsageError(f"Cannot parse rotation angle {text!r}")


def parse_point(text: str) -> Scalar:
    """``re`` or ``re,im``: exact when both parts are rational literals."""
    parts = [p.strip() for p in text.split(',')]
    if len(parts) not in (1, 2):
        raise UsageError(f"Cannot parse point {text!r} (re or re,im)")
    try:
        return GaussianRational(*[parse_rational(p) for p in parts])
    except UsageError:
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise UsageError(f"Cannot parse point {text!r}")
        return complex(values[0], values[1] if len(values) == 2 else 0.0)


@dataclass(frozen=True)
class SchwarzSpec:
    """
    A Schwarz function ω (ω(0) = 0, |ω| < 1 on the disk) from a finite catalogue:
    rotation e^{iθ}z, monomial z^m, single Blaschke factor z(z + c)/(1 + c̄z), or zero.
    """

    kind: str
    theta: float = 0.0
    m: int = 1
    c: Optional[Scalar] = None

    def __post_init__(self):
        if self.kind not in SCHWARZ_KINDS:
            raise UsageError(f"Unknown Schwarz variant {self.kind!r}; expected one of {SCHWARZ_KINDS}")
        if self.kind == 'monomial' and (not isinstance(self.m, int) or self.m < 1):
            raise DomainError(f"Monomial Schwarz function needs an integer m >= 1, got {self.m!r}")
        if self.kind == 'rotation' and not math.isfinite(self.theta):
            raise DomainError(f"Rotation angle must be finite, got {self.theta!r}")
        if self.kind == 'blaschke':
            c = self.c
            if not isinstance(c, (GaussianRational, complex)):
                c = to_scalar(c, Backend.EXACT if not isinstance(c, float) else Backend.FLOAT)
                object.__setattr__(self, 'c', c)
            if not scalar_abs2(c) < 1:
                raise DomainError(f"Blaschke factor needs |c| < 1, got c = {c}")

    @classmethod
    def rotation(cls, theta: float) -> 'SchwarzSpec':
        return cls('rotation', theta=float(theta))

    @classmethod
    def monomial(cls, m: int) -> 'SchwarzSpec':
        return cls('monomial', m=m)

    @classmethod
    def blaschke(cls, c) -> 'SchwarzSpec':
        return cls('blaschke', c=c)

    @classmethod
    def zero(cls) -> 'SchwarzSpec':
        return cls('zero')

    def _quarter_turns(self) -> Optional[int]:
        k = round(self.theta / (math.pi / 2))
        if abs(self.theta - k * math.pi / 2) <= 1e-12 * max(1.0, abs(self.theta)):
            return k % 4
        return None

    @property
    def requires_float(self) -> bool:
        if self.kind == 'rotation':
            return self._quarter_turns() is None
        if self.kind == 'blaschke':
            return isinstance(self.c, complex)
        return False

    def rotation_unit(self, backend: Backend) -> Scalar:
        """e^{iθ}, exact for quarter turns."""
        quarter = self._quarter_turns()
        if quarter is not None:
            unit = (GaussianRational(1), GaussianRational(0, 1),
                    GaussianRational(-1), GaussianRational(0, -1))[quarter]
            return unit if backend is Backend.EXACT else complex(unit)
        if backend is Backend.EXACT:
            raise UsageError(f"Rotation by {self.theta!r} rad is only representable in floating point")
        return complex(np.exp(1j * self.theta))

    def describe(self) -> str:
        if self.kind == 'rotation':
            return f"rotation:{self.theta!r}"
        if self.kind == 'monomial':
            return f"monomial:{self.m}"
        if self.kind == 'blaschke':
            if isinstance(self.c, GaussianRational):
                return f"blaschke:{self.c.re},{self.c.im}"
            return f"blaschke:{self.c.real!r},{self.c.imag!r}"
        return 'zero'

    @classmethod
    def parse(cls, text: str) -> 'SchwarzSpec':
        """Parse ``zero``, ``monomial:m``, ``rotation:theta`` (radians or k*pi/d) or ``blaschke:re[,im]``."""
        head, _, arg = (text or '').strip().lower().partition(':')
        if head == 'zero' and not arg:
            return cls.zero()
        if head == 'monomial' and arg:
            try:
                return cls.monomial(int(arg))
            except ValueError:
                raise UsageError(f"Monomial degree must be an integer, got {arg!r}")
        if head == 'rotation' and arg:
            return cls.rotation(_parse_angle(arg))
        if head == 'blaschke' and arg:
            return cls.blaschke(parse_point(arg))
        raise UsageError(f"Cannot parse Schwarz function {text!r} (zero | monomial:m | rotation:theta | blaschke:re,im)")


@dataclass(frozen=True)
class GeneratedMember:
    """A normalized member of S*(ψ) or K(ψ) together with the witness that built it."""

    series: Series
    witness: SchwarzSpec
    class_tag: str
    psi: PhiFamily


def phi_series(fam: PhiFamily, N: int = DEFAULT_ORDER, backend: Backend = Backend.EXACT) -> Series:
    """
    Taylor coefficients of φ: for Janowski, 1 + sum (A - B)(-B)^{n-1} z^n.

    Args:
        fam: Comparison family (built-in or user series)
        N: Truncation order
        backend: Backend of the result

    Returns:
        φ truncated at order N, with φ(0) = 1
    """
    backend = Backend(backend)
    if fam.kind == 'user':
        series = fam.series.truncate(N)
        return series.to_backend(backend)
    A, B = fam.janowski_params()
    coeffs = [Fraction(1)] + [(A - B) * (-B) ** (n - 1) for n in range(1, N + 1)]
    return Series.from_values(coeffs, N, Backend.EXACT).to_backend(backend)


def prime0_abs(fam: PhiFamily) -> Number:
    """|φ'(0)|, exact for built-in families (A - B)."""
    if fam.is_builtin:
        A, B = fam.janowski_params()
        return A - B
    c1 = fam.series.coeffs[1]
    if isinstance(c1, GaussianRational) and c1.is_real:
        return abs(c1.re)
    return abs(complex(c1))


def schwarz_series(w: SchwarzSpec, N: int = DEFAULT_ORDER, backend: Backend = Backend.EXACT) -> Series:
    """Taylor coefficients of ω; ω(0) = 0 for every variant."""
    backend = Backend(backend)
    if w.kind == 'zero':
        return Series.zero(N, backend)
    if w.kind == 'monomial':
        return Series.monomial(w.m, N, backend)
    if w.kind == 'rotation':
        return Series.monomial(1, N, backend, coeff=w.rotation_unit(backend))

    c = to_scalar(w.c, backend)
    numerator = Series.from_values([0, c, 1], N, backend)
    denominator = Series.from_values([1, c.conjugate()], N, backend)
    return ser_div(numerator, denominator)


def subordinate_series(fam: PhiFamily, w: SchwarzSpec, N: int = DEFAULT_ORDER,
                       backend: Optional[Backend] = None) -> Series:
    """
    φ∘ω, a series subordinate to φ by construction.

    Built-in families are Möbius maps, so the composition is the quotient
    (1 + Aω)/(1 + Bω); user series go through ``ser_compose``.
    """
    backend = resolve_backend(backend, fam, w)
    omega = schwarz_series(w, N, backend)
    if fam.is_builtin:
        A, B = fam.janowski_params()
        one = Series.one(N, backend)
        return ser_div(one + ser_scale(omega, A), one + ser_scale(omega, B))
    return ser_compose(phi_series(fam, N, backend), omega)


def make_starlike(psi: PhiFamily, w: SchwarzSpec, N: int = DEFAULT_ORDER,
                  backend: Optional[Backend] = None) -> GeneratedMember:
    """
    Member g of S*(ψ) with z g'/g = ψ∘ω.

    With ψ∘ω = 1 + sum p_k z^k and b_1 = 1:
    (n - 1) b_n = sum_{k=1}^{n-1} p_k b_{n-k}  for n >= 2.

    Args:
        psi: Comparison family of the class
        w: Schwarz witness
        N: Truncation order, at least 1
        backend: Requested backend; None picks exact when the inputs allow it

    Returns:
        The normalized member (b_0 = 0, b_1 = 1) tagged 'starlike'
    """
    if N < 1:
        raise UsageError(f"Members need truncation order >= 1, got {N}")
    backend = resolve_backend(backend, psi, w)
    p = subordinate_series(psi, w, N, backend).coeffs
    zero, one = to_scalar(0, backend), to_scalar(1, backend)

    b = [zero, one]
    for n in range(2, N + 1):
        acc = zero
        for k in range(1, n):
            pk = p[k]
            if pk:
                acc = acc + pk * b[n - k]
        b.append(acc / (n - 1))
    return GeneratedMember(Series(tuple(b), backend), w, 'starlike', psi)


def make_convex(psi: PhiFamily, w: SchwarzSpec, N: int = DEFAULT_ORDER,
                backend: Optional[Backend] = None) -> GeneratedMember:
    """Member g of K(ψ): z g' is the starlike member built from the same witness, so b_n = s_n / n."""
    s = make_starlike(psi, w, N, backend).series
    coeffs = [s.coeffs[0]] + [s.coeffs[n] / n for n in range(1, N + 1)]
    return GeneratedMember(Series(tuple(coeffs), s.backend), w, 'convex', psi)


def rising_factorial(x: Number, m: int) -> Number:
    """x (x + 1) ... (x + m - 1); the empty product is 1."""
    result = Fraction(1) if isinstance(x, (int, Fraction)) else 1.0
    for j in range(m):
        result *= j + x
    return result


def _check_bound_args(psi1: Number, n: int) -> Number:
    if not isinstance(n, int) or n < 2:
        raise UsageError(f"Coefficient bounds are defined for n >= 2, got {n!r}")
    if not isinstance(psi1, float):
        psi1 = exact_rational(psi1)
    if psi1 < 0:
        raise DomainError(f"|psi'(0)| must be nonnegative, got {psi1}")
    return psi1


def lemma3_bound(psi_prime0_abs: Number, n: int) -> Number:
    """Coefficient bound for K(ψ): prod_{j=0}^{n-2} (j + |ψ'(0)|) / n!."""
    psi1 = _check_bound_args(psi_prime0_abs, n)
    return rising_factorial(psi1, n - 1) / math.factorial(n)


def lemma4_bound(psi_prime0_abs: Number, n: int) -> Number:
    """Coefficient bound for S*(ψ): prod_{j=0}^{n-2} (j + |ψ'(0)|) / (n - 1)!."""
    psi1 = _check_bound_args(psi_prime0_abs, n)
    return rising_factorial(psi1, n - 1) / math.factorial(n - 1)


def sample_schwarz(rng: np.random.Generator, exact: bool = True) -> SchwarzSpec:
    """
    Draw a Schwarz witness: uniform over variants, θ uniform on [0, 2π),
    m uniform on 1..4, c uniform in the disk of radius 9/10.

    With ``exact`` the Blaschke parameter is snapped to a 1/64 grid so it stays
    in the exact backend.
    """
    kind = SCHWARZ_KINDS[int(rng.integers(len(SCHWARZ_KINDS)))]
    if kind == 'rotation':
        return SchwarzSpec.rotation(float(rng.uniform(0.0, 2 * math.pi)))
    if kind == 'monomial':
        return SchwarzSpec.monomial(int(rng.integers(1, MAX_MONOMIAL_DEGREE + 1)))
    if kind == 'blaschke':
        radius = BLASCHKE_RADIUS * math.sqrt(float(rng.random()))
        angle = float(rng.uniform(0.0, 2 * math.pi))
        x, y = radius * math.cos(angle), radius * math.sin(angle)
        if exact:
            return SchwarzSpec.blaschke(GaussianRational(Fraction(round(x * BLASCHKE_GRID), BLASCHKE_GRID),
                                                         Fraction(round(y * BLASCHKE_GRID), BLASCHKE_GRID)))
        return SchwarzSpec.blaschke(complex(x, y))
    return SchwarzSpec.zero()

"""
Truncated Taylor Series Core

Exact and floating truncated power-series arithmetic for functions analytic in
the open unit disk. Every other module builds on the ``Series`` type defined here.

Two scalar backends are supported:
- exact: ``GaussianRational`` values (a pair of ``Fraction``s), closed and error-free
- float: Python ``complex`` values, with numpy kernels for products and evaluation

Usage:
    from series_core import Series, ser_div

    geom = ser_div(Series.one(4), Series.from_values([1, -1], order=4))
    # geom.coeffs == (1, 1, 1, 1, 1)
"""

from __future__ import annotations

import logging
import math
import os
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Iterator, Optional, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_ORDER = int(os.getenv('SCHLICHT_ORDER', '32'))
DEFAULT_TOLERANCE = float(os.getenv('SCHLICHT_TOLERANCE', '1e-9'))

_RATIONAL_RE = re.compile(r'^[+-]?\d+(/[+-]?\d+)?$')


class SchlichtError(Exception):
    """Base exception for the library."""
    pass


class UsageError(SchlichtError):
    """Raised when an operation is called with arguments it does not accept."""
    pass


class DomainError(SchlichtError):
    """Raised when parameters fall outside their mathematical domain."""
    pass


class SeriesMismatchError(UsageError):
    """Raised when two series differ in truncation order or backend."""
    pass


class SingularDivisionError(DomainError):
    """Raised when dividing by a series whose constant term vanishes."""
    pass


class CompositionDomainError(DomainError):
    """Raised when composing with an inner series whose constant term is nonzero."""
    pass


def parse_rational(text: str) -> Fraction:
    """
    Parse an exact rational literal.

    Accepts integers and ``p/q`` forms. Decimal literals are rejected so that
    no precision is lost silently at the boundary.

    Raises:
        UsageError: If the text is not an integer or ``p/q`` literal
    """
    cleaned = (text or '').strip().replace(' ', '')
    if not _RATIONAL_RE.match(cleaned):
        raise UsageError(f"Not an exact rational literal: {text!r} (use p/q or an integer)")
    try:
        return Fraction(cleaned)
    except ZeroDivisionError:
        raise UsageError(f"Zero denominator in {text!r}")


def exact_rational(value: Any) -> Fraction:
    """Coerce ints, rationals and ``p/q`` strings to ``Fraction``; reject floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise UsageError(f"Not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise UsageError(f"Not an exact rational value: {value!r}")


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ('re', 'im')

    def __init__(self, re: Any = 0, im: Any = 0):
        self.re = exact_rational(re)
        self.im = exact_rational(im)

    @staticmethod
    def _lift(other: Any) -> Optional['GaussianRational']:
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) + other
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) - other
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        if isinstance(other, (float, complex)):
            return other - complex(self)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) * other
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return GaussianRational(self.re * o.re)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) / other
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("GaussianRational division by zero")
            return GaussianRational(self.re / o.re, self.im / o.re)
        d = o.abs2()
        return GaussianRational((self.re * o.re + self.im * o.im) / d,
                                (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        if isinstance(other, (float, complex)):
            return other / complex(self)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return 1 / (self ** -exponent)
        result, base = GaussianRational(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, complex):
            return complex(self) == other
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return math.sqrt(self.abs2())

    def __repr__(self) -> str:
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        sign = '+' if self.im >= 0 else '-'
        return f"({self.re}{sign}{abs(self.im)}i)"

    def conjugate(self) -> 'GaussianRational':
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return not self.im


class Backend(str, Enum):
    EXACT = 'exact'
    FLOAT = 'float'


Scalar = Union[GaussianRational, complex]

_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


def to_scalar(value: Any, backend: Backend) -> Scalar:
    """Convert a number (or ``p/q`` string) to a scalar of the given backend."""
    if backend is Backend.EXACT:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (float, complex)):
            raise UsageError(f"Floating value {value!r} cannot enter an exact-backend series")
        return GaussianRational(value)
    if isinstance(value, complex):
        return value
    if isinstance(value, str):
        value = parse_rational(value)
    return complex(value)


def scalar_abs2(value: Scalar) -> Union[Fraction, float]:
    """Squared modulus: exact for ``GaussianRational``, float otherwise."""
    if isinstance(value, GaussianRational):
        return value.abs2()
    value = complex(value)
    return value.real * value.real + value.imag * value.imag


def resolve_backend(requested: Optional[Backend], *inputs: Any) -> Backend:
    """
    Pick the backend for a computation.

    Any input exposing ``requires_float = True`` (an irrational rotation, a
    floating user series) forces the floating backend. An explicit exact
    request that cannot be honoured is a usage error.
    """
    needs_float = any(getattr(item, 'requires_float', False) for item in inputs)
    if requested is None:
        if needs_float:
            logger.debug("Inputs are not exactly representable; using floating backend")
        return Backend.FLOAT if needs_float else Backend.EXACT
    requested = Backend(requested)
    if requested is Backend.EXACT and needs_float:
        raise UsageError("Exact backend requested but some inputs are only representable in floating point")
    return requested


@dataclass(frozen=True)
class Series:
    """Truncated Taylor series: ``coeffs[k]`` is the coefficient of z^k, k = 0..order."""

    coeffs: Tuple[Scalar, ...]
    backend: Backend = Backend.EXACT
    # The top coefficient is undefined by truncation (set to zero).
    lossy_top: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.coeffs:
            raise UsageError("A series needs at least one coefficient")
        backend = Backend(self.backend)
        object.__setattr__(self, 'backend', backend)
        object.__setattr__(self, 'coeffs', tuple(to_scalar(c, backend) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_values(cls, values: Iterable[Any], order: Optional[int] = None,
                    backend: Backend = Backend.EXACT) -> 'Series':
        """Build a series from leading coefficients, zero-padded (or cut) to ``order``."""
        values = list(values)
        if order is None:
            order = len(values) - 1
        if order < 0:
            raise UsageError(f"Truncation order must be nonnegative, got {order}")
        zero = _zero(backend)
        values = values[:order + 1] + [zero] * (order + 1 - len(values))
        return cls(tuple(values), backend)

    @classmethod
    def zero(cls, order: int, backend: Backend = Backend.EXACT) -> 'Series':
        return cls.from_values([], order, backend)

    @classmethod
    def constant(cls, value: Any, order: int, backend: Backend = Backend.EXACT) -> 'Series':
        return cls.from_values([value], order, backend)

    @classmethod
    def one(cls, order: int, backend: Backend = Backend.EXACT) -> 'Series':
        return cls.constant(1, order, backend)

    @classmethod
    def monomial(cls, degree: int, order: int, backend: Backend = Backend.EXACT,
                 coeff: Any = 1) -> 'Series':
        """c·z^degree truncated at ``order`` (the zero series when degree > order)."""
        values = [0] * (order + 1)
        if degree <= order:
            values[degree] = coeff
        return cls.from_values(values, order, backend)

    @classmethod
    def identity(cls, order: int, backend: Backend = Backend.EXACT) -> 'Series':
        return cls.monomial(1, order, backend)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.coeffs)

    def is_normalized(self) -> bool:
        """True when the series has the form z + a_2 z^2 + ... ."""
        return self.order >= 1 and self.coeffs[0] == 0 and self.coeffs[1] == 1

    def to_backend(self, backend: Backend) -> 'Series':
        backend = Backend(backend)
        if backend is self.backend:
            return self
        if backend is Backend.EXACT:
            raise UsageError("Floating series cannot be converted to the exact backend")
        return Series(tuple(complex(c) for c in self.coeffs), backend, self.lossy_top)

    def truncate(self, order: int) -> 'Series':
        """Cut to ``order`` (or zero-pad when ``order`` is larger)."""
        if order == self.order:
            return self
        lossy = self.lossy_top and order >= self.order
        padded = Series.from_values(self.coeffs, order, self.backend)
        return Series(padded.coeffs, self.backend, lossy)

    def __add__(self, other: 'Series') -> 'Series':
        return ser_add(self, other)

    def __sub__(self, other: 'Series') -> 'Series':
        return ser_sub(self, other)

    def __mul__(self, other: 'Series') -> 'Series':
        return ser_mul(self, other)

    def __truediv__(self, other: 'Series') -> 'Series':
        return ser_div(self, other)

    def __neg__(self) -> 'Series':
        return ser_scale(self, -1)

    def __call__(self, z0: Any) -> Scalar:
        return ser_eval(self, z0)


def _zero(backend: Backend) -> Scalar:
    return _ZERO if Backend(backend) is Backend.EXACT else 0j


def _check_pair(f: Series, g: Series, op: str):
    if f.order != g.order:
        raise SeriesMismatchError(f"{op}: order mismatch ({f.order} vs {g.order})")
    if f.backend is not g.backend:
        raise SeriesMismatchError(f"{op}: backend mismatch ({f.backend.value} vs {g.backend.value})")


def _is_zero(value: Scalar, backend: Backend, tolerance: float) -> bool:
    if backend is Backend.EXACT:
        return not value
    return abs(value) <= tolerance


def ser_add(f: Series, g: Series) -> Series:
    """Coefficientwise sum."""
    _check_pair(f, g, 'ser_add')
    return Series(tuple(a + b for a, b in zip(f.coeffs, g.coeffs)), f.backend,
                  f.lossy_top or g.lossy_top)


def ser_sub(f: Series, g: Series) -> Series:
    """Coefficientwise difference."""
    _check_pair(f, g, 'ser_sub')
    return Series(tuple(a - b for a, b in zip(f.coeffs, g.coeffs)), f.backend,
                  f.lossy_top or g.lossy_top)


def ser_scale(f: Series, c: Any) -> Series:
    """Multiply every coefficient by the scalar ``c``."""
    c = to_scalar(c, f.backend)
    return Series(tuple(c * a for a in f.coeffs), f.backend, f.lossy_top)


def ser_mul(f: Series, g: Series) -> Series:
    """
    Truncated Cauchy product: out[n] = sum_{k<=n} f[k] g[n-k].

    Args:
        f: Left factor
        g: Right factor, same order and backend as ``f``

    Returns:
        The product at the common order; lossy if either factor is
    """
    _check_pair(f, g, 'ser_mul')
    n_max = f.order
    lossy = f.lossy_top or g.lossy_top
    if f.backend is Backend.FLOAT:
        prod = np.convolve(np.asarray(f.coeffs, dtype=complex),
                           np.asarray(g.coeffs, dtype=complex))[:n_max + 1]
        return Series(tuple(complex(x) for x in prod), Backend.FLOAT, lossy)

    fc, gc = f.coeffs, g.coeffs
    out = []
    for n in range(n_max + 1):
        acc = _ZERO
        for k in range(n + 1):
            a = fc[k]
            if a:
                b = gc[n - k]
                if b:
                    acc = acc + a * b
        out.append(acc)
    return Series(tuple(out), Backend.EXACT, lossy)


def ser_div(f: Series, g: Series, tolerance: float = DEFAULT_TOLERANCE) -> Series:
    """
    Truncated quotient h = f / g, solved coefficient by coefficient.

    Args:
        f: Numerator
        g: Denominator with a nonvanishing constant term
        tolerance: Zero threshold for a floating g[0]

    Returns:
        h with h * g == f up to the common order

    Raises:
        SingularDivisionError: If g[0] is zero (exact) or within tolerance of zero (float)
    """
    _check_pair(f, g, 'ser_div')
    g0 = g.coeffs[0]
    if _is_zero(g0, g.backend, tolerance):
        raise SingularDivisionError(f"Division by a series with constant term {g0}")

    gc = g.coeffs
    h = []
    for n in range(f.order + 1):
        acc = f.coeffs[n]
        for k in range(1, n + 1):
            gk = gc[k]
            if gk:
                acc = acc - gk * h[n - k]
        h.append(acc if g0 == 1 else acc / g0)
    return Series(tuple(h), f.backend, f.lossy_top or g.lossy_top)


def ser_compose(outer: Series, inner: Series, tolerance: float = DEFAULT_TOLERANCE) -> Series:
    """
    Truncated composition outer(inner(z)) by Horner accumulation over powers of inner.

    Args:
        outer: Series applied last
        inner: Series with inner[0] == 0
        tolerance: Zero threshold for a floating inner[0]

    Returns:
        outer(inner(z)) at the common order; lossy if either input is

    Raises:
        CompositionDomainError: If inner[0] != 0
    """
    _check_pair(outer, inner, 'ser_compose')
    if not _is_zero(inner.coeffs[0], inner.backend, tolerance):
        raise CompositionDomainError(f"Inner series must vanish at 0, got constant term {inner.coeffs[0]}")

    order, backend = outer.order, outer.backend
    result = Series((outer.coeffs[order],) + (_zero(backend),) * order, backend, outer.lossy_top)
    for k in range(order - 1, -1, -1):
        result = ser_mul(result, inner)
        result = Series((result.coeffs[0] + outer.coeffs[k],) + result.coeffs[1:], backend,
                        result.lossy_top or outer.lossy_top)
    return result


def ser_derivative(f: Series) -> Series:
    """
    f'(z) at the same order. The top coefficient depends on the unknown
    f[order + 1], so it is set to zero and the result is flagged ``lossy_top``.
    """
    zero = _zero(f.backend)
    out = [(k + 1) * f.coeffs[k + 1] for k in range(f.order)] + [zero]
    return Series(tuple(out), f.backend, lossy_top=True)


def ser_z_shift_derivative(f: Series, k: int) -> Series:
    """z^k f^(k)(z): out[n] = n(n-1)...(n-k+1) f[n]. Lossless in truncation."""
    if k not in (1, 2, 3):
        raise UsageError(f"ser_z_shift_derivative supports k in {{1, 2, 3}}, got {k}")
    zero = _zero(f.backend)
    out = [math.perm(n, k) * c if n >= k else zero for n, c in enumerate(f.coeffs)]
    return Series(tuple(out), f.backend, f.lossy_top)


def ser_shift_down(f: Series, tolerance: float = DEFAULT_TOLERANCE) -> Series:
    """f(z)/z for a series vanishing at 0; the freed top coefficient is lossy."""
    if not _is_zero(f.coeffs[0], f.backend, tolerance):
        raise UsageError(f"ser_shift_down needs f(0) = 0, got {f.coeffs[0]}")
    return Series(f.coeffs[1:] + (_zero(f.backend),), f.backend, lossy_top=True)


def ser_eval(f: Series, z0: Any) -> Scalar:
    """Horner evaluation of the truncated polynomial (meaningful for |z0| < 1)."""
    if f.backend is Backend.FLOAT:
        return complex(np.polyval(np.asarray(f.coeffs[::-1], dtype=complex), complex(z0)))
    z0 = to_scalar(z0, Backend.EXACT)
    acc = _ZERO
    for c in reversed(f.coeffs):
        acc = acc * z0 + c
    return acc


def series_close(f: Series, g: Series, tolerance: float = DEFAULT_TOLERANCE,
                 upto: Optional[int] = None) -> bool:
    """Componentwise comparison within ``tolerance`` (absolute and relative), any backends."""
    if f.order != g.order:
        return False
    stop = f.order + 1 if upto is None else upto + 1
    x = np.asarray([complex(c) for c in f.coeffs[:stop]], dtype=complex)
    y = np.asarray([complex(c) for c in g.coeffs[:stop]], dtype=complex)
    return bool(np.allclose(x, y, rtol=tolerance, atol=tolerance))

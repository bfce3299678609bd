"""Time algebra of the input-variation transform.

With ``N`` bare steps, unit step time ``T_t`` and variation interval ``T``::

    f(P)    = N * T_t
    f(P, T) = N * T_t / (1 - 2**(-T / c))
    f_n     = N * T_t / T

Everything is exact ``Fraction`` arithmetic.  ``2**(-e)`` is rational only
for integer ``e``; elsewhere values are returned as rigorous enclosures
(:class:`Interval`) whose width is below the requested precision.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Union

import mpmath.ctx_iv
from mpmath.libmp import to_rational

from .errors import ConsistencyError, DomainError
from .machine import INF, STEP_TIME, is_inf

DEFAULT_PRECISION = Fraction(1, 2**64)
_MAX_BITS = 1 << 16


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


Exact = Union[Fraction, float]  # a Fraction, or INF
Value = Union[Fraction, float, Interval]


def _as_interval(v: Value) -> Interval:
    return v if isinstance(v, Interval) else Interval(Fraction(v), Fraction(v))


_local = threading.local()


def _ctx(bits: int):
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = mpmath.ctx_iv.MPIntervalContext()
    ctx.prec = bits
    return ctx


def _to_interval(x) -> Interval:
    lo, hi = x._mpi_
    return Interval(Fraction(*to_rational(lo)), Fraction(*to_rational(hi)))


def _iv(ctx, q: Fraction):
    return ctx.mpf(q.numerator) / q.denominator


def enclose(
    expr: Callable, precision: Fraction = DEFAULT_PRECISION, excluding: tuple = ()
) -> Interval:
    """Evaluate ``expr(ctx)`` in interval arithmetic, raising the working
    precision until the enclosure is narrower than ``precision`` and leaves
    out every point in ``excluding`` (the caller knows the value differs)."""
    bits = 96
    while True:
        result = _to_interval(expr(_ctx(bits)))
        if result.width <= precision and not any(x in result for x in excluding):
            return result
        if bits >= _MAX_BITS:
            raise DomainError(f"cannot reach precision {float(precision):g}")
        bits *= 2


def _exact_pow2_neg(e: Fraction) -> Fraction | None:
    if e.denominator == 1 and e >= 0:
        return Fraction(1, 2 ** int(e))
    return None


def _positive(name: str, v) -> Fraction | float:
    if is_inf(v):
        return INF
    if isinstance(v, float):
        raise TypeError(f"{name} must be exact (int or Fraction), got float {v!r}")
    v = Fraction(v)
    if v <= 0:
        raise DomainError(f"{name} must be positive, got {v}")
    return v


@dataclass(frozen=True)
class TransformParams:
    """Bare step count, unit step time, variation interval and constant c.

    ``c`` defaults to 1; :meth:`step_scaled` sets ``c = N * T_t``, the choice
    under which the four cases have closed-form bounds.
    """

    N: int
    T: Exact
    T_t: Fraction = Fraction(STEP_TIME)
    c: Fraction = Fraction(1)
    precision: Fraction = field(default=DEFAULT_PRECISION, compare=False)

    def __post_init__(self) -> None:
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 0:
            raise DomainError(f"N must be a nonnegative int, got {self.N!r}")
        if not is_inf(self.T) and Fraction(self.T) == 0:
            raise DomainError("T = 0 is outside the domain (0, inf]")
        object.__setattr__(self, "T", _positive("T", self.T))
        object.__setattr__(self, "T_t", _positive("T_t", self.T_t))
        object.__setattr__(self, "c", _positive("c", self.c))
        if is_inf(self.T_t) or is_inf(self.c):
            raise DomainError("T_t and c must be finite")

    @classmethod
    def step_scaled(cls, N: int, T: Exact, **kw) -> "TransformParams":
        T_t = Fraction(kw.pop("T_t", STEP_TIME))
        if N < 1:
            raise DomainError("c = N*T_t needs N >= 1")
        return cls(N, T, T_t=T_t, c=N * T_t, **kw)

    @property
    def bare_time(self) -> Fraction:
        return self.N * self.T_t


@dataclass(frozen=True)
class TransformValue:
    """``f(P, T)``: exact ``value`` when known, always a rigorous ``bounds``."""

    value: Fraction | None
    bounds: Interval
    limit_case: str | None = None

    @property
    def exact(self) -> bool:
        return self.value is not None


def _f_from_exponent(bare: Fraction, exponent: Exact, precision: Fraction) -> TransformValue:
    if is_inf(exponent):
        return TransformValue(bare, _as_interval(bare), "convergence")
    p = _exact_pow2_neg(exponent)
    if p is not None or bare == 0:
        value = bare if bare == 0 else bare / (1 - p)
        return TransformValue(value, _as_interval(value))
    # 2**-e is irrational here, so f differs from the case boundaries f(P) and 2 f(P)
    bounds = enclose(
        lambda ctx: _iv(ctx, bare) / (1 - ctx.mpf(2) ** (-_iv(ctx, exponent))),
        precision,
        excluding=(bare, 2 * bare),
    )
    return TransformValue(None, bounds)


def f_transform(p: TransformParams) -> TransformValue:
    """Transformed run time ``N*T_t / (1 - 2**(-T/c))``; equals ``N*T_t`` at T = inf."""
    if is_inf(p.T):
        return _f_from_exponent(p.bare_time, INF, p.precision)
    v = _f_from_exponent(p.bare_time, p.T / p.c, p.precision)
    if p.T == STEP_TIME:
        return TransformValue(v.value, v.bounds, "minimal-interval")
    return v


class Region(str, Enum):
    CONVERGENCE = "convergence"
    SUBCRITICAL = "subcritical"
    INFLECTION = "inflection"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class NormalizedValue:
    value: Fraction
    region: Region


def region_of(fn: Fraction) -> Region:
    if fn == 0:
        return Region.CONVERGENCE
    if fn < 1:
        return Region.SUBCRITICAL
    if fn == 1:
        return Region.INFLECTION
    return Region.SUPERCRITICAL


def f_normalized(p: TransformParams) -> NormalizedValue:
    """``f_n = N*T_t / T``, zero at T = inf."""
    value = Fraction(0) if is_inf(p.T) else p.bare_time / p.T
    return NormalizedValue(value, region_of(value))


def inflection_threshold(N: int) -> int:
    """The variation interval at which ``f_n`` equals 1."""
    if N < 1:
        raise DomainError("inflection threshold needs N >= 1")
    return N * STEP_TIME


class Case(Enum):
    I = 1
    II = 2
    III = 3
    IV = 4


def classify_case(fn: NormalizedValue, f: TransformValue, fP: Fraction | int) -> Case:
    """Case I-IV from ``f_n``, after checking the matching bound on ``f``.

    Valid for ``c = N*T_t``.  Raises :class:`ConsistencyError` if the bound
    fails or the enclosure of ``f`` is too wide to decide it.
    """
    fP = Fraction(fP)
    lo, hi = f.bounds.lo, f.bounds.hi
    if fn.value == 0:
        case, ok = Case.I, f.exact and f.value == fP
    elif fn.value < 1:
        case, ok = Case.II, fP < lo and hi < 2 * fP
    elif fn.value == 1:
        case, ok = Case.III, f.exact and f.value == 2 * fP
    else:
        case, ok = Case.IV, lo > 2 * fP
    if not ok:
        raise ConsistencyError(
            f"f_n = {fn.value} puts this in case {case.name}, but f in [{lo}, {hi}] "
            f"does not satisfy its bound relative to f(P) = {fP}"
        )
    return case


# -- alternative parameterizations ---------------------------------------------


@dataclass(frozen=True)
class ParamSubstitution:
    """One operating point expressed in every parameterization.

    ``M = 1 - 2**(-X)`` is the denominator weight, ``scale = 1/M`` the
    multiplicative factor (>= 1), ``X = T/c`` the exponent, and ``frequency``
    is ``1/T``, the rewrite frequency (``F_t = 1/T_t`` is the step clock).
    ``scale`` and ``frequency`` are separate fields, although both are often
    written F.  Irrational coordinates are :class:`Interval` enclosures.
    """

    form: str
    value: Exact
    c: Fraction
    T_t: Fraction
    M: Value
    X: Value
    T: Value
    scale: Value
    frequency: Value

    @property
    def step_frequency(self) -> Fraction:
        return 1 / self.T_t

    def f(self, N: int, via: str, precision: Fraction = DEFAULT_PRECISION) -> Value:
        """Transformed time computed through one parameterization."""
        bare = N * self.T_t
        if via == "M":
            m = self._M_expr()
            if isinstance(m, Fraction):
                return bare / m
            return enclose(lambda ctx: _iv(ctx, bare) / m(ctx), precision)
        if via == "X":
            x = self._X_expr()
            if not callable(x):
                v = _f_from_exponent(bare, x, precision)
                return v.value if v.exact else v.bounds
            return enclose(lambda ctx: _iv(ctx, bare) / (1 - ctx.mpf(2) ** (-x(ctx))), precision)
        if via == "F":
            if isinstance(self.frequency, Interval):
                x = self._X_expr()
                return enclose(
                    lambda ctx: _iv(ctx, bare) / (1 - ctx.mpf(2) ** (-x(ctx))), precision
                )
            T = INF if self.frequency == 0 else 1 / self.frequency
            v = f_transform(TransformParams(N, T, T_t=self.T_t, c=self.c, precision=precision))
            return v.value if v.exact else v.bounds
        raise ValueError(f"unknown parameterization {via!r}")

    def normalized(self, N: int) -> Value:
        """``f_n`` in frequency form: ``N * F_P / F_t``."""
        if isinstance(self.frequency, Interval):
            k = N / self.step_frequency
            return Interval(k * self.frequency.lo, k * self.frequency.hi)
        return N * self.frequency / self.step_frequency

    # Closed-form pieces: a Fraction/INF when exact, else a ctx -> interval builder.

    def _M_expr(self):
        if self.form == "M":
            return Fraction(self.value)
        x = self._X_expr()
        if not callable(x):
            if is_inf(x):
                return Fraction(1)
            p = _exact_pow2_neg(x)
            if p is not None:
                return 1 - p
            return lambda ctx: 1 - ctx.mpf(2) ** (-_iv(ctx, x))
        return lambda ctx: 1 - ctx.mpf(2) ** (-x(ctx))

    def _X_expr(self):
        if self.form == "X":
            return self.value
        if self.form == "F":
            return INF if self.value == 0 else 1 / (self.value * self.c)
        m = Fraction(self.value)
        if m == 1:
            return INF
        k = _dyadic_exponent(1 - m)
        if k is not None:
            return Fraction(k)
        return lambda ctx: -ctx.log(1 - _iv(ctx, m), 2)


def _dyadic_exponent(y: Fraction) -> int | None:
    """k with y == 2**-k, if one exists."""
    if y.numerator == 1 and y.denominator & (y.denominator - 1) == 0:
        return y.denominator.bit_length() - 1
    return None


def _realize(v, precision: Fraction) -> Value:
    if callable(v):
        return enclose(v, precision)
    return v


def substitute_params(
    form: str,
    value,
    *,
    c: Fraction | int = 1,
    T_t: Fraction | int = STEP_TIME,
    precision: Fraction = DEFAULT_PRECISION,
) -> ParamSubstitution:
    """Populate M, X, T, scale and frequency from one of them.

    ``form`` is ``"M"`` (M in (0, 1]), ``"X"`` (X in (0, inf]) or ``"F"``
    (rewrite frequency F_P > 0).
    """
    c, T_t = Fraction(c), Fraction(T_t)
    if c <= 0 or T_t <= 0:
        raise DomainError("c and T_t must be positive")
    if form == "M":
        if is_inf(value):
            raise DomainError("M must be finite")
        value = Fraction(value)
        if not 0 < value <= 1:
            raise DomainError(f"M must lie in (0, 1], got {value}")
    elif form == "X":
        if not is_inf(value):
            value = Fraction(value)
            if value <= 0:
                raise DomainError(f"X must lie in (0, inf], got {value}")
    elif form == "F":
        if is_inf(value):
            raise DomainError("frequency must be finite")
        value = Fraction(value)
        if value <= 0:
            raise DomainError(f"frequency must be positive, got {value}")
    else:
        raise ValueError(f"unknown parameterization {form!r}")

    sub = ParamSubstitution(form, value, c, T_t, None, None, None, None, None)
    M = _realize(sub._M_expr(), precision)
    X = _realize(sub._X_expr(), precision)
    if isinstance(X, Interval):
        T: Value = Interval(X.lo * c, X.hi * c)
    else:
        T = INF if is_inf(X) else X * c
    if isinstance(M, Interval):
        scale: Value = Interval(1 / M.hi, 1 / M.lo)
    else:
        scale = 1 / M
    if form == "F":
        frequency: Value = value
    elif isinstance(T, Interval):
        frequency = Interval(1 / T.hi, 1 / T.lo)
    else:
        frequency = Fraction(0) if is_inf(T) else 1 / T
    return ParamSubstitution(form, value, c, T_t, M, X, T, scale, frequency)

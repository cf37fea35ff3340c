"""Extended-precision Bessel functions and exact angular-momentum algebra.

Bessel functions of the first kind are summed from the ascending power
series in an mpmath context whose precision grows with the argument, so the
alternating series never loses the digits it needs. Each thread owns its own
mpmath context; nothing here touches the global ``mpmath.mp`` state.

Wigner symbols are evaluated from Racah's formulas with Python integers and
:class:`fractions.Fraction`, so selection-rule zeros are exact zeros.
Angular momenta may be ``int`` or ``Fraction``; half-integers may also be
given as floats such as ``0.5``. Internally they are doubled integers.
"""
from __future__ import annotations

import contextvars
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational, Real
from typing import Iterator

from mpmath.ctx_mp import MPContext

from .errors import DomainError, PrecisionOverflowError

__all__ = [
    "PrecisionSettings",
    "precision",
    "get_precision",
    "big_context",
    "required_digits",
    "bessel_j",
    "bessel_j_prime",
    "bessel_j_big",
    "bessel_j_prime_big",
    "WignerSymbol",
    "wigner_3j",
    "wigner_6j",
    "clebsch_gordan",
    "assoc_laguerre_coeffs",
]

MAX_BESSEL_ARGUMENT = 1e5
MAX_LAGUERRE_DEGREE = 200
MIN_DIGITS = 30


@dataclass(frozen=True)
class PrecisionSettings:
    """Working-precision schedule: ``ceil(0.8 x) + extra_digits``, capped at ``max_digits``."""

    extra_digits: int = 40
    max_digits: int = 5000

    def __post_init__(self):
        if self.extra_digits < MIN_DIGITS:
            raise DomainError(f"extra_digits must be >= {MIN_DIGITS}")
        if self.max_digits < self.extra_digits:
            raise DomainError("max_digits must be >= extra_digits")


_settings: contextvars.ContextVar[PrecisionSettings] = contextvars.ContextVar(
    "hydroquad_precision", default=PrecisionSettings()
)


def get_precision() -> PrecisionSettings:
    return _settings.get()


@contextmanager
def precision(extra_digits: int | None = None, max_digits: int | None = None) -> Iterator[PrecisionSettings]:
    """Temporarily change the Bessel precision schedule for the current context."""
    cur = _settings.get()
    new = PrecisionSettings(
        extra_digits=cur.extra_digits if extra_digits is None else extra_digits,
        max_digits=cur.max_digits if max_digits is None else max_digits,
    )
    token = _settings.set(new)
    try:
        yield new
    finally:
        _settings.reset(token)


_local = threading.local()


def _ctx() -> MPContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = MPContext()
    return ctx


@contextmanager
def big_context(digits: int) -> Iterator[MPContext]:
    """Yield this thread's mpmath context set to ``digits`` significant digits."""
    ctx = _ctx()
    old = ctx.prec
    ctx.dps = max(int(digits), MIN_DIGITS)
    try:
        yield ctx
    finally:
        ctx.prec = old


def required_digits(x: float) -> int:
    """Digits needed to sum the Bessel series at argument ``x``; raises past the cap."""
    s = get_precision()
    digits = math.ceil(0.8 * float(x)) + s.extra_digits
    if digits > s.max_digits:
        raise PrecisionOverflowError(
            f"argument {x} needs {digits} digits, above the cap of {s.max_digits}"
        )
    return digits


# --------------------------------------------------------------------------
# Bessel functions of the first kind
# --------------------------------------------------------------------------

def _series(ctx: MPContext, nu, x):
    """J_nu(x) by the ascending series, any real order, in the active precision of ``ctx``."""
    nu = ctx.mpf(nu)
    x = ctx.mpf(x)
    if ctx.isint(nu) and nu < 0:
        n = int(-nu)
        v = _series(ctx, -nu, x)
        return -v if n % 2 else v
    if x == 0:
        if nu == 0:
            return ctx.mpf(1)
        if nu > 0:
            return ctx.mpf(0)
        raise DomainError(f"J_{nu}(0) is infinite for negative non-integer order")
    half = x / 2
    q = half * half
    term = ctx.power(half, nu) * ctx.rgamma(nu + 1)
    total = term
    eps = ctx.eps
    m = 0
    while True:
        m += 1
        term = -term * q / (m * (m + nu))
        total += term
        # the terms grow until m ~ x/2, so only test after the peak
        if m > half and abs(term) <= eps * abs(total):
            break
    return total


def _check_args(order, x, *, allow_negative_order: bool = False) -> None:
    if not isinstance(order, Real) or not isinstance(x, Real):
        raise DomainError("order and argument must be real")
    if order < 0 and not allow_negative_order:
        raise DomainError(f"order must be nonnegative, got {order}")
    if x < 0:
        raise DomainError(f"argument must be nonnegative, got {x}")
    if x > MAX_BESSEL_ARGUMENT:
        raise DomainError(f"argument {x} exceeds {MAX_BESSEL_ARGUMENT:g}")


def bessel_j_big(order, x, ctx: MPContext | None = None):
    """J_order(x) as an mpmath number; any real order.

    When ``ctx`` is given the caller owns the precision (see :func:`big_context`);
    otherwise the schedule from :func:`required_digits` is used and the value
    returned is an mpf of this thread's context.
    """
    _check_args(order, x, allow_negative_order=True)
    if ctx is not None:
        return _series(ctx, order, x)
    with big_context(required_digits(x)) as c:
        return +_series(c, order, x)


def bessel_j(order: float, x: float) -> float:
    """Bessel function of the first kind J_order(x) for real order >= 0 and x >= 0.

    >>> bessel_j(0, 0.0)
    1.0
    >>> round(bessel_j(1, 1.0), 10)
    0.4400505857
    """
    _check_args(order, x)
    with big_context(required_digits(x)) as ctx:
        return float(_series(ctx, order, x))


def _prime(ctx: MPContext, nu, x):
    nu = ctx.mpf(nu)
    x = ctx.mpf(x)
    if nu >= 1 or (ctx.isint(nu) and nu < 0):
        return (_series(ctx, nu - 1, x) - _series(ctx, nu + 1, x)) / 2
    if nu == 0:
        return -_series(ctx, 1, x)
    if x == 0:
        raise DomainError(f"J'_{nu}(0) diverges for 0 < order < 1")
    # J_{nu-1} = (2 nu / x) J_nu - J_{nu+1}
    j_nu = _series(ctx, nu, x)
    j_up = _series(ctx, nu + 1, x)
    j_down = 2 * nu / x * j_nu - j_up
    return (j_down - j_up) / 2


def bessel_j_prime_big(order, x, ctx: MPContext | None = None):
    _check_args(order, x, allow_negative_order=True)
    if ctx is not None:
        return _prime(ctx, order, x)
    with big_context(required_digits(x)) as c:
        return +_prime(c, order, x)


def bessel_j_prime(order: float, x: float) -> float:
    """Derivative dJ_order(x)/dx, computed as (J_{order-1} - J_{order+1}) / 2.

    ``x = 0`` is accepted only where the derivative is finite (order 0 or order >= 1).
    """
    _check_args(order, x)
    with big_context(required_digits(x)) as ctx:
        return float(_prime(ctx, order, x))


# --------------------------------------------------------------------------
# Wigner symbols
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WignerSymbol:
    """Exact value ``sign * sqrt(square)`` with ``square`` a nonnegative rational."""

    sign: int
    square: Fraction

    def __post_init__(self):
        if self.square < 0:
            raise ValueError("square must be nonnegative")
        if self.square == 0:
            object.__setattr__(self, "sign", 0)

    @classmethod
    def zero(cls) -> "WignerSymbol":
        return cls(0, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        with big_context(MIN_DIGITS) as ctx:
            root = ctx.sqrt(ctx.mpf(self.square.numerator) / self.square.denominator)
            return float(self.sign * root)

    def __float__(self) -> float:
        return self.value

    def __neg__(self) -> "WignerSymbol":
        return WignerSymbol(-self.sign, self.square)

    def __mul__(self, other):
        if isinstance(other, WignerSymbol):
            return WignerSymbol(self.sign * other.sign, self.square * other.square)
        if isinstance(other, (int, Fraction)):
            s = (other > 0) - (other < 0)
            return WignerSymbol(self.sign * s, self.square * Fraction(other) ** 2)
        return NotImplemented

    __rmul__ = __mul__


def _twice(j) -> int:
    """Exact doubled value of a half-integer given as int, Fraction or float."""
    if isinstance(j, bool):
        raise DomainError("booleans are not angular momenta")
    if isinstance(j, int):
        return 2 * j
    if isinstance(j, Rational):
        d = Fraction(j) * 2
        if d.denominator != 1:
            raise DomainError(f"{j} is not a half-integer")
        return int(d)
    if isinstance(j, Real):
        d = 2 * float(j)
        if not d.is_integer():
            raise DomainError(f"{j} is not a half-integer")
        return int(d)
    raise DomainError(f"cannot interpret {j!r} as an angular momentum")


def _check_jm(tj: int, tm: int) -> None:
    if tj < 0:
        raise DomainError("angular momentum must be nonnegative")
    if abs(tm) > tj or (tj - tm) % 2:
        raise DomainError(f"projection {tm}/2 inconsistent with j = {tj}/2")


def _triangle(ta: int, tb: int, tc: int) -> bool:
    return abs(ta - tb) <= tc <= ta + tb and (ta + tb + tc) % 2 == 0


_fact = lru_cache(maxsize=None)(math.factorial)


def _delta(ta: int, tb: int, tc: int) -> Fraction:
    return Fraction(
        _fact((ta + tb - tc) // 2) * _fact((ta - tb + tc) // 2) * _fact((-ta + tb + tc) // 2),
        _fact((ta + tb + tc) // 2 + 1),
    )


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@lru_cache(maxsize=65536)
def _w3j(a: int, b: int, c: int, ma: int, mb: int, mc: int) -> WignerSymbol:
    if ma + mb + mc != 0 or not _triangle(a, b, c):
        return WignerSymbol.zero()
    pre = _delta(a, b, c) * (
        _fact((a + ma) // 2) * _fact((a - ma) // 2)
        * _fact((b + mb) // 2) * _fact((b - mb) // 2)
        * _fact((c + mc) // 2) * _fact((c - mc) // 2)
    )
    kmin = max(0, (b - c - ma) // 2, (a - c + mb) // 2)
    kmax = min((a + b - c) // 2, (a - ma) // 2, (b + mb) // 2)
    s = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (
            _fact(k) * _fact((c - b + ma) // 2 + k) * _fact((c - a - mb) // 2 + k)
            * _fact((a + b - c) // 2 - k) * _fact((a - ma) // 2 - k) * _fact((b + mb) // 2 - k)
        )
        s += Fraction(-1 if k % 2 else 1, den)
    if s == 0:
        return WignerSymbol.zero()
    phase = -1 if ((a - b - mc) // 2) % 2 else 1
    return WignerSymbol(phase * _sign(s), pre * s * s)


def wigner_3j(j1, j2, j3, m1, m2, m3) -> WignerSymbol:
    """Exact Wigner 3j symbol (j1 j2 j3; m1 m2 m3) from Racah's formula."""
    t = [_twice(v) for v in (j1, j2, j3, m1, m2, m3)]
    for tj, tm in zip(t[:3], t[3:]):
        _check_jm(tj, tm)
    return _w3j(*t)


@lru_cache(maxsize=65536)
def _w6j(a: int, b: int, c: int, d: int, e: int, f: int) -> WignerSymbol:
    triads = ((a, b, c), (a, e, f), (d, b, f), (d, e, c))
    if not all(_triangle(*t) for t in triads):
        return WignerSymbol.zero()
    pre = Fraction(1)
    for t in triads:
        pre *= _delta(*t)
    alphas = [sum(t) // 2 for t in triads]
    betas = [(a + b + d + e) // 2, (b + c + e + f) // 2, (c + a + f + d) // 2]
    s = Fraction(0)
    for t in range(max(alphas), min(betas) + 1):
        den = 1
        for al in alphas:
            den *= _fact(t - al)
        for be in betas:
            den *= _fact(be - t)
        s += Fraction((-1 if t % 2 else 1) * _fact(t + 1), den)
    if s == 0:
        return WignerSymbol.zero()
    return WignerSymbol(_sign(s), pre * s * s)


def wigner_6j(j1, j2, j3, j4, j5, j6) -> WignerSymbol:
    """Exact Wigner 6j symbol {j1 j2 j3; j4 j5 j6}; zero when any triad fails."""
    t = [_twice(v) for v in (j1, j2, j3, j4, j5, j6)]
    if any(v < 0 for v in t):
        raise DomainError("angular momenta must be nonnegative")
    return _w6j(*t)


def clebsch_gordan(j1, m1, j2, m2, j, m) -> WignerSymbol:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | j m> in the Condon-Shortley convention."""
    t1, tm1, t2, tm2, t, tm = (_twice(v) for v in (j1, m1, j2, m2, j, m))
    for tj, tmm in ((t1, tm1), (t2, tm2), (t, tm)):
        _check_jm(tj, tmm)
    w = _w3j(t1, t2, t, tm1, tm2, -tm)
    if w.is_zero:
        return w
    phase = -1 if ((t1 - t2 + tm) // 2) % 2 else 1
    return WignerSymbol(phase * w.sign, w.square * (t + 1))


# --------------------------------------------------------------------------
# Associated Laguerre polynomials
# --------------------------------------------------------------------------

@lru_cache(maxsize=1024)
def _laguerre(p: int, q: int) -> tuple[Fraction, ...]:
    return tuple(
        Fraction((-1) ** i * math.comb(p + q, p - i), _fact(i)) for i in range(p + 1)
    )


def assoc_laguerre_coeffs(p: int, q: int) -> list[Fraction]:
    """Exact coefficients of L_p^(q)(x), lowest power first."""
    if not isinstance(p, int) or not isinstance(q, int) or p < 0 or q < 0:
        raise DomainError("degree and parameter must be nonnegative integers")
    if p > MAX_LAGUERRE_DEGREE:
        raise DomainError(f"degree {p} exceeds the cap of {MAX_LAGUERRE_DEGREE}")
    return list(_laguerre(p, q))

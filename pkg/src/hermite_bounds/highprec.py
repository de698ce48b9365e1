"""Precision-carrying real and complex numbers on top of mpmath.

Every value remembers its mantissa width in bits.  Arithmetic between two
values runs at the larger of the two precisions, so precision never silently
drops.  Each precision gets its own private ``mpmath.MPContext`` that is
never mutated after creation, which keeps evaluation free of the global
``mp.prec`` state and safe to share between threads.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath

DEFAULT_PRECISION = 384
MIN_PRECISION = 2

# 262 significant decimal digits each.
_PI_DIGITS = (
    "3.14159265358979323846264338327950288419716939937510582097494459230781"
    "6406286208998628034825342117067982148086513282306647093844609550582231"
    "7253594081284811174502841027019385211055596446229489549303819644288109"
    "75665933446128475648233786783165271201909145648566923"
)
_GAMMA_ONE_THIRD_DIGITS = (
    "2.67893853470774763365569294097467764412868937795730110095042832759041"
    "7610167743819540982889041188789419159049200072263335719084569504472259"
    "9777133677084697681672898230500032183425503222471569418175554499527287"
    "84394779441305765828401612319141596466526033727584021"
)
_GAMMA_TWO_THIRDS_DIGITS = (
    "1.35411793942640041694528802815451378551932726605679369839402246796378"
    "2965401742541675834147952972911106434823610033058854142261552586211826"
    "6071911481143228334341559156209175056825923665233852119108580115017701"
    "53617023853945368317754599736504155930691384228034623"
)

# 262 digits carry ~870 bits; keep a guard margin below that.
MAX_CONST_PRECISION = int((len(_PI_DIGITS) - 2) * math.log2(10)) - 16


class DomainError(ValueError):
    """Argument outside the real domain of the requested function."""


class CapabilityError(ValueError):
    """Requested precision exceeds what the embedded constants can supply."""


@functools.lru_cache(maxsize=None)
def context(precision: int) -> mpmath.ctx_mp.MPContext:
    """Return the shared, read-only mpmath context for ``precision`` bits."""
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be >= {MIN_PRECISION} bits, got {precision}")
    ctx = mpmath.MPContext()
    ctx.prec = precision
    return ctx


Scalar = Union[int, Fraction, float, str]


@dataclass(frozen=True)
class BigReal:
    """A real number rounded to ``precision`` mantissa bits."""

    value: mpmath.mpf
    precision: int

    @classmethod
    def of(cls, x: "Scalar | BigReal | mpmath.mpf", precision: int = DEFAULT_PRECISION) -> "BigReal":
        ctx = context(precision)
        if isinstance(x, BigReal):
            return cls(ctx.mpf(x.value), precision)
        if isinstance(x, Fraction):
            return cls(ctx.mpf(x.numerator) / x.denominator, precision)
        return cls(ctx.mpf(x), precision)

    @property
    def ctx(self) -> mpmath.ctx_mp.MPContext:
        return context(self.precision)

    def _coerce(self, other) -> tuple[mpmath.mpf, mpmath.mpf, int]:
        if isinstance(other, BigReal):
            prec = max(self.precision, other.precision)
            ctx = context(prec)
            return ctx.mpf(self.value), ctx.mpf(other.value), prec
        if isinstance(other, (int, Fraction, float)):
            return self.value, BigReal.of(other, self.precision).value, self.precision
        return NotImplemented

    def _binary(self, other, op, reflected=False):
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            return NotImplemented
        a, b, prec = coerced
        if reflected:
            a, b = b, a
        return BigReal(op(a, b), prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: a + b, reflected=True)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: a - b, reflected=True)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: a * b, reflected=True)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, float)) and other == 0 or (
            isinstance(other, BigReal) and not other.value
        ):
            raise ZeroDivisionError("division of BigReal by zero")
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        if not self.value:
            raise ZeroDivisionError("division of BigReal by zero")
        return self._binary(other, lambda a, b: a / b, reflected=True)

    def __pow__(self, exponent):
        if isinstance(exponent, int):
            return BigReal(self.value**exponent, self.precision)
        if isinstance(exponent, Fraction):
            exponent = BigReal.of(exponent, self.precision)
        if isinstance(exponent, BigReal):
            if self.value <= 0:
                raise DomainError("non-integer power of a non-positive number")
            return elem(elem(self, "ln") * exponent, "exp")
        return NotImplemented

    def __neg__(self):
        return BigReal(-self.value, self.precision)

    def __abs__(self):
        return BigReal(abs(self.value), self.precision)

    def _cmp_value(self, other):
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            raise TypeError(f"cannot compare BigReal with {type(other).__name__}")
        return coerced[0], coerced[1]

    def __lt__(self, other):
        a, b = self._cmp_value(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_value(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_value(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_value(other)
        return a >= b

    def __float__(self) -> float:
        return float(self.value)

    def __bool__(self) -> bool:
        return bool(self.value)

    @property
    def sign(self) -> int:
        return (self.value > 0) - (self.value < 0)

    def with_precision(self, precision: int) -> "BigReal":
        return BigReal.of(self, precision)

    def to_decimal_string(self, digits: int = 30) -> str:
        """Lower-case scientific notation with an explicit sign, e.g. ``+1.25e-03``."""
        if not self.value:
            return "+" + "0." + "0" * (digits - 1) + "e+00"
        text = mpmath.libmp.to_str(self.value._mpf_, digits, min_fixed=1, max_fixed=0)
        mantissa, _, exp = text.partition("e")
        sign = "-" if mantissa.startswith("-") else "+"
        mantissa = mantissa.lstrip("+-")
        if "." not in mantissa:
            mantissa += "."
        whole, frac = mantissa.split(".")
        frac = (frac + "0" * digits)[: digits - 1]
        e = int(exp or 0)
        return f"{sign}{whole}.{frac}e{'-' if e < 0 else '+'}{abs(e):02d}"

    def __repr__(self) -> str:
        return f"BigReal({mpmath.libmp.to_str(self.value._mpf_, 20)}, prec={self.precision})"


@dataclass(frozen=True)
class BigComplex:
    re: BigReal
    im: BigReal

    def __post_init__(self):
        if self.re.precision != self.im.precision:
            prec = max(self.re.precision, self.im.precision)
            object.__setattr__(self, "re", self.re.with_precision(prec))
            object.__setattr__(self, "im", self.im.with_precision(prec))

    @classmethod
    def of(cls, re, im=0, precision: int = DEFAULT_PRECISION) -> "BigComplex":
        return cls(BigReal.of(re, precision), BigReal.of(im, precision))

    @classmethod
    def unit(cls, phase: BigReal) -> "BigComplex":
        """exp(i * phase)."""
        return cls(elem(phase, "cos"), elem(phase, "sin"))

    @property
    def precision(self) -> int:
        return self.re.precision

    def _lift(self, other) -> "BigComplex":
        if isinstance(other, BigComplex):
            return other
        if isinstance(other, BigReal):
            return BigComplex(other, BigReal.of(0, other.precision))
        if isinstance(other, (int, Fraction, float)):
            return BigComplex.of(other, 0, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return BigComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return BigComplex(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return BigComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return BigComplex(-self.re, -self.im)

    def conjugate(self) -> "BigComplex":
        return BigComplex(self.re, -self.im)

    def __abs__(self) -> BigReal:
        return elem(self.re * self.re + self.im * self.im, "sqrt")


_ELEMENTARY = ("exp", "ln", "sqrt", "sin", "cos", "sinh", "cosh", "tanh", "atan")


def elem(x: BigReal, fn: str) -> BigReal:
    """Apply the elementary function ``fn`` to ``x`` at ``x``'s precision.

    Raises DomainError for ``ln`` of a non-positive or ``sqrt`` of a negative
    argument instead of returning NaN or a complex value.
    """
    if fn not in _ELEMENTARY:
        raise ValueError(f"unknown elementary function {fn!r}; expected one of {_ELEMENTARY}")
    if fn == "ln" and x.value <= 0:
        raise DomainError(f"ln requires x > 0, got {x!r}")
    if fn == "sqrt" and x.value < 0:
        raise DomainError(f"sqrt requires x >= 0, got {x!r}")
    ctx = x.ctx
    return BigReal(getattr(ctx, fn)(x.value), x.precision)


def _check_capability(precision: int) -> None:
    if precision > MAX_CONST_PRECISION:
        raise CapabilityError(
            f"embedded constants support at most {MAX_CONST_PRECISION} bits, "
            f"requested {precision}"
        )


def const_pi(precision: int = DEFAULT_PRECISION) -> BigReal:
    _check_capability(precision)
    return BigReal.of(_PI_DIGITS, precision)


def const_gamma_third(precision: int = DEFAULT_PRECISION) -> tuple[BigReal, BigReal]:
    """Return (Gamma(1/3), Gamma(2/3)) rounded to ``precision`` bits."""
    _check_capability(precision)
    return BigReal.of(_GAMMA_ONE_THIRD_DIGITS, precision), BigReal.of(_GAMMA_TWO_THIRDS_DIGITS, precision)


def rising_factorial(a: Fraction, k: int) -> Fraction:
    """Exact Pochhammer symbol a (a+1) ... (a+k-1)."""
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def gamma_thirds_factor(j: int) -> tuple[Fraction, int]:
    """Split Gamma(j/3) into an exact rational factor and a seed index.

    Returns ``(r, s)`` with Gamma(j/3) = r * Gamma(s/3) and s in {1, 2, 3}
    (Gamma(3/3) = 1).
    """
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    seed = (j - 1) % 3 + 1
    steps = (j - seed) // 3
    return rising_factorial(Fraction(seed, 3), steps), seed


def gamma_rational_thirds(j: int, precision: int = DEFAULT_PRECISION) -> BigReal:
    """Gamma(j/3) for a positive integer ``j``."""
    factor, seed = gamma_thirds_factor(j)
    if seed == 3:
        return BigReal.of(factor, precision)
    g13, g23 = const_gamma_third(precision)
    return (g13 if seed == 1 else g23) * factor


def _self_check() -> None:
    prec = MAX_CONST_PRECISION
    pi = const_pi(prec)
    g13, g23 = const_gamma_third(prec)
    reflection = g13 * g23 * elem(BigReal.of(3, prec), "sqrt") / (pi * 2)
    if abs(reflection - 1) > BigReal.of(2, prec) ** (8 - prec):
        raise RuntimeError("embedded Gamma(1/3), Gamma(2/3) fail the reflection identity")


_self_check()

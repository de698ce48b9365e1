"""Exact rational expansion coefficients.

The outer/oscillatory coefficients A_j(t) come from the polynomial family
P_j, and the turning-point coefficients D_j from the family Q_j.  Both
families come from loop-integral recursions where every step is a
constant minus a weighted sum of definite integrals from 0 to t of earlier
members, so everything stays in ``fractions.Fraction``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .highprec import BigComplex, BigReal, rising_factorial

__all__ = [
    "RationalPoly",
    "DCoefficient",
    "HalfIntegerGamma",
    "p_polys",
    "q_polys",
    "a_poly",
    "d_coeff",
    "gamma_half",
    "eval_a_real",
    "eval_a_imag_arg",
    "coefficient_record",
    "FAMILIES",
]

FAMILIES = ("A", "D", "P", "Q")


@dataclass(frozen=True)
class RationalPoly:
    """Dense polynomial sum(c[k] * t**k) with exact rational coefficients."""

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable = (0,)):
        coeffs = [Fraction(c) for c in coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [Fraction(0)]
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def constant(cls, c) -> "RationalPoly":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return self.coefficients == (Fraction(0),)

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else Fraction(0)

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coefficients), len(other.coefficients))
        return RationalPoly(self[k] + other[k] for k in range(n))

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coefficients), len(other.coefficients))
        return RationalPoly(self[k] - other[k] for k in range(n))

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self.coefficients)

    def scale(self, c) -> "RationalPoly":
        c = Fraction(c)
        return RationalPoly(c * a for a in self.coefficients)

    def __mul__(self, other) -> "RationalPoly":
        if not isinstance(other, RationalPoly):
            return self.scale(other)
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for k, b in enumerate(other.coefficients):
                    out[i + k] += a * b
        return RationalPoly(out)

    __rmul__ = scale

    def __pow__(self, e: int) -> "RationalPoly":
        out = RationalPoly.constant(1)
        for _ in range(e):
            out = out * self
        return out

    def integral(self) -> "RationalPoly":
        """Antiderivative vanishing at t = 0."""
        return RationalPoly([0] + [c / (k + 1) for k, c in enumerate(self.coefficients)])

    def derivative(self) -> "RationalPoly":
        return RationalPoly(c * k for k, c in enumerate(self.coefficients) if k)

    def divmod(self, divisor: "RationalPoly") -> tuple["RationalPoly", "RationalPoly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coefficients)
        dd = divisor.degree
        lead = divisor.coefficients[-1]
        quot = [Fraction(0)] * max(1, len(rem) - dd)
        for k in range(len(rem) - dd - 1, -1, -1):
            q = rem[k + dd] / lead
            quot[k] = q
            if q:
                for i, d in enumerate(divisor.coefficients):
                    rem[k + i] -= q * d
        return RationalPoly(quot), RationalPoly(rem[:dd] or [0])

    def __call__(self, t):
        """Horner evaluation; exact for Fraction/int input."""
        acc = Fraction(0) if isinstance(t, (int, Fraction)) else t * 0
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc

    def __repr__(self) -> str:
        terms = [f"{c}*t^{k}" for k, c in enumerate(self.coefficients) if c]
        return "RationalPoly(" + (" + ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class DCoefficient:
    j: int
    value: Fraction


@dataclass(frozen=True)
class HalfIntegerGamma:
    """Gamma(j + 1/2) = rational_part * sqrt(pi)."""

    j: int
    rational_part: Fraction


def gamma_half(j: int) -> HalfIntegerGamma:
    if j < 0:
        raise ValueError(f"j must be >= 0, got {j}")
    return HalfIntegerGamma(j, Fraction(factorial(2 * j), 4**j * factorial(j)))


def _central(j: int) -> Fraction:
    return Fraction(comb(2 * j, j), 2**j)


@functools.lru_cache(maxsize=None)
def _p(j: int) -> RationalPoly:
    if j == 0:
        return RationalPoly.constant(1)
    acc = RationalPoly.constant(_central(j))
    for k in range(1, j + 1):
        acc = acc - _p(j - k).integral().scale(Fraction(2**k, k + 2))
    return acc


@functools.lru_cache(maxsize=None)
def _q(j: int) -> RationalPoly:
    if j == 1:
        return RationalPoly.constant(1)
    m = j - 1
    acc = RationalPoly.constant(_central(m))
    for k in range(m):
        acc = acc - _q(m - k).integral().scale(Fraction(3 * 2 ** (k + 1), k + 4))
    return acc


def p_polys(max_j: int) -> tuple[RationalPoly, ...]:
    """P_0, ..., P_max_j."""
    if max_j < 0:
        raise ValueError(f"max_j must be >= 0, got {max_j}")
    return tuple(_p(j) for j in range(max_j + 1))


def q_polys(max_j: int) -> tuple[RationalPoly, ...]:
    """Q_1, ..., Q_max_j."""
    if max_j < 1:
        raise ValueError(f"max_j must be >= 1, got {max_j}")
    return tuple(_q(j) for j in range(1, max_j + 1))


@functools.lru_cache(maxsize=None)
def a_poly(j: int) -> RationalPoly:
    """A_j(t), a degree-3j polynomial divisible by (1+t)^j.

    The Gamma-type integral of s^(j+k-1/2) e^(-s) is Gamma(j+k+1/2), which is
    sqrt(pi) times a rational; that sqrt(pi) cancels the 1/sqrt(pi) in front,
    leaving (-1)^j / 2^j * sum_k p_k (j+k-1/2)! (1+t)^(j+k) over the
    coefficients p_k of P_{2j}.
    """
    if j < 0:
        raise ValueError(f"j must be >= 0, got {j}")
    sign = Fraction((-1) ** j, 2**j)
    in_u = [sign * c * gamma_half(j + k).rational_part for k, c in enumerate(_p(2 * j).coefficients)]
    # Horner in u = 1 + t, then the extra factor u^j; multiplying by 1 + t is a shift-and-add.
    acc: list[Fraction] = [Fraction(0)]
    for b in reversed([Fraction(0)] * j + in_u):
        shifted = [Fraction(0)] + acc
        for i, c in enumerate(acc):
            shifted[i] += c
        shifted[0] += b
        acc = shifted
    return RationalPoly(acc)


@functools.lru_cache(maxsize=None)
def d_coeff(j: int) -> DCoefficient:
    """D_j = (-1)^(j-1) sum_k q_k (j/3)_k, with q_k the coefficients of Q_j."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    third = Fraction(j, 3)
    total = sum(
        (c * rising_factorial(third, k) for k, c in enumerate(_q(j).coefficients)),
        Fraction(0),
    )
    return DCoefficient(j, (-1) ** (j - 1) * total)


def _horner_real(coeffs: Sequence[Fraction], t: BigReal) -> BigReal:
    acc = BigReal.of(0, t.precision)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def eval_a_real(j: int, t: BigReal) -> BigReal:
    return _horner_real(a_poly(j).coefficients, t)


def eval_a_imag_arg(j: int, c: BigReal) -> BigComplex:
    """A_j(i*c) for real ``c``.

    Even powers of i*c are real with alternating sign and odd powers are
    imaginary, so both parts are Horner sums in -c^2.
    """
    coeffs = a_poly(j).coefficients
    minus_c2 = -(c * c)
    re = _horner_real(coeffs[0::2], minus_c2)
    im = _horner_real(coeffs[1::2], minus_c2) * c
    return BigComplex(re, im)


def _pair(x: Fraction) -> list[str]:
    return [str(x.numerator), str(x.denominator)]


def coefficient_record(family: str, j: int) -> dict:
    """JSON-ready record of one coefficient, numerators/denominators as strings."""
    if family == "A":
        coeffs = a_poly(j).coefficients
    elif family == "P":
        coeffs = _p(j).coefficients
    elif family == "Q":
        coeffs = _q(j).coefficients
    elif family == "D":
        coeffs = (d_coeff(j).value,)
    else:
        raise ValueError(f"unknown coefficient family {family!r}; expected one of {FAMILIES}")
    return {"family": family, "j": j, "coefficients": [_pair(c) for c in coeffs]}

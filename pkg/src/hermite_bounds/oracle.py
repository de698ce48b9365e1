"""Reference values of H_n and the true truncation remainder.

Nothing here uses the asymptotic expansions: H_n comes from the three-term
recurrence (checked in turn against the explicit finite sum in exact
rational arithmetic), and the remainder is whatever is left after dividing
by the prefactor and subtracting the partial sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .expansion import CertifiedValue, ExpansionRequest, evaluate, hermite_argument
from .highprec import MAX_CONST_PRECISION, BigReal, elem

__all__ = [
    "HermiteValue",
    "RemainderSample",
    "hermite_recurrence",
    "hermite_recurrence_exact",
    "hermite_exact_sum",
    "hermite_poly_exact",
    "symmetry_check",
    "actual_epsilon",
]


@dataclass(frozen=True)
class HermiteValue:
    """H_n(x) stored as sign and log|H_n(x)|; log is -inf when the value is 0."""

    n: int
    x_description: str
    value_log_abs: BigReal
    sign: int
    precision: int

    @property
    def value(self) -> BigReal:
        if self.sign == 0:
            return BigReal.of(0, self.precision)
        return elem(self.value_log_abs, "exp") * self.sign


def _recur(n: int, x):
    h_prev, h = x * 0 + 1, 2 * x
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h


def hermite_recurrence(n: int, x: BigReal, x_description: str | None = None) -> HermiteValue:
    """H_n(x) from H_{k+1} = 2x H_k - 2k H_{k-1} at ``x``'s precision."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    h = BigReal(_recur(n, x.value), x.precision)
    log_abs = elem(abs(h), "ln") if h.sign else BigReal.of("-inf", x.precision)
    return HermiteValue(n, x_description or repr(x), log_abs, h.sign, x.precision)


def hermite_recurrence_exact(n: int, x: Fraction) -> Fraction:
    """The same recurrence run in exact rational arithmetic."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return Fraction(_recur(n, Fraction(x)))


def hermite_exact_sum(n: int, x: Fraction) -> Fraction:
    """H_n(x) = n! sum_m (-1)^m (2x)^(n-2m) / (m! (n-2m)!)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    x = Fraction(x)
    total = Fraction(0)
    for m in range(n // 2 + 1):
        total += Fraction((-1) ** m * math.factorial(n), math.factorial(m) * math.factorial(n - 2 * m)) * (2 * x) ** (n - 2 * m)
    return total


def hermite_poly_exact(n: int) -> list[int]:
    """Integer coefficients of H_n, lowest power first."""
    coeffs = [0] * (n + 1)
    for m in range(n // 2 + 1):
        coeffs[n - 2 * m] = (-1) ** m * math.factorial(n) * 2 ** (n - 2 * m) // (
            math.factorial(m) * math.factorial(n - 2 * m)
        )
    return coeffs


def symmetry_check(n: int, x: BigReal) -> bool:
    """H_n(-x) == (-1)^n H_n(x) in sign and in log|H| to within 2^(16 - precision)."""
    plus = hermite_recurrence(n, x)
    minus = hermite_recurrence(n, -x)
    if minus.sign != (-1) ** n * plus.sign:
        return False
    if plus.sign == 0:
        return True
    scale = max(BigReal.of(1, x.precision), abs(plus.value_log_abs))
    tol = BigReal.of(2, x.precision) ** (16 - x.precision) * scale
    return abs(plus.value_log_abs - minus.value_log_abs) <= tol


@dataclass(frozen=True)
class RemainderSample:
    request: ExpansionRequest
    actual_eps: BigReal
    bound: BigReal
    ratio: BigReal
    certified: CertifiedValue
    precision_used: int


def _extract(req: ExpansionRequest) -> tuple[BigReal, CertifiedValue]:
    cv = evaluate(req)
    h = hermite_recurrence(req.n, hermite_argument(req))
    if h.sign == 0:
        scaled = BigReal.of(0, req.precision)
    else:
        scaled = elem(h.value_log_abs - cv.log_prefactor, "exp") * h.sign
    return scaled - cv.partial_sum, cv


def actual_epsilon(req: ExpansionRequest) -> RemainderSample:
    """True remainder H_n / prefactor - partial_sum, with a single precision retry.

    When the remainder is within 2^(16 - precision) of the partial sum the
    subtraction has eaten most of the mantissa, so the whole extraction is
    repeated once at doubled precision (capped by the embedded constants).
    """
    eps, cv = _extract(req)
    used = req.precision
    threshold = BigReal.of(2, used) ** (16 - used) * abs(cv.partial_sum)
    if abs(eps) < threshold and used < MAX_CONST_PRECISION:
        used = min(2 * used, MAX_CONST_PRECISION)
        eps_hi, _ = _extract(req.at_precision(used))
        eps = eps_hi.with_precision(req.precision)
    return RemainderSample(
        request=req,
        actual_eps=eps,
        bound=cv.bound,
        ratio=abs(eps) / cv.bound,
        certified=cv,
        precision_used=used,
    )

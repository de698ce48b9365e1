"""Truncated Plancherel-Rotach expansions of H_n(sqrt(N) x), N = 2n + 1.

Each evaluator returns the braced partial sum, the natural log of the
prefactor in front of it, and an explicit bound on the remainder:

* outer:        x = cosh(beta) > 1,       |eps_p| <= C~_p / N^p
* oscillatory:  x = cos(alpha), 0 <= x < 1, |eps_p| <= C~_p / N^p
* turning:      x = 1,                    |eps_p| <= C~_p / N^(p/3)

The prefactors reach 10^300 and beyond for the table parameters, so they
only ever exist as logarithms.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import coeffs
from .highprec import (
    DEFAULT_PRECISION,
    BigComplex,
    BigReal,
    DomainError,
    const_pi,
    elem,
    gamma_rational_thirds,
)

__all__ = [
    "Case",
    "PiMultiple",
    "OrderError",
    "ExpansionRequest",
    "CertifiedValue",
    "eval_outer",
    "eval_oscillatory",
    "eval_turning",
    "evaluate",
    "log_prefactor",
    "parse_param",
    "realize",
    "hermite_argument",
    "oscillatory_partial_sum_split",
    "WEAK_BOUND_THRESHOLD",
]

WEAK_BOUND_THRESHOLD = 10**6


class OrderError(ValueError):
    """Truncation order outside the range the expansion covers."""


class Case(str, enum.Enum):
    OUTER = "outer"
    OSCILLATORY = "oscillatory"
    TURNING = "turning"


@dataclass(frozen=True)
class PiMultiple:
    """An angle stored exactly as ``factor * pi``."""

    factor: Fraction

    def at(self, precision: int) -> BigReal:
        return const_pi(precision) * self.factor

    def __str__(self) -> str:
        f = self.factor
        if f == 1:
            return "pi"
        if f.denominator == 1:
            return f"{f.numerator}*pi"
        num = "pi" if f.numerator == 1 else f"{f.numerator}*pi"
        return f"{num}/{f.denominator}"


Param = Union[BigReal, PiMultiple, Fraction, int, str]

_PI_PATTERN = re.compile(r"^\s*(?:(?P<num>\d+)\s*\*\s*)?pi\s*(?:/\s*(?P<den>\d+))?\s*$")


def parse_param(text: str) -> PiMultiple | Fraction:
    """Parse ``pi/4``, ``2*pi/3``, ``pi``, ``1/2`` or ``0.5`` exactly."""
    m = _PI_PATTERN.match(text.lower())
    if m:
        return PiMultiple(Fraction(int(m["num"] or 1), int(m["den"] or 1)))
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse parameter {text!r}; use a decimal, a fraction or k*pi/m") from None


def realize(x: Param, precision: int) -> BigReal:
    """Round a stored parameter to ``precision`` bits.

    Exact inputs (PiMultiple, Fraction, int, decimal strings) are rounded
    afresh at each precision; a BigReal is taken as an exact binary value.
    """
    if isinstance(x, PiMultiple):
        return x.at(precision)
    if isinstance(x, BigReal):
        return x.with_precision(precision)
    return BigReal.of(Fraction(x), precision)


@dataclass(frozen=True)
class ExpansionRequest:
    case: Case
    n: int
    p: int
    beta: Param | None = None
    alpha: Param | None = None
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))
        if self.n < 0:
            raise DomainError(f"n must be >= 0, got {self.n}")

    @property
    def N(self) -> int:
        return 2 * self.n + 1

    @property
    def param(self) -> Param | None:
        return {Case.OUTER: self.beta, Case.OSCILLATORY: self.alpha, Case.TURNING: None}[self.case]

    def at_precision(self, precision: int) -> "ExpansionRequest":
        return ExpansionRequest(self.case, self.n, self.p, self.beta, self.alpha, precision)


@dataclass(frozen=True)
class CertifiedValue:
    request: ExpansionRequest
    partial_sum: BigReal
    log_prefactor: BigReal
    approximation_log: BigReal
    approximation_sign: int
    bound: BigReal
    c_tilde: BigReal
    c_next: BigReal
    first_omitted: BigReal
    theta0: BigReal | None = None
    diagnostics: tuple[str, ...] = field(default_factory=tuple)


def _ln(x) -> BigReal:
    return elem(x, "ln")


def _log_factorial(n: int, precision: int) -> BigReal:
    return _ln(BigReal.of(math.factorial(n), precision))


def _power(base: BigReal, exponent: Fraction) -> BigReal:
    if exponent.denominator == 1:
        return base ** int(exponent)
    return base ** exponent


def _outer_param(req: ExpansionRequest) -> BigReal:
    if req.beta is None:
        raise DomainError("outer case requires beta")
    beta = realize(req.beta, req.precision)
    if beta <= 0:
        raise DomainError(f"outer case requires beta > 0, got {beta!r}")
    return beta


def _oscillatory_param(req: ExpansionRequest) -> BigReal:
    if req.alpha is None:
        raise DomainError("oscillatory case requires alpha")
    alpha = realize(req.alpha, req.precision)
    half_pi = const_pi(req.precision) / 2
    if isinstance(req.alpha, PiMultiple):
        inside = 0 < req.alpha.factor <= Fraction(1, 2)
    else:
        inside = 0 < alpha <= half_pi
    if not inside:
        raise DomainError(f"oscillatory case requires alpha in (0, pi/2], got {req.alpha}")
    return alpha


def hermite_argument(req: ExpansionRequest) -> BigReal:
    """sqrt(N) * x for the request's case, at the request's precision."""
    root_n = elem(BigReal.of(req.N, req.precision), "sqrt")
    if req.case is Case.OUTER:
        return root_n * elem(_outer_param(req), "cosh")
    if req.case is Case.OSCILLATORY:
        return root_n * elem(_oscillatory_param(req), "cos")
    return root_n


def log_prefactor(case: Case | str, n: int, param: Param | None = None,
                  precision: int = DEFAULT_PRECISION) -> BigReal:
    """Natural log of the factor multiplying the braced sum."""
    case = Case(case)
    N = 2 * n + 1
    two = BigReal.of(2, precision)
    ln_n = _ln(BigReal.of(N, precision))
    ln_fact = _log_factorial(n, precision)
    pi = const_pi(precision)
    if case is Case.OUTER:
        beta = _outer_param(ExpansionRequest(case, n, 1, beta=param, precision=precision))
        growth = elem(-2 * beta, "exp") + 2 * beta + 2
        return (n * _ln(two) + ln_fact + growth * N / 4
                - _ln(2 * pi * elem(beta, "sinh")) / 2 - ln_n * Fraction(n + 1, 2))
    if case is Case.OSCILLATORY:
        alpha = _oscillatory_param(ExpansionRequest(case, n, 0, alpha=param, precision=precision))
        growth = elem(2 * alpha, "cos") + 2
        return ((n + 1) * _ln(two) + ln_fact + growth * N / 4
                - _ln(2 * pi * elem(alpha, "sin")) / 2 - ln_n * Fraction(n + 1, 2))
    return ((n + 1) * _ln(two) + ln_fact + BigReal.of(Fraction(3 * N, 4), precision)
            - _ln(3 * pi) - ln_n * Fraction(n, 2))


def _finish(req, partial, log_pref, c_tilde, c_next, first_omitted, bound, theta0=None,
            weak_label="") -> CertifiedValue:
    diagnostics = []
    if c_next > WEAK_BOUND_THRESHOLD:
        diagnostics.append(
            f"weak bound: C_(p+1) = {c_next.to_decimal_string(6)} exceeds "
            f"{WEAK_BOUND_THRESHOLD:.0e}{weak_label}"
        )
    if partial:
        approx_log = log_pref + _ln(abs(partial))
    else:
        approx_log = BigReal.of("-inf", req.precision)
    return CertifiedValue(
        request=req,
        partial_sum=partial,
        log_prefactor=log_pref,
        approximation_log=approx_log,
        approximation_sign=partial.sign,
        bound=bound,
        c_tilde=c_tilde,
        c_next=c_next,
        first_omitted=first_omitted,
        theta0=theta0,
        diagnostics=tuple(diagnostics),
    )


def eval_outer(req: ExpansionRequest) -> CertifiedValue:
    if req.p < 1:
        raise OrderError(f"outer expansion requires p >= 1, got p={req.p}")
    prec, p, N = req.precision, req.p, req.N
    beta = _outer_param(req)
    pi = const_pi(prec)
    ch, sh = elem(beta, "cosh"), elem(beta, "sinh")
    coth = ch / sh
    n_big = BigReal.of(N, prec)

    partial = BigReal.of(0, prec)
    for j in reversed(range(p)):
        partial = partial / n_big + coeffs.eval_a_real(j, coth)

    half = Fraction(1, 2)
    c_next = (
        _power(BigReal.of(2, prec), p + Fraction(9, 2)) / _power(pi, p + Fraction(3, 2))
        + 1 / (pi * p * _power(BigReal.of(2, prec), p - Fraction(5, 2)) * _power(ch, p + half))
        + 2 * coth * (
            4 * pi * elem(ch, "sqrt") / _power(elem(2 * beta, "sinh") / 2 - beta, p + Fraction(3, 2))
            + _power(BigReal.of(2, prec), Fraction(-p)) * pi
            / (3 * elem(beta * (2 * p + Fraction(5, 2)), "exp"))
        )
    )
    # Gamma(p + 3/2) = r sqrt(pi); the sqrt(pi) cancels one power of pi^(3/2).
    gamma_ratio = coeffs.gamma_half(p + 1).rational_part
    first_omitted = abs(coeffs.eval_a_real(p, coth))
    c_tilde = first_omitted + elem(sh, "sqrt") * c_next * gamma_ratio / (2 * pi * N)
    bound = c_tilde / n_big**p
    log_pref = log_prefactor(Case.OUTER, req.n, req.beta, prec)
    return _finish(req, partial, log_pref, c_tilde, c_next, first_omitted, bound,
                   weak_label=" (beta near 0)")


def _oscillatory_phase(alpha: BigReal, N: int) -> tuple[BigReal, BigReal]:
    """Return (theta0, phi) with phi = theta0 N / 2 - pi / 4."""
    theta0 = alpha - elem(2 * alpha, "sin") / 2
    phi = theta0 * N / 2 - const_pi(alpha.precision) / 4
    return theta0, phi


def eval_oscillatory(req: ExpansionRequest) -> CertifiedValue:
    if req.p < 0:
        raise OrderError(f"oscillatory expansion requires p >= 0, got p={req.p}")
    prec, p, N = req.precision, req.p, req.N
    alpha = _oscillatory_param(req)
    pi = const_pi(prec)
    sin_a = elem(alpha, "sin")
    cot = elem(alpha, "cos") / sin_a
    theta0, phi = _oscillatory_phase(alpha, N)
    rotation = BigComplex.unit(-phi)
    n_big = BigReal.of(N, prec)

    partial = BigReal.of(0, prec)
    for j in reversed(range(p)):
        partial = partial / n_big + (coeffs.eval_a_imag_arg(j, cot) * rotation).re

    half = Fraction(1, 2)
    pi_rest = pi - theta0
    c_next = (
        4 / theta0 * (
            _power(BigReal.of(2, prec), Fraction(3, 2)) / _power(theta0 / 2, p + half)
            + BigReal.of(1 / (2 * p + half), prec)
        )
        + 4 / pi_rest * (
            _power(BigReal.of(2, prec), Fraction(3, 2)) / _power(pi_rest / 2, p + half)
            + _power(BigReal.of(2, prec), -half - 2 * p) / (2 * p + half)
        )
    )
    gamma_ratio = coeffs.gamma_half(p + 1).rational_part
    first_omitted = abs((coeffs.eval_a_imag_arg(p, cot) * rotation).re)
    c_tilde = first_omitted + elem(sin_a, "sqrt") * c_next * gamma_ratio / (2 * pi * N)
    bound = c_tilde / n_big**p
    log_pref = log_prefactor(Case.OSCILLATORY, req.n, req.alpha, prec)
    return _finish(req, partial, log_pref, c_tilde, c_next, first_omitted, bound, theta0=theta0,
                   weak_label=" (theta0 near 0)")


def oscillatory_partial_sum_split(req: ExpansionRequest) -> BigReal:
    """The braced sum written as Re-part times cosine plus Im-part times sine."""
    prec, N = req.precision, req.N
    alpha = _oscillatory_param(req)
    cot = elem(alpha, "cos") / elem(alpha, "sin")
    _, phi = _oscillatory_phase(alpha, N)
    re_sum = BigReal.of(0, prec)
    im_sum = BigReal.of(0, prec)
    for j in range(req.p):
        a = coeffs.eval_a_imag_arg(j, cot)
        scale = BigReal.of(N, prec) ** j
        re_sum = re_sum + a.re / scale
        im_sum = im_sum + a.im / scale
    return re_sum * elem(phi, "cos") + im_sum * elem(phi, "sin")


def _turning_term(j: int, prec: int) -> BigReal:
    """(3/4)^(j/3) D_j sin(2 pi j / 3) Gamma(j/3) without the N^(-j/3)."""
    residue = j % 3
    if residue == 0:
        return BigReal.of(0, prec)
    d = coeffs.d_coeff(j).value
    if not d:
        return BigReal.of(0, prec)
    sin_sign = 1 if residue == 1 else -1
    half_root3 = elem(BigReal.of(3, prec), "sqrt") / 2
    return (_power(BigReal.of(Fraction(3, 4), prec), Fraction(j, 3)) * d * sin_sign
            * half_root3 * gamma_rational_thirds(j, prec))


def eval_turning(req: ExpansionRequest) -> CertifiedValue:
    if req.p < 3:
        raise OrderError(f"turning-point expansion requires p >= 3, got p={req.p}")
    prec, p, N = req.precision, req.p, req.N
    pi = const_pi(prec)
    n_big = BigReal.of(N, prec)
    n_third = _power(n_big, Fraction(1, 3))

    partial = BigReal.of(0, prec)
    for j in reversed(range(1, p)):
        partial = (partial + _turning_term(j, prec)) / n_third

    c_next = 12 / pi * (
        2 / _power(pi / 2, Fraction(p - 2, 3)) + BigReal.of(Fraction(6, 4 * p - 11), prec)
    )
    first_omitted = abs(_turning_term(p, prec))
    c_tilde = (first_omitted
               + c_next * gamma_rational_thirds(p + 1, prec)
               / (_power(BigReal.of(2, prec), Fraction(3, 2)) * pi * n_third))
    bound = c_tilde / _power(n_big, Fraction(p, 3))
    log_pref = log_prefactor(Case.TURNING, req.n, None, prec)
    return _finish(req, partial, log_pref, c_tilde, c_next, first_omitted, bound)


_DISPATCH = {
    Case.OUTER: eval_outer,
    Case.OSCILLATORY: eval_oscillatory,
    Case.TURNING: eval_turning,
}


def evaluate(req: ExpansionRequest) -> CertifiedValue:
    return _DISPATCH[req.case](req)

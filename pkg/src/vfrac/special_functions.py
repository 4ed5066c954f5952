"""Log-gamma, generalized Pochhammer symbols and the truncated Mittag-Leffler kernel."""

from __future__ import annotations

import cmath
import logging
import math
import sys
from typing import List, Union

from scipy import special

from vfrac.errors import PoleError, SeriesOverflowError
from vfrac.models import ParameterSet

logger = logging.getLogger(__name__)

Number = Union[int, float, complex]

POLE_TOL = 1e-12
_LOG_MAX = math.log(sys.float_info.max)


def _check_pole(z: complex) -> None:
    nearest = round(z.real)
    if nearest <= 0 and abs(z - nearest) < POLE_TOL:
        raise PoleError(f"Gamma has a pole at {nearest}; argument {z} is within {POLE_TOL}")


def log_gamma(z: Number) -> complex:
    """Principal branch of log(Gamma(z))."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"log_gamma argument must be finite, got {z}")
    _check_pole(z)
    if z.imag == 0 and z.real > 0:
        return complex(float(special.gammaln(z.real)), 0.0)
    return complex(special.loggamma(z))


def log_pochhammer(x: Number, step: float, k: int) -> complex:
    if k == 0:
        return 0j
    return log_gamma(complex(x) + step * k) - log_gamma(x)


def pochhammer_gen(x: Number, step: float, k: int) -> complex:
    """(x)_{step k} = Gamma(x + step k) / Gamma(x); exactly 1 for k = 0."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if k == 0:
        return 1 + 0j
    return _exp_checked(log_pochhammer(x, step, k), what=f"pochhammer_gen(k={k})")


def _exp_checked(log_value: complex, what: str) -> complex:
    if log_value.real > _LOG_MAX:
        raise SeriesOverflowError(
            f"{what}: log-magnitude {log_value.real:.1f} exceeds the double range"
        )
    if log_value.imag == 0:
        return complex(math.exp(log_value.real), 0.0)
    return cmath.exp(log_value)


def _log_coefficient(params: ParameterSet, k: int, shift: complex) -> complex:
    """log of (rho)_{qk} / (delta)_{pk} * exp(shift) / Gamma(gamma k + beta)."""
    return (
        log_pochhammer(params.rho_p, params.q_step, k)
        - log_pochhammer(params.delta_p, params.p_step, k)
        + shift
        - log_gamma(params.gamma_p * k + params.beta_p)
    )


def _power_term(log_coeff: complex, z: complex, k: int, what: str) -> complex:
    """exp(log_coeff) * z**k evaluated in log space."""
    if k == 0:
        return _exp_checked(log_coeff, what)
    if z == 0:
        return 0j
    if z.imag == 0:
        sign = -1.0 if (z.real < 0 and k % 2) else 1.0
        log_value = log_coeff + k * math.log(abs(z.real))
        return sign * _exp_checked(log_value, what)
    return _exp_checked(log_coeff + k * cmath.log(z), what)


def _compensated_sum(terms: List[complex]) -> complex:
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def series_term(params: ParameterSet, z: Number, k: int) -> complex:
    """k-th term of the truncated six-parameter Mittag-Leffler series."""
    z = complex(z)
    return _power_term(_log_coefficient(params, k, 0j), z, k, what=f"series term k={k}")


def truncated_ml(params: ParameterSet, z: Number) -> complex:
    """Sum of the series terms for k = 0..trunc_i."""
    z = complex(z)
    terms = [series_term(params, z, k) for k in range(params.trunc_i + 1)]
    return _compensated_sum(terms)


def h_coefficients(params: ParameterSet) -> List[complex]:
    """Taylor coefficients of H, index 0..trunc_i; index 0 is exactly 1."""
    log_beta = log_gamma(params.beta_p)
    coeffs = [1 + 0j]
    for k in range(1, params.trunc_i + 1):
        coeffs.append(_exp_checked(_log_coefficient(params, k, log_beta), f"H coefficient k={k}"))
    return coeffs


def truncated_h(params: ParameterSet, z: Number) -> complex:
    """Gamma(beta) times the truncated Mittag-Leffler series; H(0) = 1 exactly."""
    z = complex(z)
    if z == 0:
        return 1 + 0j
    log_beta = log_gamma(params.beta_p)
    terms = [1 + 0j]
    for k in range(1, params.trunc_i + 1):
        log_coeff = _log_coefficient(params, k, log_beta)
        terms.append(_power_term(log_coeff, z, k, what=f"H term k={k}"))
    return _compensated_sum(terms)


def coefficient_c(params: ParameterSet) -> complex:
    """C = Gamma(beta) (rho)_q / [Gamma(gamma + beta) (delta)_p]."""
    log_c = (
        log_gamma(params.beta_p)
        + log_pochhammer(params.rho_p, params.q_step, 1)
        - log_gamma(params.gamma_p + params.beta_p)
        - log_pochhammer(params.delta_p, params.p_step, 1)
    )
    return _exp_checked(log_c, "coefficient_c")


def probe_point(t: float, eps: float, params: ParameterSet) -> complex:
    """The multiplicative probe t * H(eps * t^-alpha)."""
    return t * truncated_h(params, eps * t ** (-params.alpha))


def first_order_probe(t: float, eps: float, params: ParameterSet) -> complex:
    """First-order expansion t + C eps t^(1 - alpha) of probe_point."""
    return t + coefficient_c(params) * eps * t ** (1.0 - params.alpha)

"""One-variable truncated V-fractional derivative and integral."""

from __future__ import annotations

import logging
import math
from typing import Any, Callable, Tuple, Union

import numpy as np

from vfrac.errors import DomainError
from vfrac.limits import LimitEstimate, as_real, extrapolate_quotient, plain_evaluator
from vfrac.maps import ScalarMap, as_scalar_map
from vfrac.models import Interval, LimitConfig, ParameterSet, QuadratureConfig
from vfrac.quadrature import weighted_detailed
from vfrac.special_functions import coefficient_c

logger = logging.getLogger(__name__)

MapLike = Union[ScalarMap, Callable[[Any], Any]]

FD_REL_STEP = 1e-6


def _check_base(t: float) -> None:
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"base point must be > 0, got {t}")


def derivative_estimate(
    f: MapLike, t: float, params: ParameterSet, cfg: LimitConfig | None = None
) -> LimitEstimate:
    f = as_scalar_map(f)
    return extrapolate_quotient(
        plain_evaluator(f), t, params, cfg or LimitConfig(), domain=f.domain, what=f.name
    )


def v_derivative_limit(
    f: MapLike,
    t: float,
    params: ParameterSet,
    cfg: LimitConfig | None = None,
    allow_complex: bool = False,
) -> float | complex:
    """Limit of [f(t H(eps t^-alpha)) - f(t)] / eps as eps -> 0, by extrapolation."""
    est = derivative_estimate(f, t, params, cfg)
    return as_real(est.scalar(), allow_complex)


def v_derivative_closed(
    f_prime: MapLike, t: float, params: ParameterSet, allow_complex: bool = False
) -> float | complex:
    """C t^(1-alpha) f'(t)."""
    _check_base(t)
    value = coefficient_c(params) * t ** (1.0 - params.alpha) * complex(f_prime(t))
    return as_real(value, allow_complex)


def central_difference(f: MapLike, t: float, h: float) -> float:
    """Fourth-order central difference of f at t."""
    return float(
        np.real(f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h)
    )


def v_derivative_numeric(
    f: MapLike, t: float, params: ParameterSet, allow_complex: bool = False
) -> float | complex:
    """Closed form with f' replaced by a 4th-order central difference, h = t * 1e-6."""
    _check_base(t)
    f = as_scalar_map(f)
    h = t * FD_REL_STEP
    lo, hi = f.domain
    if not (lo < t - 2 * h and t + 2 * h < hi):
        raise DomainError(f"difference stencil around {t} leaves the domain ({lo}, {hi})")
    slope = central_difference(f, t, h)
    value = coefficient_c(params) * t ** (1.0 - params.alpha) * slope
    return as_real(value, allow_complex)


def power_rule(
    exponent: float, t: float, params: ParameterSet, allow_complex: bool = False
) -> float | complex:
    """V-derivative of t^a: C a t^(a - alpha)."""
    _check_base(t)
    value = coefficient_c(params) * exponent * t ** (exponent - params.alpha)
    return as_real(value, allow_complex)


def chain_rule(
    f_prime: MapLike,
    g: MapLike,
    t: float,
    params: ParameterSet,
    cfg: LimitConfig | None = None,
    allow_complex: bool = False,
) -> float | complex:
    """f'(g(t)) times the V-derivative of g at t."""
    g = as_scalar_map(g)
    inner = derivative_estimate(g, t, params, cfg).scalar()
    return as_real(complex(f_prime(g(t))) * inner, allow_complex)


def _weighted_between(
    f: ScalarMap, lo: float, hi: float, alpha: float, cfg: QuadratureConfig
) -> Tuple[float, float]:
    """Signed weighted integral from lo to hi (either order) with its error estimate."""
    if lo == hi:
        return 0.0, 0.0
    sign = 1.0
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0
    res = weighted_detailed(f, Interval(lo=lo, hi=hi), alpha, cfg)
    return sign * res.value, res.error


def v_integral(
    f: MapLike,
    a: float,
    t: float,
    params: ParameterSet,
    cfg: QuadratureConfig | None = None,
    allow_complex: bool = False,
) -> float | complex:
    """(1/C) * integral of f(x) x^(alpha-1) over [a, t], a >= 0."""
    if a < 0:
        raise DomainError(f"lower limit must be >= 0, got {a}")
    if not t > a:
        raise DomainError(f"upper limit {t} must exceed the lower limit {a}")
    f = as_scalar_map(f)
    res = weighted_detailed(f, Interval(lo=a, hi=t), params.alpha, cfg or QuadratureConfig())
    return as_real(res.value / coefficient_c(params), allow_complex)


def fundamental_check(
    f: MapLike,
    a: float,
    t: float,
    params: ParameterSet,
    cfg_limit: LimitConfig | None = None,
    cfg_quad: QuadratureConfig | None = None,
) -> float:
    """
    |D F(t) - f(t)| with F(s) = v_integral(f, a, s).

    F is differentiated through its increment from t, F(s) - F(t), which has the
    same derivative and avoids subtracting two nearly equal quadratures.
    """
    _check_base(a)
    if not t > a:
        raise DomainError(f"t={t} must exceed a={a}")
    if not params.is_real:
        raise DomainError("fundamental_check needs real parameters")
    f = as_scalar_map(f)
    cfg_quad = cfg_quad or QuadratureConfig()
    inv_c = 1.0 / coefficient_c(params).real
    alpha = params.alpha

    def increment(s: complex | float) -> Tuple[np.ndarray, float]:
        value, err = _weighted_between(f, t, float(np.real(s)), alpha, cfg_quad)
        return np.asarray(inv_c * value), abs(inv_c) * err

    est = extrapolate_quotient(
        increment,
        t,
        params,
        cfg_limit or LimitConfig(),
        domain=(a, f.domain[1]),
        what=f"F[{f.name}]",
    )
    residual = abs(float(np.real(est.scalar())) - float(np.real(f(t))))
    logger.debug("fundamental check %s on [%g, %g]: residual=%.3g", f.name, a, t, residual)
    return residual

"""Mixed V-fractional partials and the weighted Green identity on rectangles."""

from __future__ import annotations

import logging
import math
from typing import Any, Callable, Literal, Tuple, Union

import numpy as np

from vfrac.errors import DomainError
from vfrac.limits import LimitEstimate, as_real, extrapolate_quotient
from vfrac.maps import Curve2D, VectorMap
from vfrac.models import (
    MIXED_LIMIT,
    LimitConfig,
    MixedOrders,
    ParameterSet,
    QuadratureConfig,
    Region2D,
)
from vfrac.multivariable import classical_jacobian
from vfrac.quadrature import double_integral_rect, integrate_detailed
from vfrac.special_functions import coefficient_c

logger = logging.getLogger(__name__)

# Finite-difference partials carry rounding noise near 1e-9 relative to the field; area
# quadrature is not asked to resolve below this multiple of (field scale) * (area).
DIFFERENCE_TOL_FLOOR = 1e-8

Field = Union[VectorMap, Callable[[Any, Any], Any]]


def _xy(f: Field) -> Callable[[Any, Any], Any]:
    if isinstance(f, VectorMap):
        if f.dims != (2, 1):
            raise ValueError(f"expected a map R^2 -> R, {f.name} has dims {f.dims}")
        return lambda x, y: f(np.array([x, y]))[0]
    return f


def _check_base(t: float, s: float) -> None:
    if not (t > 0 and s > 0):
        raise DomainError(f"mixed partials need (t, s) > 0, got ({t}, {s})")


def _nested_estimate(
    f: VectorMap,
    t: float,
    s: float,
    orders: MixedOrders,
    params: ParameterSet,
    cfg: LimitConfig,
    outer: Literal["t", "s"],
) -> LimitEstimate:
    """Outer partial of the inner partial; the inner ladder is two levels deeper."""
    fn = _xy(f)
    outer_axis = 0 if outer == "t" else 1
    outer_order, inner_order = (
        (orders.alpha, orders.kappa) if outer == "t" else (orders.kappa, orders.alpha)
    )
    inner_params = params.with_alpha(inner_order)
    inner_cfg = cfg.deepened(2)
    base = (t, s)

    def inner_value(x: complex | float) -> Tuple[np.ndarray, float]:
        other = base[1 - outer_axis]

        def along_inner(y: complex | float) -> Tuple[np.ndarray, float]:
            point = [x, y] if outer_axis == 0 else [y, x]
            return np.asarray(fn(point[0], point[1])), 0.0

        est = extrapolate_quotient(
            along_inner, other, inner_params, inner_cfg, what=f"inner partial at {x}"
        )
        return est.value, est.error + est.noise

    return extrapolate_quotient(
        inner_value,
        base[outer_axis],
        params.with_alpha(outer_order),
        cfg,
        what=f"{getattr(f, 'name', 'f')} outer {outer}",
    )


def mixed_partial_limit(
    f: VectorMap,
    t: float,
    s: float,
    orders: MixedOrders,
    params: ParameterSet,
    cfg: LimitConfig = MIXED_LIMIT,
    outer: Literal["t", "s"] = "t",
    allow_complex: bool = False,
) -> float | complex:
    """
    d^alpha/dt^alpha (d^kappa/ds^kappa f) at (t, s) by nested extrapolation.

    With outer="s" the nesting is reversed: the alpha-partial in t is taken first
    and the kappa-partial in s last.
    """
    _check_base(t, s)
    est = _nested_estimate(f, t, s, orders, params, cfg, outer)
    logger.debug("mixed partial outer=%s at (%g, %g): err=%.3g", outer, t, s, est.error)
    return as_real(est.scalar(), allow_complex)


def mixed_partial_closed(
    f_ts: Field,
    t: float,
    s: float,
    orders: MixedOrders,
    params: ParameterSet,
    allow_complex: bool = False,
) -> float | complex:
    """C^2 s^(1-kappa) t^(1-alpha) f_ts(t, s)."""
    _check_base(t, s)
    c = coefficient_c(params)
    value = c * c * s ** (1.0 - orders.kappa) * t ** (1.0 - orders.alpha) * complex(_xy(f_ts)(t, s))
    return as_real(value, allow_complex)


def commutativity_check(
    f: VectorMap,
    t: float,
    s: float,
    orders: MixedOrders,
    params: ParameterSet,
    cfg: LimitConfig = MIXED_LIMIT,
) -> float:
    """|d_t d_s f - d_s d_t f| with both nestings computed by extrapolation."""
    ts = mixed_partial_limit(f, t, s, orders, params, cfg, outer="t", allow_complex=True)
    st = mixed_partial_limit(f, t, s, orders, params, cfg, outer="s", allow_complex=True)
    return abs(complex(ts) - complex(st))


def _partials(f: Field) -> Callable[[float, float], Tuple[float, float]]:
    """Classical (f_x, f_y): analytic when the map carries a Jacobian."""
    if isinstance(f, VectorMap) and f.jacobian is not None:

        def analytic(x: float, y: float) -> Tuple[float, float]:
            jac = f.analytic_jacobian(np.array([x, y]))
            return float(jac[0, 0]), float(jac[0, 1])

        return analytic
    fn = _xy(f)
    vec = VectorMap(fn=lambda z: fn(z[0], z[1]), n_in=2, n_out=1)

    def numeric(x: float, y: float) -> Tuple[float, float]:
        jac = classical_jacobian(vec, [x, y])
        return float(jac[0, 0]), float(jac[0, 1])

    return numeric


def _difference_tolerance(
    fields: Tuple[Field, ...], region: Region2D, w: float, cfg: QuadratureConfig
) -> QuadratureConfig:
    """cfg with abs_tol raised to what finite-difference partials can deliver on region."""
    xs, ys = (region.x_iv.lo, region.x_iv.hi), (region.y_iv.lo, region.y_iv.hi)
    scale = max(abs(complex(_xy(h)(x, y))) for h in fields for x in xs for y in ys)
    weight = max(region.x_iv.lo**w, region.y_iv.lo**w, 1.0)
    floor = DIFFERENCE_TOL_FLOOR * (1.0 + scale * weight) * region.x_iv.width * region.y_iv.width
    if floor <= cfg.abs_tol:
        return cfg
    logger.debug("no analytic Jacobian: area abs_tol raised from %.3g to %.3g", cfg.abs_tol, floor)
    return cfg.model_copy(update={"abs_tol": floor})


def green_lhs_forms(
    f: Field,
    g: Field,
    region: Region2D,
    params: ParameterSet,
    cfg: QuadratureConfig | None = None,
    allow_complex: bool = False,
) -> Tuple[float | complex, float | complex]:
    """
    Area side of the weighted Green identity, as (full, simplified).

    full integrates (D_x^a g - D_y^a f) (1/C)^2 x^(a-1) y^(a-1) with the closed-form
    partials; simplified integrates (1/C)(g_x y^(a-1) - f_y x^(a-1)). They agree
    analytically; the gap between them measures rounding in the weights.
    Maps without an analytic Jacobian are differentiated numerically, and the area
    tolerance is then floored at the accuracy of those differences.
    """
    alpha = params.alpha
    grad_f, grad_g = _partials(f), _partials(g)
    w = alpha - 1.0
    cfg = cfg or QuadratureConfig()
    numeric = tuple(
        h for h in (f, g) if not (isinstance(h, VectorMap) and h.jacobian is not None)
    )
    if numeric:
        cfg = _difference_tolerance(numeric, region, w, cfg)

    def full(x: float, y: float) -> float:
        g_x = grad_g(x, y)[0]
        f_y = grad_f(x, y)[1]
        return (x ** (1.0 - alpha) * g_x - y ** (1.0 - alpha) * f_y) * x**w * y**w

    def simplified(x: float, y: float) -> float:
        g_x = grad_g(x, y)[0]
        f_y = grad_f(x, y)[1]
        return g_x * y**w - f_y * x**w

    inv_c = 1.0 / coefficient_c(params)
    full_value = inv_c * double_integral_rect(full, region, cfg)
    simple_value = inv_c * double_integral_rect(simplified, region, cfg)
    return as_real(full_value, allow_complex), as_real(simple_value, allow_complex)


def green_lhs(
    f: Field,
    g: Field,
    region: Region2D,
    params: ParameterSet,
    cfg: QuadratureConfig | None = None,
    allow_complex: bool = False,
) -> float | complex:
    return green_lhs_forms(f, g, region, params, cfg, allow_complex)[0]


def green_rhs(
    f: Field,
    g: Field,
    curve: Curve2D,
    params: ParameterSet,
    cfg: QuadratureConfig | None = None,
    allow_complex: bool = False,
) -> float | complex:
    """(1/C) * closed line integral of f x^(a-1) dx + g y^(a-1) dy along curve."""
    curve.check_closed()
    cfg = cfg or QuadratureConfig()
    fn, gn = _xy(f), _xy(g)
    w = params.alpha - 1.0
    pieces = []
    for k, seg in enumerate(curve.segments):
        for tau in (0.0, 1.0):
            x, y = seg.point(tau)
            if x <= 0 or y <= 0:
                raise DomainError(f"segment {k} reaches ({x}, {y}) outside the positive quadrant")

        def integrand(tau: float, seg: Any = seg) -> float:
            x, y = seg.point(tau)
            vx, vy = seg.velocity(tau)
            return fn(x, y) * x**w * vx + gn(x, y) * y**w * vy

        pieces.append(integrate_detailed(integrand, 0.0, 1.0, cfg, what=f"segment {k}").value)
    total = math.fsum(pieces) / coefficient_c(params)
    return as_real(total, allow_complex)


def green_sides(
    f: Field,
    g: Field,
    region: Region2D,
    params: ParameterSet,
    cfg: QuadratureConfig | None = None,
    allow_complex: bool = False,
) -> Tuple[float | complex, float | complex]:
    lhs = green_lhs(f, g, region, params, cfg, allow_complex)
    rhs = green_rhs(f, g, Curve2D.rectangle(region), params, cfg, allow_complex)
    return lhs, rhs


def green_check(
    f: Field,
    g: Field,
    region: Region2D,
    params: ParameterSet,
    cfg: QuadratureConfig | None = None,
) -> float:
    """|green_lhs - green_rhs| on the counterclockwise boundary of region."""
    lhs, rhs = green_sides(f, g, region, params, cfg, allow_complex=True)
    residual = abs(complex(lhs) - complex(rhs))
    logger.debug("green check on %s: lhs=%r rhs=%r residual=%.3g", region, lhs, rhs, residual)
    return residual

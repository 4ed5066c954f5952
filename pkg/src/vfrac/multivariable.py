"""
V-fractional partials, Jacobians and the best-linear-map residual for maps R^n -> R^m.

Column p of the Jacobian is one epsilon-ladder extrapolation along axis p with
the whole output vector carried through the tableau, so every row equals what the
scalar component alone would produce.
"""

from __future__ import annotations

import logging
from typing import Sequence, Tuple, Union

import numpy as np

from vfrac.errors import DomainError
from vfrac.limits import LimitEstimate, as_real, as_real_array, extrapolate_quotient
from vfrac.maps import VectorMap
from vfrac.models import LimitConfig, LinearMap, MixedOrders, ParameterSet, Point, VJacobian
from vfrac.special_functions import truncated_h

logger = logging.getLogger(__name__)

PointLike = Union[Point, Sequence[float], np.ndarray]

FD_REL_STEP = 1e-6
DECAY_NORMS = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7)


def _as_point(a: PointLike) -> Point:
    if isinstance(a, Point):
        return a
    return Point.of(*np.asarray(a, dtype=float).reshape(-1))


def _require_positive(a: Point) -> None:
    if not a.is_positive:
        raise DomainError(f"every coordinate of the base point must be > 0, got {a.coords}")


def _check_input_dim(f: VectorMap, a: Point) -> None:
    if f.n_in != a.dim:
        raise ValueError(f"{f.name} takes {f.n_in} inputs but the point has {a.dim} coordinates")


def axis_estimate(
    f: VectorMap,
    a: Point,
    axis: int,
    params: ParameterSet,
    cfg: LimitConfig | None = None,
) -> LimitEstimate:
    """Extrapolated partial quotient of every component of f along 0-based axis."""
    _check_input_dim(f, a)
    base = a.as_array()

    def evaluate(x: complex | float) -> Tuple[np.ndarray, float]:
        z = base.astype(complex) if isinstance(x, complex) else base.copy()
        z[axis] = x
        return f(z), 0.0

    return extrapolate_quotient(
        evaluate,
        float(base[axis]),
        params,
        cfg or LimitConfig(),
        what=f"{f.name} along axis {axis + 1}",
    )


def v_partial(
    f: VectorMap,
    a: PointLike,
    axis: int,
    params: ParameterSet,
    cfg: LimitConfig | None = None,
    allow_complex: bool = False,
) -> float | complex:
    """V-fractional partial of a scalar-output map along axis (1-based)."""
    a = _as_point(a)
    if f.n_out != 1:
        raise ValueError(f"v_partial needs a scalar-output map, {f.name} has {f.n_out} outputs")
    if not 1 <= axis <= a.dim:
        raise ValueError(f"axis must be in 1..{a.dim}, got {axis}")
    est = axis_estimate(f, a, axis - 1, params, cfg)
    return as_real(est.scalar(), allow_complex)


def jacobian_matrix(
    f: VectorMap,
    a: PointLike,
    params: ParameterSet,
    cfg: LimitConfig | None = None,
    allow_complex: bool = False,
) -> np.ndarray:
    a = _as_point(a)
    _require_positive(a)
    _check_input_dim(f, a)
    columns = [axis_estimate(f, a, p, params, cfg).value for p in range(a.dim)]
    matrix = np.stack(columns, axis=1).reshape(f.n_out, a.dim)
    return as_real_array(matrix, allow_complex)


def v_jacobian(
    f: VectorMap, a: PointLike, params: ParameterSet, cfg: LimitConfig | None = None
) -> VJacobian:
    """m x n matrix of V-fractional partials at a."""
    a = _as_point(a)
    return VJacobian.from_array(jacobian_matrix(f, a, params, cfg), base=a, params=params)


def classical_jacobian(f: VectorMap, x: PointLike) -> np.ndarray:
    """Fourth-order central differences with step max(|x_p|, 1) * 1e-6 per axis."""
    x = _as_point(x).as_array()
    if f.n_in != x.size:
        raise ValueError(f"{f.name} takes {f.n_in} inputs, got a point of size {x.size}")
    out = np.empty((f.n_out, x.size))
    for p in range(x.size):
        h = max(abs(x[p]), 1.0) * FD_REL_STEP
        e = np.zeros_like(x)
        e[p] = h
        out[:, p] = np.real(
            f(x - 2 * e) - 8 * f(x - e) + 8 * f(x + e) - f(x + 2 * e)
        ) / (12 * h)
    return out


def probe_vector(a: PointLike, eps_vec: Sequence[float], params: ParameterSet) -> np.ndarray:
    """Coordinates a_p H(eps_p a_p^-alpha)."""
    base = _as_point(a).as_array()
    eps = np.asarray(eps_vec, dtype=float)
    values = [
        ap * truncated_h(params, ep * ap ** (-params.alpha)) for ap, ep in zip(base, eps)
    ]
    arr = np.asarray(values)
    return arr.real if params.is_real else arr


def linear_map_residual(
    f: VectorMap,
    a: PointLike,
    L: Union[LinearMap, VJacobian, np.ndarray],
    params: ParameterSet,
    eps_vec: Sequence[float],
) -> float:
    """||f(probe(eps)) - f(a) - L eps|| / ||eps|| with Euclidean norms."""
    a = _as_point(a)
    _require_positive(a)
    _check_input_dim(f, a)
    eps = np.asarray(eps_vec, dtype=float).reshape(-1)
    if eps.size != a.dim:
        raise ValueError(f"eps has {eps.size} entries, expected {a.dim}")
    norm = float(np.linalg.norm(eps))
    if norm == 0:
        raise ValueError("eps must be nonzero")
    matrix = L.as_array() if isinstance(L, (LinearMap, VJacobian)) else np.asarray(L, dtype=float)
    probe = probe_vector(a, eps, params)
    if not np.all(np.real(probe) > 0):
        raise DomainError(f"probe {probe} leaves the positive orthant")
    diff = f(probe) - f(a.as_array()) - matrix @ eps
    return float(np.linalg.norm(diff)) / norm


def residual_decay_slope(
    f: VectorMap,
    a: PointLike,
    L: Union[LinearMap, VJacobian, np.ndarray],
    params: ParameterSet,
    norms: Sequence[float] = DECAY_NORMS,
    direction: Sequence[float] | None = None,
) -> Tuple[float, Tuple[float, ...]]:
    """
    Least-squares slope of log(residual) against log(||eps||) and the residuals.

    A slope near 1 means the residual shrinks like ||eps||, i.e. L is the
    derivative. Residuals at the rounding floor flatten the fit, so the corpus
    should use maps with nonvanishing second-order behaviour.
    """
    a = _as_point(a)
    d = np.ones(a.dim) if direction is None else np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    residuals = tuple(linear_map_residual(f, a, L, params, n * d) for n in norms)
    logs = np.log(np.maximum(np.asarray(residuals), np.finfo(float).tiny))
    slope = float(np.polyfit(np.log(np.asarray(norms)), logs, 1)[0])
    logger.debug("residual decay for %s: slope=%.3f residuals=%s", f.name, slope, residuals)
    return slope, residuals


def chain_rule_multi(
    g: VectorMap,
    f: VectorMap,
    a: PointLike,
    params: ParameterSet,
    cfg: LimitConfig | None = None,
) -> VJacobian:
    """Classical Jacobian of g at f(a), by central differences, times the V-Jacobian of f at a."""
    a = _as_point(a)
    fa = f(a.as_array())
    if not np.all(fa > 0):
        raise DomainError(f"chain rule needs f_i(a) > 0 for every component, got {fa}")
    if g.n_in != f.n_out:
        raise ValueError(f"cannot compose {g.name} (n={g.n_in}) with {f.name} (m={f.n_out})")
    outer = classical_jacobian(g, fa)
    inner = jacobian_matrix(f, a, params, cfg)
    return VJacobian.from_array(outer @ inner, base=a, params=params)


def componentwise_check(
    f: VectorMap, a: PointLike, params: ParameterSet, cfg: LimitConfig | None = None
) -> float:
    """Max distance between rows of the full Jacobian and the Jacobians of the components."""
    a = _as_point(a)
    full = jacobian_matrix(f, a, params, cfg)
    worst = 0.0
    for j in range(f.n_out):
        row = jacobian_matrix(f.component(j), a, params, cfg)[0]
        worst = max(worst, float(np.linalg.norm(full[j] - row)))
    return worst


def v_gradient(
    f: VectorMap,
    a: PointLike,
    orders: Union[MixedOrders, Tuple[float, float]],
    params: ParameterSet | None = None,
    cfg: LimitConfig | None = None,
) -> Tuple[float, float]:
    """(d^alpha/dt^alpha f, d^kappa/ds^kappa f) at a point of R^2."""
    a = _as_point(a)
    if a.dim != 2:
        raise ValueError(f"the gradient is defined on R^2, got a point of dimension {a.dim}")
    _require_positive(a)
    if not isinstance(orders, MixedOrders):
        orders = MixedOrders(alpha=orders[0], kappa=orders[1])
    params = params or ParameterSet()
    dt = v_partial(f, a, 1, params.with_alpha(orders.alpha), cfg)
    ds = v_partial(f, a, 2, params.with_alpha(orders.kappa), cfg)
    return dt, ds


def _relative_gap(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    return float(np.max(np.abs(lhs - rhs))) / scale


def _scalar_map_pair(f: VectorMap, g: VectorMap) -> None:
    if f.n_out != 1 or g.n_out != 1 or f.n_in != g.n_in:
        raise ValueError("linearity and product checks need two scalar maps on the same R^n")


def multivariable_linearity_residual(
    f: VectorMap,
    g: VectorMap,
    a: PointLike,
    lam: float,
    mu: float,
    params: ParameterSet,
    cfg: LimitConfig | None = None,
) -> float:
    """Relative gap between J(lam f + mu g) and lam J(f) + mu J(g)."""
    _scalar_map_pair(f, g)

    def combo(x: np.ndarray) -> np.ndarray:
        return lam * f(x) + mu * g(x)

    h = VectorMap(fn=combo, n_in=f.n_in, name=f"{lam:g}*{f.name}+{mu:g}*{g.name}")
    lhs = jacobian_matrix(h, a, params, cfg)
    rhs = lam * jacobian_matrix(f, a, params, cfg) + mu * jacobian_matrix(g, a, params, cfg)
    return _relative_gap(lhs, rhs)


def multivariable_product_residual(
    f: VectorMap,
    g: VectorMap,
    a: PointLike,
    params: ParameterSet,
    cfg: LimitConfig | None = None,
) -> float:
    """Relative gap between J(f g) and f(a) J(g) + g(a) J(f)."""
    _scalar_map_pair(f, g)
    a = _as_point(a)

    def prod(x: np.ndarray) -> np.ndarray:
        return f(x) * g(x)

    h = VectorMap(fn=prod, n_in=f.n_in, name=f"{f.name}*{g.name}")
    x = a.as_array()
    lhs = jacobian_matrix(h, a, params, cfg)
    rhs = (
        f(x)[0] * jacobian_matrix(g, a, params, cfg)
        + g(x)[0] * jacobian_matrix(f, a, params, cfg)
    )
    return _relative_gap(lhs, rhs)

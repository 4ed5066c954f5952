"""
Property suite behind `vfrac verify`.

Each check yields cases; a case passes when its value is within the bound
(kind "le") or at least the bound (kind "ge"). A check passes when every case
does, and its report carries the case closest to failing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np
import typer

from vfrac.errors import VFracError
from vfrac.maps import (
    Curve2D,
    VectorMap,
    linear_combination,
    product,
    quotient,
    stack,
)
from vfrac.models import (
    MIXED_LIMIT,
    Interval,
    LimitConfig,
    MixedOrders,
    ParameterSet,
    Point,
    QuadratureConfig,
    Region2D,
)
from vfrac.multivariable import (
    chain_rule_multi,
    classical_jacobian,
    componentwise_check,
    jacobian_matrix,
    linear_map_residual,
    multivariable_linearity_residual,
    multivariable_product_residual,
    residual_decay_slope,
    v_partial,
)
from vfrac.quadrature import integrate_adaptive, integrate_weighted
from vfrac.registry import constant, power, resolve_field_entry, resolve_scalar, scalar_as_vector
from vfrac.report import ReportRecord, stopwatch
from vfrac.scalar_calculus import (
    chain_rule,
    fundamental_check,
    power_rule,
    v_derivative_closed,
    v_derivative_limit,
)
from vfrac.special_functions import (
    coefficient_c,
    pochhammer_gen,
    series_term,
    truncated_h,
    truncated_ml,
)
from vfrac.vector_field import (
    green_lhs,
    green_lhs_forms,
    green_rhs,
    green_sides,
    mixed_partial_closed,
    mixed_partial_limit,
)

logger = logging.getLogger(__name__)

ALPHAS = (0.25, 0.5, 0.75, 1.0)
T_GRID = (0.5, 1.0, 2.0)
MIXED_ORDERS = (0.3, 0.7, 1.0)

REAL_DRAWS: Tuple[ParameterSet, ...] = (
    ParameterSet.unit(),
    ParameterSet.real(gamma=0.8, beta=1.5, rho=2.0, delta=1.2, p=1.0, q=1.5, alpha=0.5, trunc_i=3),
    ParameterSet.real(gamma=2.0, beta=0.7, rho=0.5, delta=3.0, p=0.5, q=2.0, alpha=0.5, trunc_i=2),
)
COMPLEX_DRAW = ParameterSet(
    gamma_p=1 + 0.5j, beta_p=1.2 - 0.3j, rho_p=0.9 + 0.2j, delta_p=complex(1.1), trunc_i=3
)


@dataclass(frozen=True)
class Case:
    label: str
    value: float
    bound: float
    kind: Literal["le", "ge"] = "le"

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        return self.value <= self.bound if self.kind == "le" else self.value >= self.bound

    @property
    def margin(self) -> float:
        """Fraction of the bound used; above 1 means failure."""
        if self.kind == "le":
            if self.value == 0:
                return 0.0
            return math.inf if self.bound == 0 else abs(self.value) / self.bound
        if self.value <= 0:
            return math.inf
        return self.bound / self.value


@dataclass(frozen=True)
class SuiteConfig:
    limit: LimitConfig = field(default_factory=LimitConfig)
    mixed: LimitConfig = MIXED_LIMIT
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)


CheckFn = Callable[[SuiteConfig], Iterable[Case]]


def _rel(a: complex | float, b: complex | float) -> float:
    return abs(complex(a) - complex(b)) / max(1.0, abs(complex(a)), abs(complex(b)))


# --- special functions --------------------------------------------------------


def _h_at_zero(cfg: SuiteConfig) -> Iterator[Case]:
    for k, params in enumerate(REAL_DRAWS + (COMPLEX_DRAW,)):
        yield Case(f"draw{k}", abs(truncated_h(params, 0) - 1), 0.0)


def _pochhammer_k0(cfg: SuiteConfig) -> Iterator[Case]:
    for x in (0.3, 2.3, 7.0, 1 + 2j):
        for step in (0.5, 0.7, 3.0):
            yield Case(f"x={x} step={step}", abs(pochhammer_gen(x, step, 0) - 1), 0.0)


def _truncation_consistency(cfg: SuiteConfig) -> Iterator[Case]:
    for k, params in enumerate(REAL_DRAWS):
        for z in (0.0, 0.5, 2.0, 10.0):
            for n in range(0, 10):
                upper = truncated_ml(params.with_trunc(n + 1), z)
                lower = truncated_ml(params.with_trunc(n), z)
                term = series_term(params, z, n + 1)
                scale = max(abs(upper), abs(lower), abs(term))
                yield Case(f"draw{k} z={z} n={n}", abs((upper - lower) - term), 1e-14 * scale)


def _log_space_range(cfg: SuiteConfig) -> Iterator[Case]:
    for part in (0.5, 2.0, 5.0):
        params = ParameterSet(
            gamma_p=complex(part),
            beta_p=complex(part),
            rho_p=complex(part),
            delta_p=complex(part),
            trunc_i=50,
        )
        for z in (-10.0, 10.0, 10j, 7 - 7j):
            value = truncated_ml(params, z)
            finite = math.isfinite(value.real) and math.isfinite(value.imag)
            yield Case(f"re={part} z={z}", 0.0 if finite else 1.0, 0.0)


def _linear_coefficient(cfg: SuiteConfig) -> Iterator[Case]:
    ident = resolve_scalar("id")
    for k, params in enumerate(REAL_DRAWS):
        slope = v_derivative_limit(ident, 1.0, params, cfg.limit)
        c = coefficient_c(params).real
        yield Case(f"draw{k}", abs(slope - c), 1e-8 * max(1.0, abs(c)))


# --- quadrature -----------------------------------------------------------------


def _additivity(cfg: SuiteConfig) -> Iterator[Case]:
    for name in ("sin", "exp", "poly:1,0,3", "ln"):
        g = resolve_scalar(name)
        a, b, c = 0.1, 0.7, 2.0
        whole = integrate_adaptive(g, Interval(lo=a, hi=c), cfg.quad)
        parts = integrate_adaptive(g, Interval(lo=a, hi=b), cfg.quad) + integrate_adaptive(
            g, Interval(lo=b, hi=c), cfg.quad
        )
        yield Case(name, abs(whole - parts), 2 * cfg.quad.abs_tol)


def _substitution(cfg: SuiteConfig) -> Iterator[Case]:
    iv = Interval(lo=0.5, hi=2.0)
    for name in ("sin", "exp", "ln"):
        f = resolve_scalar(name)
        for alpha in ALPHAS:
            sub = integrate_weighted(f, iv, alpha, cfg.quad)
            direct = integrate_adaptive(lambda x: f(x) * x ** (alpha - 1.0), iv, cfg.quad)
            bound = 5 * max(cfg.quad.abs_tol, cfg.quad.rel_tol * abs(direct))
            yield Case(f"{name} alpha={alpha}", abs(sub - direct), bound)


def _quadrature_linearity(cfg: SuiteConfig) -> Iterator[Case]:
    f, g = resolve_scalar("sin"), resolve_scalar("exp")
    lam, mu = 2.0, -3.0
    combo = linear_combination(lam, f, mu, g)
    iv = Interval(lo=0.0, hi=1.5)
    for alpha in ALPHAS:
        i_f = integrate_weighted(f, iv, alpha, cfg.quad)
        i_g = integrate_weighted(g, iv, alpha, cfg.quad)
        i_c = integrate_weighted(combo, iv, alpha, cfg.quad)
        bound = 10 * max(cfg.quad.abs_tol, cfg.quad.rel_tol * (abs(lam * i_f) + abs(mu * i_g)))
        yield Case(f"alpha={alpha}", abs(i_c - (lam * i_f + mu * i_g)), bound)


# --- scalar calculus ------------------------------------------------------------

SCALAR_CORPUS = ("poly:0,0,1", "poly:0,0,0,1", "sin", "exp", "ln")


def _closed_form(cfg: SuiteConfig) -> Iterator[Case]:
    for name in SCALAR_CORPUS:
        f = resolve_scalar(name)
        for k, draw in enumerate(REAL_DRAWS):
            for alpha in ALPHAS:
                params = draw.with_alpha(alpha)
                for t in T_GRID:
                    lim = v_derivative_limit(f, t, params, cfg.limit)
                    closed = v_derivative_closed(f.prime(), t, params)
                    yield Case(
                        f"{name} draw{k} alpha={alpha} t={t}",
                        abs(lim - closed),
                        1e-6 * (1 + abs(closed)),
                    )


def _power_rule(cfg: SuiteConfig) -> Iterator[Case]:
    for alpha in ALPHAS:
        params = ParameterSet.unit(alpha=alpha)
        for a in (-1.0, 0.5, 1.0, 2.0, alpha):
            for t in T_GRID:
                lim = v_derivative_limit(power(a), t, params, cfg.limit)
                rule = power_rule(a, t, params)
                yield Case(f"a={a} alpha={alpha} t={t}", _rel(lim, rule), 1e-6)


ALGEBRA_PAIRS = (("sin", "exp"), ("ln", "poly:0,0,1"), ("cos", "poly:2,0,1"))


def _algebra(kind: str) -> CheckFn:
    def check(cfg: SuiteConfig) -> Iterator[Case]:
        for fname, gname in ALGEBRA_PAIRS:
            f, g = resolve_scalar(fname), resolve_scalar(gname)
            for k, params in enumerate(REAL_DRAWS[:2]):
                for t in T_GRID:
                    df = v_derivative_limit(f, t, params, cfg.limit)
                    dg = v_derivative_limit(g, t, params, cfg.limit)
                    ft, gt = float(f(t)), float(g(t))
                    if kind == "linearity":
                        combo = linear_combination(1.5, f, -0.5, g)
                        lhs = v_derivative_limit(combo, t, params, cfg.limit)
                        rhs = 1.5 * df - 0.5 * dg
                    elif kind == "product":
                        lhs = v_derivative_limit(product(f, g), t, params, cfg.limit)
                        rhs = ft * dg + gt * df
                    else:
                        lhs = v_derivative_limit(quotient(f, g), t, params, cfg.limit)
                        rhs = (gt * df - ft * dg) / gt**2
                    yield Case(f"{fname},{gname} draw{k} t={t}", _rel(lhs, rhs), 1e-6)

    return check


def _constants(cfg: SuiteConfig) -> Iterator[Case]:
    for c in (0.0, 1.0, -3.5, 1e3):
        for k, params in enumerate(REAL_DRAWS):
            for t in T_GRID:
                value = v_derivative_limit(constant(c), t, params, cfg.limit)
                yield Case(f"c={c} draw{k} t={t}", abs(value), 1e-10)


def _scalar_chain(cfg: SuiteConfig) -> Iterator[Case]:
    square = resolve_scalar("poly:0,0,1")
    for inner in ("sin", "exp", "ln"):
        g = resolve_scalar(inner)
        composite = resolve_scalar(f"poly:0,0,1@{inner}")
        for k, params in enumerate(REAL_DRAWS):
            for t in T_GRID:
                lhs = chain_rule(square.prime(), g, t, params, cfg.limit)
                rhs = v_derivative_limit(composite, t, params, cfg.limit)
                yield Case(f"square@{inner} draw{k} t={t}", _rel(lhs, rhs), 1e-6)


def _truncation_independence(cfg: SuiteConfig) -> Iterator[Case]:
    for name in ("sin", "exp", "ln"):
        f = resolve_scalar(name)
        for k, draw in enumerate(REAL_DRAWS[:2]):
            for t in T_GRID:
                values = [
                    v_derivative_limit(f, t, draw.with_trunc(i), cfg.limit) for i in (1, 2, 5, 20)
                ]
                spread = max(values) - min(values)
                yield Case(
                    f"{name} draw{k} t={t}", spread, 1e-8 * max(abs(v) for v in values) + 1e-14
                )


def _conformable(cfg: SuiteConfig) -> Iterator[Case]:
    for name in SCALAR_CORPUS:
        f = resolve_scalar(name)
        for alpha in ALPHAS:
            params = ParameterSet.conformable(alpha)
            for t in T_GRID:
                lim = v_derivative_limit(f, t, params, cfg.limit)
                expected = t ** (1.0 - alpha) * float(f.derivative(t))
                yield Case(
                    f"{name} alpha={alpha} t={t}",
                    abs(lim - expected),
                    1e-8 * max(1.0, abs(expected)),
                )


def _alpha_one(cfg: SuiteConfig) -> Iterator[Case]:
    params = ParameterSet.unit(alpha=1.0)
    for name in SCALAR_CORPUS:
        f = resolve_scalar(name)
        for t in T_GRID:
            closed = v_derivative_closed(f.prime(), t, params)
            classical = float(f.derivative(t))
            yield Case(f"{name} t={t}", abs(closed - classical), 1e-14 * max(1.0, abs(classical)))


FUNDAMENTAL_CASES = (
    ("const:1", 1.0, 2.0, 0.5, 0),
    ("id", 0.5, 1.5, 1.0, 0),
    ("sin", 0.5, 1.5, 0.7, 0),
    ("exp", 1e-3, 1.0, 0.3, 1),
    ("ln", 0.2, 2.0, 0.5, 2),
)


def _fundamental(cfg: SuiteConfig) -> Iterator[Case]:
    for name, a, t, alpha, draw in FUNDAMENTAL_CASES:
        params = REAL_DRAWS[draw].with_alpha(alpha)
        residual = fundamental_check(resolve_scalar(name), a, t, params, cfg.limit, cfg.quad)
        yield Case(f"{name} a={a} t={t} alpha={alpha}", residual, 1e-6)


# --- multivariable --------------------------------------------------------------


def _vector_corpus() -> List[Tuple[VectorMap, Point]]:
    def prod_sum(x: np.ndarray) -> np.ndarray:
        return np.array([x[0] * x[1], x[0] + x[1]])

    def exp_mix(x: np.ndarray) -> np.ndarray:
        return np.array([np.exp(0.5 * (x[0] + x[1])), x[0] ** 2 * x[1]])

    def log_cube(x: np.ndarray) -> np.ndarray:
        return np.array([np.log(x[0]) + x[1] * x[2], x[0] * x[1] ** 2])

    return [
        (VectorMap(fn=prod_sum, n_in=2, n_out=2, name="(xy, x+y)"), Point.of(1.0, 2.0)),
        (resolve_field_entry("sincos").map, Point.of(0.5, 1.5)),
        (VectorMap(fn=exp_mix, n_in=2, n_out=2, name="(e^(x+y)/2, x^2 y)"), Point.of(2.0, 0.7)),
        (
            VectorMap(fn=log_cube, n_in=3, n_out=2, name="(ln x + yz, x y^2)"),
            Point.of(1.0, 0.5, 2.0),
        ),
    ]


def _factorization(cfg: SuiteConfig) -> Iterator[Case]:
    for f, a in _vector_corpus():
        for k, draw in enumerate(REAL_DRAWS):
            params = draw.with_alpha(0.6)
            vj = jacobian_matrix(f, a, params, cfg.limit)
            scale = coefficient_c(params).real * a.as_array() ** (1.0 - params.alpha)
            expected = classical_jacobian(f, a) * scale[np.newaxis, :]
            gap = np.abs(vj - expected) / np.maximum(1.0, np.abs(expected))
            yield Case(f"{f.name} draw{k}", float(np.max(gap)), 1e-6)


def _worked_examples(cfg: SuiteConfig) -> Iterator[Case]:
    sin_x = resolve_field_entry("sin:x").map
    exp_x = resolve_field_entry("exp:x").map
    for alpha in ALPHAS:
        for k, draw in enumerate(REAL_DRAWS):
            params = draw.with_alpha(alpha)
            c = coefficient_c(params).real
            for a, b in ((0.7, 1.3), (2.0, 0.5)):
                jac = jacobian_matrix(sin_x, [a, b], params, cfg.limit)[0]
                expected = c * a ** (1 - alpha) * math.cos(a)
                yield Case(f"sin draw{k} alpha={alpha} a={a}", abs(jac[0] - expected), 1e-8)
                yield Case(f"sin dy draw{k} alpha={alpha} a={a}", abs(jac[1]), 1e-8)
                jac = jacobian_matrix(exp_x, [a, b], params, cfg.limit)[0]
                expected = c * a ** (1 - alpha) * math.exp(a)
                yield Case(f"exp draw{k} alpha={alpha} a={a}", abs(jac[0] - expected), 1e-8)


def _residual_decay(cfg: SuiteConfig) -> Iterator[Case]:
    params = ParameterSet.unit(alpha=0.5)
    for f, a in _vector_corpus():
        L = jacobian_matrix(f, a, params, cfg.limit)
        slope, _ = residual_decay_slope(f, a, L, params)
        yield Case(f"{f.name} slope", slope, 0.9, kind="ge")


def _uniqueness(cfg: SuiteConfig) -> Iterator[Case]:
    params = ParameterSet.unit(alpha=0.5)
    for f, a in _vector_corpus():
        L = jacobian_matrix(f, a, params, cfg.limit)
        d = np.ones(a.dim) / math.sqrt(a.dim)
        for size in (1e-3, 1e-1):
            E = size * np.outer(np.eye(f.n_out)[0], d)
            residual = linear_map_residual(f, a, L + E, params, 1e-7 * d)
            yield Case(f"{f.name} |E|={size}", residual, size / 2, kind="ge")


def _multivariable_algebra(cfg: SuiteConfig) -> Iterator[Case]:
    f = resolve_field_entry("sincos").map
    g = resolve_field_entry("expsum:0.5").map
    h = resolve_field_entry("poly2:x2y+3*y").map
    for k, params in enumerate(REAL_DRAWS):
        for a in ([1.0, 2.0], [0.5, 0.8]):
            yield Case(
                f"linearity draw{k} a={a}",
                multivariable_linearity_residual(f, g, a, 2.0, -0.5, params, cfg.limit),
                1e-6,
            )
            yield Case(
                f"product draw{k} a={a}",
                multivariable_product_residual(f, h, a, params, cfg.limit),
                1e-6,
            )


def _scalar_consistency(cfg: SuiteConfig) -> Iterator[Case]:
    for name in SCALAR_CORPUS:
        f = resolve_scalar(name)
        vec = scalar_as_vector(f)
        for k, params in enumerate(REAL_DRAWS):
            for t in T_GRID:
                lhs = v_partial(vec, [t], 1, params, cfg.limit)
                rhs = v_derivative_limit(f, t, params, cfg.limit)
                yield Case(f"{name} draw{k} t={t}", abs(lhs - rhs), 1e-12)


def _componentwise(cfg: SuiteConfig) -> Iterator[Case]:
    for f, a in _vector_corpus():
        for k, params in enumerate(REAL_DRAWS):
            yield Case(f"{f.name} draw{k}", componentwise_check(f, a, params, cfg.limit), 1e-8)


def _outer_map() -> VectorMap:
    def fn(u: np.ndarray) -> np.ndarray:
        return np.array([u[0] * u[1], np.sin(u[0]) + u[1] ** 2])

    def jac(u: np.ndarray) -> np.ndarray:
        return np.array([[u[1], u[0]], [np.cos(u[0]), 2 * u[1]]])

    return VectorMap(fn=fn, n_in=2, n_out=2, name="(uv, sin u + v^2)", jacobian=jac)


def _multivariable_chain(cfg: SuiteConfig) -> Iterator[Case]:
    g = _outer_map()
    f, a = _vector_corpus()[0]

    def composite(x: np.ndarray) -> np.ndarray:
        return g(f(x))

    gf = VectorMap(fn=composite, n_in=2, n_out=2, name="g@f")
    for k, params in enumerate(REAL_DRAWS):
        chained = chain_rule_multi(g, f, a, params, cfg.limit).as_array()
        direct = jacobian_matrix(gf, a, params, cfg.limit)
        gap = np.abs(chained - direct) / np.maximum(1.0, np.abs(direct))
        yield Case(f"composite draw{k}", float(np.max(gap)), 1e-6)

    sin_v = scalar_as_vector(resolve_scalar("sin"))
    exp_s = resolve_scalar("exp")
    exp_v = scalar_as_vector(exp_s)
    for k, params in enumerate(REAL_DRAWS):
        for t in T_GRID:
            scalar = chain_rule(np.cos, exp_s, t, params, cfg.limit)
            multi = chain_rule_multi(sin_v, exp_v, [t], params, cfg.limit).as_array()[0, 0]
            yield Case(f"n=m=p=1 draw{k} t={t}", abs(scalar - multi), 1e-10)

    ident = stack([resolve_field_entry("id:x").map, resolve_field_entry("id:y").map])
    trig = resolve_field_entry("sincos").map
    for k, params in enumerate(REAL_DRAWS):
        for a2 in (Point.of(1.0, 2.0), Point.of(0.4, 1.1)):
            got = chain_rule_multi(trig, ident, a2, params, cfg.limit).as_array()[0]
            grad = trig.analytic_jacobian(a2.as_array())[0]
            scale = coefficient_c(params).real * a2.as_array() ** (1.0 - params.alpha)
            yield Case(f"identity inner draw{k} a={a2.coords}", _max_rel(got, grad * scale), 1e-6)


def _max_rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


# --- vector field ---------------------------------------------------------------

MIXED_CORPUS = ("poly2:x2y3", "expsum:0.5", "sincos")


@lru_cache(maxsize=4)
def _mixed_grid(mixed: LimitConfig) -> Tuple[Tuple[str, complex, complex, complex], ...]:
    params = ParameterSet.unit()
    rows = []
    for name in MIXED_CORPUS:
        entry = resolve_field_entry(name)
        for t in T_GRID:
            for s in T_GRID:
                for alpha in MIXED_ORDERS:
                    for kappa in MIXED_ORDERS:
                        orders = MixedOrders(alpha=alpha, kappa=kappa)
                        ts = mixed_partial_limit(entry.map, t, s, orders, params, mixed, outer="t")
                        st = mixed_partial_limit(entry.map, t, s, orders, params, mixed, outer="s")
                        closed = mixed_partial_closed(entry.mixed, t, s, orders, params)
                        label = f"{name} (t,s)=({t},{s}) alpha={alpha} kappa={kappa}"
                        rows.append((label, ts, st, closed))
    return tuple(rows)


def _mixed_closed(cfg: SuiteConfig) -> Iterator[Case]:
    for label, ts, st, closed in _mixed_grid(cfg.mixed):
        yield Case(f"{label} outer t", _rel(ts, closed), 1e-4)
        yield Case(f"{label} outer s", _rel(st, closed), 1e-4)
    entry = resolve_field_entry("expsum:0.5")
    for k, params in enumerate(REAL_DRAWS):
        orders = MixedOrders(alpha=0.5, kappa=0.5)
        closed = mixed_partial_closed(entry.mixed, 1.0, 1.0, orders, params)
        for outer in ("t", "s"):
            value = mixed_partial_limit(entry.map, 1.0, 1.0, orders, params, cfg.mixed, outer=outer)
            yield Case(f"e^(0.5(t+s)) draw{k} outer {outer}", _rel(value, closed), 1e-4)


def _commutation(cfg: SuiteConfig) -> Iterator[Case]:
    for label, ts, st, _ in _mixed_grid(cfg.mixed):
        yield Case(label, abs(complex(ts) - complex(st)), 1e-4 * (1 + abs(complex(ts))))


GREEN_CASES = (
    ("poly2:xy", "poly2:x2", (1.0, 2.0, 1.0, 3.0), 0.5, 0),
    ("expsum:0.3", "poly2:x2y", (0.5, 1.5, 1.0, 2.0), 0.25, 0),
    ("poly2:y3", "sincos", (1.0, 2.5, 0.5, 1.5), 0.75, 1),
    ("poly2:x+y2", "expsum:0.5", (1.0, 2.0, 0.5, 1.0), 1.0, 0),
    ("const:0", "const:0", (1.0, 2.0, 1.0, 2.0), 0.5, 0),
    ("sin:y", "exp:x", (0.2, 1.0, 0.3, 0.9), 1.0, 2),
)


def _green_data(case: tuple) -> Tuple[VectorMap, VectorMap, Region2D, ParameterSet]:
    fname, gname, bounds, alpha, draw = case
    return (
        resolve_field_entry(fname).map,
        resolve_field_entry(gname).map,
        Region2D.from_bounds(*bounds),
        REAL_DRAWS[draw].with_alpha(alpha),
    )


def _green_identity(cfg: SuiteConfig) -> Iterator[Case]:
    for case in GREEN_CASES:
        f, g, region, params = _green_data(case)
        lhs, rhs = green_sides(f, g, region, params, cfg.quad)
        bound = 1e-8 if params.alpha == 1.0 else 1e-6 * (1 + abs(lhs))
        yield Case(f"{f.name},{g.name} alpha={params.alpha}", abs(lhs - rhs), bound)


def _green_forms(cfg: SuiteConfig) -> Iterator[Case]:
    for case in GREEN_CASES:
        f, g, region, params = _green_data(case)
        full, simple = green_lhs_forms(f, g, region, params, cfg.quad)
        label = f"{f.name},{g.name} alpha={params.alpha}"
        yield Case(label, abs(full - simple), 1e-8 * (1 + abs(full)))


def _green_additivity(cfg: SuiteConfig) -> Iterator[Case]:
    for case in GREEN_CASES[:4]:
        f, g, region, params = _green_data(case)
        mid = 0.5 * (region.x_iv.lo + region.x_iv.hi)
        left, right = region.split_x(mid)
        whole = green_lhs(f, g, region, params, cfg.quad)
        parts = green_lhs(f, g, left, params, cfg.quad) + green_lhs(f, g, right, params, cfg.quad)
        yield Case(f"lhs {f.name},{g.name}", abs(whole - parts), 1e-6)
        whole = green_rhs(f, g, Curve2D.rectangle(region), params, cfg.quad)
        parts = green_rhs(f, g, Curve2D.rectangle(left), params, cfg.quad) + green_rhs(
            f, g, Curve2D.rectangle(right), params, cfg.quad
        )
        yield Case(f"rhs {f.name},{g.name}", abs(whole - parts), 1e-6)


def _green_orientation(cfg: SuiteConfig) -> Iterator[Case]:
    for case in GREEN_CASES:
        f, g, region, params = _green_data(case)
        curve = Curve2D.rectangle(region)
        forward = green_rhs(f, g, curve, params, cfg.quad)
        backward = green_rhs(f, g, curve.reversed(), params, cfg.quad)
        yield Case(f"{f.name},{g.name}", abs(forward + backward), 1e-10)


CHECKS: Dict[str, Tuple[str, CheckFn]] = {
    "h-at-zero": ("special_functions", _h_at_zero),
    "pochhammer-k0": ("special_functions", _pochhammer_k0),
    "truncation-consistency": ("special_functions", _truncation_consistency),
    "log-space-range": ("special_functions", _log_space_range),
    "linear-coefficient": ("special_functions", _linear_coefficient),
    "quad-additivity": ("quadrature", _additivity),
    "quad-substitution": ("quadrature", _substitution),
    "quad-linearity": ("quadrature", _quadrature_linearity),
    "closed-form": ("scalar_calculus", _closed_form),
    "power-rule": ("scalar_calculus", _power_rule),
    "linearity": ("scalar_calculus", _algebra("linearity")),
    "product-rule": ("scalar_calculus", _algebra("product")),
    "quotient-rule": ("scalar_calculus", _algebra("quotient")),
    "constants": ("scalar_calculus", _constants),
    "chain-rule": ("scalar_calculus", _scalar_chain),
    "truncation-independence": ("scalar_calculus", _truncation_independence),
    "conformable-reduction": ("scalar_calculus", _conformable),
    "alpha-one-reduction": ("scalar_calculus", _alpha_one),
    "fundamental-theorem": ("scalar_calculus", _fundamental),
    "jacobian-factorization": ("multivariable", _factorization),
    "worked-examples": ("multivariable", _worked_examples),
    "residual-decay": ("multivariable", _residual_decay),
    "uniqueness": ("multivariable", _uniqueness),
    "multivariable-algebra": ("multivariable", _multivariable_algebra),
    "scalar-consistency": ("multivariable", _scalar_consistency),
    "componentwise": ("multivariable", _componentwise),
    "multivariable-chain-rule": ("multivariable", _multivariable_chain),
    "mixed-closed-form": ("vector_field", _mixed_closed),
    "commutation": ("vector_field", _commutation),
    "green-identity": ("vector_field", _green_identity),
    "green-forms": ("vector_field", _green_forms),
    "green-additivity": ("vector_field", _green_additivity),
    "green-orientation": ("vector_field", _green_orientation),
}


def check_help() -> str:
    return ", ".join(CHECKS)


def run_check(name: str, cfg: SuiteConfig | None = None) -> ReportRecord:
    if name not in CHECKS:
        raise ValueError(f"Unknown check: {name}")
    module, fn = CHECKS[name]
    cfg = cfg or SuiteConfig()
    inputs: Dict[str, object] = {"check": name, "module": module}
    cases: List[Case] = []
    failure: Optional[VFracError] = None
    with stopwatch() as clock:
        try:
            cases = list(fn(cfg))
        except VFracError as exc:
            failure = exc
    if failure is not None or not cases:
        error = failure.name if failure is not None else None
        message = str(failure) if failure is not None else "check produced no cases"
        logger.warning("check %s failed: %s", name, message)
        return ReportRecord(
            operator="verify",
            inputs=inputs,
            passed=False,
            error=error,
            message=message,
            wall_ms=clock["ms"],
        )
    worst = max(cases, key=lambda c: c.margin)
    failures = [c for c in cases if not c.passed]
    for c in failures:
        logger.info("check %s failed at %s: %.3g vs bound %.3g", name, c.label, c.value, c.bound)
    return ReportRecord(
        operator="verify",
        inputs={**inputs, "cases": len(cases), "worst_case": worst.label},
        value=len(cases) - len(failures),
        residual=float(worst.value),
        tolerance=float(worst.bound),
        passed=not failures,
        message=f"{len(failures)} of {len(cases)} cases failed" if failures else None,
        wall_ms=clock["ms"],
    )


def run_suite(
    only: Sequence[str] | None = None, cfg: SuiteConfig | None = None
) -> List[ReportRecord]:
    """Run every check (or the named ones) in a fixed order."""
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"Unknown check: {', '.join(unknown)}")
    return [run_check(n, cfg) for n in names]


def print_suite_result(records: List[ReportRecord]) -> None:
    """Print a per-check summary to stderr."""
    for rec in records:
        check = rec.inputs.get("check", "?")
        if rec.passed:
            cases = rec.inputs.get("cases", 0)
            typer.secho(f"✓ {check} ({cases} cases)", fg=typer.colors.GREEN, err=True)
        elif rec.error:
            typer.secho(f"✗ {check}: {rec.error}: {rec.message}", fg=typer.colors.RED, err=True)
        else:
            typer.secho(
                f"✗ {check}: {rec.message}; worst {rec.inputs.get('worst_case')} "
                f"({rec.residual:.3g} vs {rec.tolerance:.3g})",
                fg=typer.colors.RED,
                err=True,
            )
    failed = sum(1 for r in records if not r.passed)
    typer.echo(err=True)
    if failed:
        typer.secho(
            f"Verification failed: {failed} of {len(records)} check(s)",
            fg=typer.colors.RED,
            err=True,
        )
    else:
        typer.secho(
            f"Verification passed: {len(records)} check(s)", fg=typer.colors.GREEN, err=True
        )

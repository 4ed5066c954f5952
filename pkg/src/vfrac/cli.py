from __future__ import annotations

import logging
import math
import os
from typing import Annotated, Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple

import typer
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.console import Console
from rich.logging import RichHandler

from vfrac.errors import UsageError, VFracError
from vfrac.io import read_config
from vfrac.limits import as_real, as_real_array
from vfrac.maps import stack
from vfrac.models import (
    MIXED_LIMIT,
    LimitConfig,
    MixedOrders,
    ParameterSet,
    Point,
    QuadratureConfig,
    Region2D,
)
from vfrac.multivariable import axis_estimate, jacobian_matrix
from vfrac.registry import (
    SelectorError,
    registry_help,
    resolve,
    resolve_field_entry,
    resolve_scalar,
)
from vfrac.report import ReportRecord, emit, plain, stopwatch
from vfrac.scalar_calculus import (
    derivative_estimate,
    power_rule,
    v_derivative_closed,
    v_derivative_numeric,
    v_integral,
)
from vfrac.special_functions import coefficient_c, truncated_h, truncated_ml
from vfrac.vector_field import green_sides, mixed_partial_closed, mixed_partial_limit
from vfrac.verify import CHECKS, SuiteConfig, check_help, print_suite_result, run_suite

logger = logging.getLogger(__name__)

app = typer.Typer(
    no_args_is_help=True,
    help="vfrac: truncated V-fractional derivatives, integrals, Jacobians and identity checks",
)

Subcommand = Literal[
    "eval-ml", "deriv", "integrate", "partial", "jacobian", "mixed-check", "green-check", "verify"
]

MIXED_TOL = 1e-4
GREEN_TOL = 1e-6

_PARAM_KEYS = {
    "gamma": "gamma_p",
    "beta": "beta_p",
    "rho": "rho_p",
    "delta": "delta_p",
    "p": "p_step",
    "q": "q_step",
}


class RunSpec(BaseModel):
    """A fully validated invocation: which operator, on what, with which settings."""

    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    params: ParameterSet = Field(default_factory=ParameterSet)
    limit: LimitConfig = Field(default_factory=LimitConfig)
    quad: QuadratureConfig = Field(default_factory=QuadratureConfig)
    functions: Tuple[str, ...] = ()
    g: Optional[str] = None
    t: Tuple[float, ...] = ()
    s: Optional[float] = None
    a: Optional[float] = None
    z: complex = 0j
    point: Optional[Tuple[float, ...]] = None
    axis: int = 1
    kappa: Optional[float] = None
    method: Literal["limit", "closed", "numeric", "power"] = "limit"
    exponent: Optional[float] = None
    rect: Optional[Tuple[float, float, float, float]] = None
    checks: Tuple[str, ...] = ()
    output_format: Literal["json", "csv"] = "json"
    out: Optional[str] = None
    allow_complex: bool = False


# --- option aliases -------------------------------------------------------------

ConfigOpt = Annotated[
    Optional[str],
    typer.Option("--config", help="YAML file with parameter values; flags override it."),
]
GammaOpt = Annotated[
    Optional[str], typer.Option("--gamma", help="gamma (complex ok, e.g. 1+0.5j). Default 1.")
]
BetaOpt = Annotated[Optional[str], typer.Option("--beta", help="beta (complex ok). Default 1.")]
RhoOpt = Annotated[Optional[str], typer.Option("--rho", help="rho (complex ok). Default 1.")]
DeltaOpt = Annotated[Optional[str], typer.Option("--delta", help="delta (complex ok). Default 1.")]
POpt = Annotated[Optional[float], typer.Option("--p", help="Pochhammer step p > 0. Default 1.")]
QOpt = Annotated[Optional[float], typer.Option("--q", help="Pochhammer step q > 0. Default 1.")]
TruncOpt = Annotated[
    Optional[int], typer.Option("--trunc-i", help="Series truncation index. Default 2.")
]
AlphaOpt = Annotated[
    Optional[float], typer.Option("--alpha", help="Order alpha in (0, 1]. Default 0.5.")
]
AbsTolOpt = Annotated[
    Optional[float], typer.Option("--abs-tol", help="Quadrature absolute tolerance.")
]
RelTolOpt = Annotated[
    Optional[float], typer.Option("--rel-tol", help="Quadrature relative tolerance.")
]
EpsBaseOpt = Annotated[
    Optional[float], typer.Option("--eps-base", help="First step of the epsilon ladder.")
]
EpsLevelsOpt = Annotated[
    Optional[int], typer.Option("--eps-levels", help="Length of the epsilon ladder.")
]
FormatOpt = Annotated[str, typer.Option("--format", help="Report format: json or csv.")]
OutOpt = Annotated[
    Optional[str], typer.Option("--out", help="Write the report here instead of stdout.")
]
ComplexOpt = Annotated[
    bool,
    typer.Option("--allow-complex", help="Report complex values instead of failing on them."),
]


def _message(exc: ValidationError) -> str:
    err = exc.errors()[0]
    msg = str(err.get("msg", exc))
    return msg.removeprefix("Value error, ")


def _complex_flag(name: str, text: Optional[str]) -> Optional[complex]:
    if text is None:
        return None
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise typer.BadParameter(f"--{name} expects a real or complex number, got {text!r}")


def _floats(
    name: str, text: Optional[str], count: Optional[int] = None
) -> Optional[Tuple[float, ...]]:
    if text is None:
        return None
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise typer.BadParameter(f"--{name} expects comma-separated numbers, got {text!r}")
    if count is not None and len(values) != count:
        raise typer.BadParameter(f"--{name} expects {count} numbers, got {len(values)}")
    return values


def _finite(name: str, value: Optional[float]) -> Optional[float]:
    if value is not None and not math.isfinite(value):
        raise typer.BadParameter(f"--{name} must be finite, got {value}", param_hint=f"--{name}")
    return value


def _point(text: str) -> Tuple[float, ...]:
    coords = _floats("point", text) or ()
    try:
        Point.of(*coords)
    except ValidationError as exc:
        raise typer.BadParameter(_message(exc), param_hint="--point")
    return coords


def _build_params(
    config: Optional[str],
    flags: Dict[str, Any],
) -> ParameterSet:
    """Defaults < YAML config < explicit flags."""
    values: Dict[str, Any] = {}
    if config is not None:
        try:
            loaded = read_config(config)
        except (OSError, ValueError) as exc:
            raise typer.BadParameter(str(exc), param_hint="--config")
        for key, value in loaded.items():
            field = _PARAM_KEYS.get(key, key)
            if field not in ParameterSet.model_fields:
                raise typer.BadParameter(
                    f"unknown parameter {key!r} in {config}", param_hint="--config"
                )
            values[field] = value
    for key, value in flags.items():
        if value is not None:
            values[_PARAM_KEYS.get(key, key)] = value
    try:
        return ParameterSet(**values)
    except ValidationError as exc:
        raise typer.BadParameter(_message(exc))


def _common(
    config: Optional[str],
    gamma: Optional[str],
    beta: Optional[str],
    rho: Optional[str],
    delta: Optional[str],
    p: Optional[float],
    q: Optional[float],
    trunc_i: Optional[int],
    alpha: Optional[float],
    abs_tol: Optional[float],
    rel_tol: Optional[float],
    eps_base: Optional[float],
    eps_levels: Optional[int],
    fmt: str,
    out: Optional[str],
    allow_complex: bool,
    limit_default: LimitConfig = LimitConfig(),
) -> Dict[str, Any]:
    flags = {
        "gamma": _complex_flag("gamma", gamma),
        "beta": _complex_flag("beta", beta),
        "rho": _complex_flag("rho", rho),
        "delta": _complex_flag("delta", delta),
        "p": p,
        "q": q,
        "trunc_i": trunc_i,
        "alpha": alpha,
    }
    params = _build_params(config, flags)
    limit_update = {"eps_base": eps_base, "eps_levels": eps_levels}
    quad_update = {"abs_tol": abs_tol, "rel_tol": rel_tol}
    try:
        chosen = {k: v for k, v in limit_update.items() if v is not None}
        limit = LimitConfig(**{**limit_default.model_dump(), **chosen})
        quad = QuadratureConfig(**{k: v for k, v in quad_update.items() if v is not None})
    except ValidationError as exc:
        raise typer.BadParameter(_message(exc))
    if fmt not in ("json", "csv"):
        raise typer.BadParameter(f"--format must be json or csv, got {fmt!r}")
    return {
        "params": params,
        "limit": limit,
        "quad": quad,
        "output_format": fmt,
        "out": out,
        "allow_complex": allow_complex,
    }


def _check_selectors(
    selectors: Sequence[str], kind: Literal["scalar", "field"], n: int = 1
) -> None:
    try:
        for sel in selectors:
            if kind == "field":
                resolve_field_entry(sel)
            else:
                resolve(sel, n)
    except SelectorError as exc:
        raise typer.BadParameter(str(exc), param_hint="--f")


def _finish(ctx: typer.Context, common: Dict[str, Any], **fields: Any) -> None:
    try:
        spec = RunSpec(**common, **fields)
    except ValidationError as exc:
        raise typer.BadParameter(_message(exc))
    obj = ctx.obj if isinstance(ctx.obj, dict) else {}
    if obj.get("parse_only"):
        obj["spec"] = spec
        return
    records, code = run(spec)
    emit(records, spec.output_format, spec.out)
    if spec.subcommand == "verify":
        print_suite_result(records)
    if code:
        raise typer.Exit(code=code)


# --- commands -------------------------------------------------------------------


@app.callback()
def main(
    ctx: typer.Context,
    log_level: str = typer.Option("WARNING", "--log-level", help="Diagnostics level on stderr."),
) -> None:
    """Operators report to stdout (or --out); diagnostics go to stderr."""
    ctx.ensure_object(dict)
    level = logging.getLevelName(log_level.upper())
    if not isinstance(level, int):
        raise typer.BadParameter(f"unknown log level {log_level!r}", param_hint="--log-level")
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
    seed = os.environ.get("VFRAC_SEED")
    if seed is not None:
        logger.debug("VFRAC_SEED=%s (suites are deterministic; the seed is not used)", seed)


@app.command(name="eval-ml")
def eval_ml_cmd(
    ctx: typer.Context,
    z: str = typer.Option("0", "--z", help="Argument of the truncated series (complex ok)."),
    config: ConfigOpt = None,
    gamma: GammaOpt = None,
    beta: BetaOpt = None,
    rho: RhoOpt = None,
    delta: DeltaOpt = None,
    p: POpt = None,
    q: QOpt = None,
    trunc_i: TruncOpt = None,
    alpha: AlphaOpt = None,
    fmt: FormatOpt = "json",
    out: OutOpt = None,
) -> None:
    """Evaluate the truncated Mittag-Leffler series, H and the coefficient C."""
    common = _common(
        config, gamma, beta, rho, delta, p, q, trunc_i, alpha,
        None, None, None, None, fmt, out, True,
    )
    _finish(ctx, common, subcommand="eval-ml", z=_complex_flag("z", z))


@app.command(name="deriv")
def deriv_cmd(
    ctx: typer.Context,
    f: str = typer.Option(..., "--f", help=f"Function selector. {registry_help()}."),
    t: List[float] = typer.Option(..., "--t", help="Evaluation point t > 0 (repeat for several)."),
    method: str = typer.Option("limit", "--method", help="limit, closed, numeric or power."),
    exponent: Optional[float] = typer.Option(
        None, "--exponent", help="Exponent a for --method power."
    ),
    config: ConfigOpt = None,
    gamma: GammaOpt = None,
    beta: BetaOpt = None,
    rho: RhoOpt = None,
    delta: DeltaOpt = None,
    p: POpt = None,
    q: QOpt = None,
    trunc_i: TruncOpt = None,
    alpha: AlphaOpt = None,
    eps_base: EpsBaseOpt = None,
    eps_levels: EpsLevelsOpt = None,
    fmt: FormatOpt = "json",
    out: OutOpt = None,
    allow_complex: ComplexOpt = False,
) -> None:
    """Truncated V-fractional derivative of a built-in function."""
    common = _common(
        config, gamma, beta, rho, delta, p, q, trunc_i, alpha, None, None, eps_base, eps_levels,
        fmt, out, allow_complex,
    )
    if method == "power" and exponent is None:
        raise typer.BadParameter("--method power needs --exponent", param_hint="--exponent")
    if method != "power":
        _check_selectors([f], "scalar")
    _finish(
        ctx,
        common,
        subcommand="deriv",
        functions=(f,),
        t=tuple(_finite("t", v) for v in t),
        method=method,
        exponent=exponent,
    )


@app.command(name="integrate")
def integrate_cmd(
    ctx: typer.Context,
    f: str = typer.Option(..., "--f", help="Function selector."),
    t: float = typer.Option(..., "--t", help="Upper limit."),
    a: float = typer.Option(0.0, "--a", help="Lower limit a >= 0."),
    config: ConfigOpt = None,
    gamma: GammaOpt = None,
    beta: BetaOpt = None,
    rho: RhoOpt = None,
    delta: DeltaOpt = None,
    p: POpt = None,
    q: QOpt = None,
    trunc_i: TruncOpt = None,
    alpha: AlphaOpt = None,
    abs_tol: AbsTolOpt = None,
    rel_tol: RelTolOpt = None,
    fmt: FormatOpt = "json",
    out: OutOpt = None,
    allow_complex: ComplexOpt = False,
) -> None:
    """Truncated V-fractional integral of f over [a, t]."""
    common = _common(
        config, gamma, beta, rho, delta, p, q, trunc_i, alpha, abs_tol, rel_tol, None, None,
        fmt, out, allow_complex,
    )
    _check_selectors([f], "scalar")
    _finish(
        ctx, common, subcommand="integrate", functions=(f,), t=(_finite("t", t),),
        a=_finite("a", a),
    )


@app.command(name="partial")
def partial_cmd(
    ctx: typer.Context,
    f: str = typer.Option(..., "--f", help="Function selector (scalar on R, field on R^2)."),
    point: str = typer.Option(..., "--point", help="Base point, comma-separated."),
    axis: int = typer.Option(1, "--axis", help="Axis to differentiate along (1-based)."),
    config: ConfigOpt = None,
    gamma: GammaOpt = None,
    beta: BetaOpt = None,
    rho: RhoOpt = None,
    delta: DeltaOpt = None,
    p: POpt = None,
    q: QOpt = None,
    trunc_i: TruncOpt = None,
    alpha: AlphaOpt = None,
    eps_base: EpsBaseOpt = None,
    eps_levels: EpsLevelsOpt = None,
    fmt: FormatOpt = "json",
    out: OutOpt = None,
    allow_complex: ComplexOpt = False,
) -> None:
    """V-fractional partial derivative of a scalar-output map."""
    common = _common(
        config, gamma, beta, rho, delta, p, q, trunc_i, alpha, None, None, eps_base, eps_levels,
        fmt, out, allow_complex,
    )
    coords = _point(point)
    _check_selectors([f], "scalar", n=len(coords))
    if not 1 <= axis <= len(coords):
        raise typer.BadParameter(f"--axis must be in 1..{len(coords)}", param_hint="--axis")
    _finish(ctx, common, subcommand="partial", functions=(f,), point=coords, axis=axis)


@app.command(name="jacobian")
def jacobian_cmd(
    ctx: typer.Context,
    f: List[str] = typer.Option(..., "--f", help="Component selector (repeat for each row)."),
    point: str = typer.Option(..., "--point", help="Base point, comma-separated."),
    config: ConfigOpt = None,
    gamma: GammaOpt = None,
    beta: BetaOpt = None,
    rho: RhoOpt = None,
    delta: DeltaOpt = None,
    p: POpt = None,
    q: QOpt = None,
    trunc_i: TruncOpt = None,
    alpha: AlphaOpt = None,
    eps_base: EpsBaseOpt = None,
    eps_levels: EpsLevelsOpt = None,
    fmt: FormatOpt = "json",
    out: OutOpt = None,
) -> None:
    """V-fractional Jacobian of the map whose rows are the given components."""
    common = _common(
        config, gamma, beta, rho, delta, p, q, trunc_i, alpha, None, None, eps_base, eps_levels,
        fmt, out, False,
    )
    coords = _point(point)
    _check_selectors(f, "scalar", n=len(coords))
    _finish(ctx, common, subcommand="jacobian", functions=tuple(f), point=coords)


@app.command(name="mixed-check")
def mixed_check_cmd(
    ctx: typer.Context,
    f: str = typer.Option(..., "--f", help="Field selector f(t, s)."),
    t: float = typer.Option(..., "--t", help="t > 0."),
    s: float = typer.Option(..., "--s", help="s > 0."),
    kappa: Optional[float] = typer.Option(None, "--kappa", help="Order in s; defaults to alpha."),
    config: ConfigOpt = None,
    gamma: GammaOpt = None,
    beta: BetaOpt = None,
    rho: RhoOpt = None,
    delta: DeltaOpt = None,
    p: POpt = None,
    q: QOpt = None,
    trunc_i: TruncOpt = None,
    alpha: AlphaOpt = None,
    eps_base: EpsBaseOpt = None,
    eps_levels: EpsLevelsOpt = None,
    fmt: FormatOpt = "json",
    out: OutOpt = None,
) -> None:
    """Both nestings of the mixed partial, the closed form, and their commutation."""
    common = _common(
        config, gamma, beta, rho, delta, p, q, trunc_i, alpha, None, None, eps_base, eps_levels,
        fmt, out, False, limit_default=MIXED_LIMIT,
    )
    _check_selectors([f], "field")
    if kappa is not None and not 0 < kappa <= 1:
        raise typer.BadParameter(f"kappa must be in (0, 1], got {kappa}", param_hint="--kappa")
    _finish(
        ctx, common, subcommand="mixed-check", functions=(f,), t=(_finite("t", t),),
        s=_finite("s", s), kappa=kappa,
    )


@app.command(name="green-check")
def green_check_cmd(
    ctx: typer.Context,
    rect: str = typer.Option(
        ..., "--rect", help="Rectangle x0,x1,y0,y1 inside the positive quadrant."
    ),
    f: str = typer.Option(..., "--f", help="Field selector f(x, y)."),
    g: str = typer.Option(..., "--g", help="Field selector g(x, y)."),
    config: ConfigOpt = None,
    gamma: GammaOpt = None,
    beta: BetaOpt = None,
    rho: RhoOpt = None,
    delta: DeltaOpt = None,
    p: POpt = None,
    q: QOpt = None,
    trunc_i: TruncOpt = None,
    alpha: AlphaOpt = None,
    abs_tol: AbsTolOpt = None,
    rel_tol: RelTolOpt = None,
    fmt: FormatOpt = "json",
    out: OutOpt = None,
) -> None:
    """Both sides of the weighted Green identity on a rectangle."""
    common = _common(
        config, gamma, beta, rho, delta, p, q, trunc_i, alpha, abs_tol, rel_tol, None, None,
        fmt, out, False,
    )
    bounds = _floats("rect", rect, count=4)
    _check_selectors([f, g], "field")
    try:
        Region2D.from_bounds(*bounds)
    except ValidationError as exc:
        raise typer.BadParameter(_message(exc), param_hint="--rect")
    _finish(ctx, common, subcommand="green-check", functions=(f,), g=g, rect=bounds)


@app.command(name="verify")
def verify_cmd(
    ctx: typer.Context,
    only: Optional[List[str]] = typer.Option(
        None, "--only", help=f"Run only these checks: {check_help()}."
    ),
    abs_tol: AbsTolOpt = None,
    rel_tol: RelTolOpt = None,
    eps_base: EpsBaseOpt = None,
    eps_levels: EpsLevelsOpt = None,
    fmt: FormatOpt = "json",
    out: OutOpt = None,
) -> None:
    """Run the property suite; exits 0 only when every check passes."""
    common = _common(
        None, None, None, None, None, None, None, None, None,
        abs_tol, rel_tol, eps_base, eps_levels, fmt, out, False,
    )
    unknown = [name for name in only or [] if name not in CHECKS]
    if unknown:
        raise typer.BadParameter(f"unknown check(s): {', '.join(unknown)}", param_hint="--only")
    _finish(ctx, common, subcommand="verify", checks=tuple(only or ()))


# --- programmatic entry points --------------------------------------------------


# typer may ship its own click; take the base class from what typer raises.
_CLICK_USAGE_ERROR: Any = next(
    c for c in typer.BadParameter.__mro__ if c.__name__ == "UsageError"
)


def parse_args(argv: Sequence[str]) -> RunSpec:
    """Parse argv into a RunSpec without running it; UsageError on bad arguments."""
    obj: Dict[str, Any] = {"parse_only": True}
    command = typer.main.get_command(app)
    try:
        command.main(args=list(argv), prog_name="vfrac", standalone_mode=False, obj=obj)
    except _CLICK_USAGE_ERROR as exc:
        raise UsageError(exc.format_message()) from exc
    if "spec" not in obj:
        raise UsageError("no subcommand given")
    return obj["spec"]


def _record(
    operator: str,
    spec: RunSpec,
    inputs: Dict[str, Any],
    body: Callable[[], Dict[str, Any]],
) -> ReportRecord:
    echo = {**spec.params.describe(), **inputs}
    with stopwatch() as clock:
        try:
            fields = body()
            failure: Optional[VFracError] = None
        except VFracError as exc:
            fields, failure = {}, exc
    if failure is not None:
        logger.error("%s failed: %s: %s", operator, failure.name, failure)
        return ReportRecord(
            operator=operator,
            inputs=echo,
            error=failure.name,
            message=str(failure),
            wall_ms=clock["ms"],
        )
    return ReportRecord(operator=operator, inputs=echo, wall_ms=clock["ms"], **fields)


def _run_eval_ml(spec: RunSpec) -> List[ReportRecord]:
    params, z = spec.params, spec.z
    inputs = {"z": plain(z)}
    return [
        _record("truncated_ml", spec, inputs, lambda: {"value": truncated_ml(params, z)}),
        _record("truncated_h", spec, inputs, lambda: {"value": truncated_h(params, z)}),
        _record("coefficient_c", spec, {}, lambda: {"value": coefficient_c(params)}),
    ]


def _run_deriv(spec: RunSpec) -> List[ReportRecord]:
    params, ac = spec.params, spec.allow_complex
    records = []
    for t in spec.t:
        inputs = {"f": spec.functions[0], "t": t, "method": spec.method}

        def body(t: float = t) -> Dict[str, Any]:
            if spec.method == "power":
                return {"value": power_rule(spec.exponent or 0.0, t, params, ac)}
            f = resolve_scalar(spec.functions[0])
            if spec.method == "closed":
                return {"value": v_derivative_closed(f.prime(), t, params, ac)}
            if spec.method == "numeric":
                return {"value": v_derivative_numeric(f, t, params, ac)}
            est = derivative_estimate(f, t, params, spec.limit)
            return {"value": as_real(est.scalar(), ac), "error_estimate": est.error}

        if spec.method == "power":
            inputs = {"exponent": spec.exponent, "t": t, "method": "power"}
        records.append(_record(f"v_derivative_{spec.method}", spec, inputs, body))
    return records


def _run_integrate(spec: RunSpec) -> List[ReportRecord]:
    a, t = spec.a or 0.0, spec.t[0]
    inputs = {"f": spec.functions[0], "a": a, "t": t}
    f = resolve_scalar(spec.functions[0])
    return [
        _record(
            "v_integral",
            spec,
            inputs,
            lambda: {"value": v_integral(f, a, t, spec.params, spec.quad, spec.allow_complex)},
        )
    ]


def _run_partial(spec: RunSpec) -> List[ReportRecord]:
    coords = spec.point or ()
    inputs = {"f": spec.functions[0], "point": list(coords), "axis": spec.axis}
    fmap = resolve(spec.functions[0], len(coords))

    def body() -> Dict[str, Any]:
        est = axis_estimate(fmap, Point.of(*coords), spec.axis - 1, spec.params, spec.limit)
        return {"value": as_real(est.scalar(), spec.allow_complex), "error_estimate": est.error}

    return [_record("v_partial", spec, inputs, body)]


def _run_jacobian(spec: RunSpec) -> List[ReportRecord]:
    coords = spec.point or ()
    inputs = {"f": list(spec.functions), "point": list(coords)}
    fmap = stack([resolve(sel, len(coords)) for sel in spec.functions])

    def body() -> Dict[str, Any]:
        return {"value": as_real_array(jacobian_matrix(fmap, coords, spec.params, spec.limit))}

    return [_record("v_jacobian", spec, inputs, body)]


def _run_mixed(spec: RunSpec) -> List[ReportRecord]:
    t, s = spec.t[0], spec.s or 0.0
    entry = resolve_field_entry(spec.functions[0])
    kappa = spec.kappa if spec.kappa is not None else spec.params.alpha
    inputs = {"f": spec.functions[0], "t": t, "s": s, "kappa": kappa}
    values: Dict[str, float] = {}

    def nested(outer: Literal["t", "s"]) -> Callable[[], Dict[str, Any]]:
        def body() -> Dict[str, Any]:
            orders = MixedOrders(alpha=spec.params.alpha, kappa=kappa)
            v = mixed_partial_limit(entry.map, t, s, orders, spec.params, spec.limit, outer=outer)
            values[outer] = float(v)
            return {"value": v}

        return body

    records = [
        _record("mixed_partial_limit", spec, {**inputs, "outer": "t"}, nested("t")),
        _record("mixed_partial_limit", spec, {**inputs, "outer": "s"}, nested("s")),
    ]
    if entry.mixed is not None:
        orders = MixedOrders(alpha=spec.params.alpha, kappa=kappa)
        records.append(
            _record(
                "mixed_partial_closed",
                spec,
                inputs,
                lambda: {"value": mixed_partial_closed(entry.mixed, t, s, orders, spec.params)},
            )
        )

    def commutation() -> Dict[str, Any]:
        if len(values) < 2:
            return {"passed": False, "message": "a nested limit failed"}
        residual = abs(values["t"] - values["s"])
        tol = MIXED_TOL * (1 + abs(values["t"]))
        return {"residual": residual, "tolerance": tol, "passed": residual <= tol}

    records.append(_record("commutativity_check", spec, inputs, commutation))
    return records


def _run_green(spec: RunSpec) -> List[ReportRecord]:
    region = Region2D.from_bounds(*(spec.rect or (1.0, 2.0, 1.0, 2.0)))
    f_sel, g_sel = spec.functions[0], spec.g or "const:0"
    f, g = resolve_field_entry(f_sel).map, resolve_field_entry(g_sel).map
    inputs = {"f": f_sel, "g": g_sel, "rect": list(spec.rect or ())}

    def body() -> Dict[str, Any]:
        lhs, rhs = green_sides(f, g, region, spec.params, spec.quad)
        residual = abs(lhs - rhs)
        tol = GREEN_TOL * (1 + abs(lhs))
        return {
            "value": [lhs, rhs],
            "residual": residual,
            "tolerance": tol,
            "passed": residual <= tol,
        }

    return [_record("green_check", spec, inputs, body)]


def _run_verify(spec: RunSpec) -> List[ReportRecord]:
    cfg = SuiteConfig(limit=spec.limit, quad=spec.quad)
    return run_suite(spec.checks or None, cfg)


_RUNNERS: Dict[str, Callable[[RunSpec], List[ReportRecord]]] = {
    "eval-ml": _run_eval_ml,
    "deriv": _run_deriv,
    "integrate": _run_integrate,
    "partial": _run_partial,
    "jacobian": _run_jacobian,
    "mixed-check": _run_mixed,
    "green-check": _run_green,
    "verify": _run_verify,
}


def run(spec: RunSpec) -> Tuple[List[ReportRecord], int]:
    """Execute a RunSpec; exit code 1 on any operator error or failed verify check."""
    records = _RUNNERS[spec.subcommand](spec)
    if any(r.error is not None for r in records):
        return records, 1
    if spec.subcommand == "verify" and any(r.passed is False for r in records):
        return records, 1
    return records, 0


if __name__ == "__main__":
    app()

"""
Adaptive Gauss-Kronrod integration for the weighted measure x^(alpha-1) dx.

The endpoint singularity at 0 is removed exactly by u = x^alpha, so every
integral handed to the panel engine is smooth on a closed interval.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from multiprocessing.pool import ThreadPool
from typing import Any, Callable, Tuple, Union

import numpy as np
from scipy import integrate

from vfrac.errors import DomainError, NonConvergence
from vfrac.maps import ScalarMap, VectorMap
from vfrac.models import Interval, QuadratureConfig, Region2D

logger = logging.getLogger(__name__)

_STATUS = {
    1: "subdivision budget exhausted",
    2: "non-finite integrand values",
}


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    evaluations: int
    panels: int


def _quad_vec(
    g: Callable[[float], Any],
    lo: float,
    hi: float,
    cfg: QuadratureConfig,
    workers: Union[int, Callable[..., Any]],
) -> Tuple[Any, Any, Any]:
    return integrate.quad_vec(
        g,
        lo,
        hi,
        epsabs=cfg.abs_tol,
        epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions,
        workers=workers,
        quadrature=f"gk{cfg.nodes_per_panel}",
        full_output=True,
    )


def integrate_detailed(
    g: Callable[[float], Any], lo: float, hi: float, cfg: QuadratureConfig, what: str = "g"
) -> QuadResult:
    """quad_vec on [lo, hi] with the panel rule and budget from cfg."""
    if cfg.workers > 1:
        # integrands are closures and cannot be pickled into a process pool
        with ThreadPool(cfg.workers) as pool:
            res, err, info = _quad_vec(g, lo, hi, cfg, pool.map)
    else:
        res, err, info = _quad_vec(g, lo, hi, cfg, 1)
    if info.status != 0:
        reason = _STATUS.get(info.status, f"status {info.status}")
        raise NonConvergence(
            f"integral of {what} on [{lo:g}, {hi:g}] did not converge: {reason} "
            f"(error estimate {float(err):.3g}, max_subdivisions={cfg.max_subdivisions})"
        )
    value = complex(np.asarray(res).reshape(-1)[0]) if np.iscomplexobj(res) else float(res)
    if not (math.isfinite(abs(value)) and math.isfinite(float(err))):
        raise NonConvergence(f"integral of {what} on [{lo:g}, {hi:g}] is not finite")
    panels = len(info.intervals) if info.intervals is not None else 0
    logger.debug(
        "quad %s on [%g, %g]: value=%r err=%.3g neval=%d panels=%d",
        what,
        lo,
        hi,
        value,
        float(err),
        info.neval,
        panels,
    )
    return QuadResult(value=value, error=float(err), evaluations=int(info.neval), panels=panels)


def integrate_adaptive(
    g: Union[ScalarMap, Callable[[float], Any]],
    iv: Interval,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Integral of g over iv."""
    name = getattr(g, "name", getattr(g, "__name__", "g"))
    return integrate_detailed(g, iv.lo, iv.hi, cfg or QuadratureConfig(), what=name).value


def weighted_detailed(
    f: Union[ScalarMap, Callable[[float], Any]],
    iv: Interval,
    alpha: float,
    cfg: QuadratureConfig | None = None,
) -> QuadResult:
    if iv.lo < 0:
        raise DomainError(f"weighted integrals need lo >= 0, got [{iv.lo}, {iv.hi}]")
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    inv = 1.0 / alpha

    def integrand(u: float) -> Any:
        return f(u**inv) * inv

    name = getattr(f, "name", getattr(f, "__name__", "f"))
    return integrate_detailed(
        integrand, iv.lo**alpha, iv.hi**alpha, cfg or QuadratureConfig(), what=f"{name}*x^(a-1)"
    )


def integrate_weighted(
    f: Union[ScalarMap, Callable[[float], Any]],
    iv: Interval,
    alpha: float,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Integral of f(x) x^(alpha-1) over iv (lo >= 0), after u = x^alpha."""
    return weighted_detailed(f, iv, alpha, cfg).value


def _as_xy(h: Union[VectorMap, Callable[[float, float], Any]]) -> Callable[[float, float], Any]:
    if isinstance(h, VectorMap):
        if h.dims != (2, 1):
            raise ValueError(f"double integrals need a map R^2 -> R, got dims {h.dims}")
        return lambda x, y: h(np.array([x, y]))[0]
    return h


def double_integral_rect(
    h: Union[VectorMap, Callable[[float, float], Any]],
    rect: Union[Region2D, Tuple[Interval, Interval]],
    cfg: QuadratureConfig | None = None,
) -> float:
    """Iterated integral over a rectangle: inner in x, outer in y. Workers fan out over y."""
    cfg = (cfg or QuadratureConfig()).split(2)
    inner_cfg = cfg.model_copy(update={"workers": 1})
    x_iv, y_iv = (rect.x_iv, rect.y_iv) if isinstance(rect, Region2D) else rect
    fn = _as_xy(h)

    def inner(y: float) -> Any:
        return integrate_detailed(
            lambda x: fn(x, y), x_iv.lo, x_iv.hi, inner_cfg, what="inner x"
        ).value

    return integrate_detailed(inner, y_iv.lo, y_iv.hi, cfg, what="outer y").value

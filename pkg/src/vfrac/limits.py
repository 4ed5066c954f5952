"""
Epsilon-ladder Richardson extrapolation of the V-fractional limit quotient

    [f(t * H(eps * t^-alpha)) - f(t)] / eps,   eps -> 0.

The quotient is analytic in eps (H is a polynomial), so its bias is a power series
in eps and halving the step lets a Neville tableau remove it order by order. Values
may be vectors (one column of a Jacobian at a time); every tableau operation is
elementwise so a row computed as part of a vector equals the row computed alone.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from vfrac.errors import DomainError, NonRealResult, UnstableLimit
from vfrac.models import LimitConfig, ParameterSet
from vfrac.special_functions import probe_point

logger = logging.getLogger(__name__)

_U = np.finfo(float).eps
NOISE_SAFETY = 64.0
INSTABILITY_RATIO = 1e3
DIVERGENCE_RATIO = 8.0
IMAG_TOL = 1e-10
# imaginary parts below this are rounding even when the real part vanishes
IMAG_FLOOR = 1e-14

# Evaluates the map at a probe argument and returns (value, absolute noise of value).
Evaluator = Callable[[complex | float], Tuple[np.ndarray, float]]


@dataclass(frozen=True)
class LimitEstimate:
    value: np.ndarray
    error: float
    noise: float
    quotients: Tuple[np.ndarray, ...]

    def scalar(self) -> complex:
        return complex(self.value.reshape(-1)[0])


def as_real(value: complex, allow_complex: bool = False) -> complex | float:
    """Real-only wrapper: drop a negligible imaginary part or raise NonRealResult."""
    value = complex(value)
    if allow_complex:
        return value
    if abs(value.imag) > IMAG_TOL * abs(value.real) + IMAG_FLOOR:
        raise NonRealResult(
            f"result {value} has a non-negligible imaginary part; pass allow_complex=True"
        )
    return value.real


def as_real_array(values: np.ndarray, allow_complex: bool = False) -> np.ndarray:
    values = np.asarray(values)
    if allow_complex or not np.iscomplexobj(values):
        return values
    im = np.abs(values.imag)
    if np.any(im > IMAG_TOL * np.abs(values.real) + IMAG_FLOOR):
        raise NonRealResult("result has non-negligible imaginary parts; pass allow_complex=True")
    return values.real.copy()


def _simplify(z: complex) -> complex | float:
    return z.real if z.imag == 0 else z


def _norm(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if x.size else 0.0


def _tableau(quotients: List[np.ndarray], order: int) -> List[List[np.ndarray]]:
    table: List[List[np.ndarray]] = []
    for j, q in enumerate(quotients):
        row = [q]
        for m in range(1, min(j, order) + 1):
            factor = 2.0**m
            row.append((factor * row[m - 1] - table[j - 1][m - 1]) / (factor - 1.0))
        table.append(row)
    return table


def extrapolate_quotient(
    evaluate: Evaluator,
    t: float,
    params: ParameterSet,
    cfg: LimitConfig,
    domain: Tuple[float, float] = (0.0, math.inf),
    what: str = "f",
) -> LimitEstimate:
    """Richardson limit of the probe quotient of `evaluate` at base point t > 0."""
    if not t > 0:
        raise DomainError(f"derivative base point must be > 0, got {t}")
    if params.trunc_i < 1:
        raise DomainError("trunc_i must be >= 1 for derivatives (H is constant when trunc_i = 0)")
    lo, hi = domain
    if not lo < t < hi:
        raise DomainError(f"base point {t} is outside the domain ({lo}, {hi}) of {what}")

    f0, noise0 = evaluate(t)
    f0 = np.atleast_1d(np.asarray(f0))
    if not np.all(np.isfinite(f0)):
        raise DomainError(f"{what}({t}) is not finite")

    eps_ladder = cfg.ladder()
    quotients: List[np.ndarray] = []
    noise = 0.0
    for eps in eps_ladder:
        p = _simplify(probe_point(t, float(eps), params))
        pr = p.real if isinstance(p, complex) else p
        if not (math.isfinite(pr) and lo < pr < hi):
            raise DomainError(f"probe point {p} (eps={eps:.3g}) leaves the domain of {what}")
        fp, noise_p = evaluate(p)
        fp = np.atleast_1d(np.asarray(fp))
        if not np.all(np.isfinite(fp)):
            raise DomainError(f"{what}({p}) is not finite")
        q = (fp - f0) / eps
        quotients.append(q)
        step = abs(p - t)
        level_noise = (_U * (_norm(fp) + _norm(f0)) + noise_p + noise0) / eps
        if step > 0:
            level_noise += _U * abs(p) * _norm(q) / step
        noise = max(noise, level_noise)
    noise *= NOISE_SAFETY

    order = cfg.effective_order
    table = _tableau(quotients, order)
    last, prev = table[-1], table[-2]
    best = last[order]
    if not np.all(np.isfinite(best)):
        raise UnstableLimit(f"non-finite extrapolant for {what} at t={t}")

    if order >= 1:
        err = _norm(best - last[order - 1])
    else:
        err = _norm(quotients[-1] - quotients[-2])
    weight = math.prod((2.0**m + 1.0) / (2.0**m - 1.0) for m in range(1, order + 1))
    extrap_noise = noise * weight

    diffs = [_norm(quotients[j] - quotients[j - 1]) for j in range(1, len(quotients))]
    if len(diffs) >= 2 and diffs[-1] > DIVERGENCE_RATIO * (max(diffs[:2]) + noise):
        raise UnstableLimit(
            f"quotients for {what} at t={t} grow as eps shrinks "
            f"({diffs[0]:.3g} -> {diffs[-1]:.3g}); the limit does not exist"
        )
    successive = _norm(best - prev[order])
    if successive > INSTABILITY_RATIO * (err + extrap_noise):
        raise UnstableLimit(
            f"successive extrapolants for {what} at t={t} differ by {successive:.3g}, "
            f"more than {INSTABILITY_RATIO:g}x the error estimate {err:.3g}"
        )

    logger.debug(
        "limit %s at t=%g: levels=%d order=%d err=%.3g noise=%.3g",
        what,
        t,
        cfg.eps_levels,
        order,
        err,
        extrap_noise,
    )
    return LimitEstimate(
        value=best, error=err, noise=extrap_noise, quotients=tuple(quotients)
    )


def plain_evaluator(fn: Callable[[complex | float], object]) -> Evaluator:
    """Wrap a map without its own error estimate."""

    def evaluate(x: complex | float) -> Tuple[np.ndarray, float]:
        return np.asarray(fn(x)), 0.0

    return evaluate

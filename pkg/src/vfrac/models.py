from __future__ import annotations

import math
from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator


class ParameterSet(BaseModel):
    """
    The six parameters of the truncated Mittag-Leffler kernel plus the order and
    the truncation index:
    - gamma_p, beta_p, rho_p, delta_p: complex, positive real parts
    - p_step, q_step: positive reals with Re(gamma_p) + p_step >= q_step
    - trunc_i: last index of the truncated series (derivatives need trunc_i >= 1)
    - alpha: derivative order in (0, 1]
    """

    model_config = ConfigDict(frozen=True)

    gamma_p: complex = 1 + 0j
    beta_p: complex = 1 + 0j
    rho_p: complex = 1 + 0j
    delta_p: complex = 1 + 0j
    p_step: float = Field(default=1.0, gt=0)
    q_step: float = Field(default=1.0, gt=0)
    trunc_i: int = Field(default=2, ge=0)
    alpha: float = Field(default=0.5, gt=0, le=1)

    @field_validator("gamma_p", "beta_p", "rho_p", "delta_p")
    @classmethod
    def _positive_real_part(cls, v: complex, info: ValidationInfo) -> complex:
        symbol = info.field_name[: -len("_p")]
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"{symbol} must be finite")
        if v.real <= 0:
            raise ValueError(f"Re({symbol}) > 0 violated")
        return complex(v)

    @model_validator(mode="after")
    def _check_step_constraint(self) -> "ParameterSet":
        if self.gamma_p.real + self.p_step < self.q_step:
            raise ValueError("Re(gamma)+p >= q violated")
        return self

    @classmethod
    def unit(cls, alpha: float = 0.5, trunc_i: int = 2) -> "ParameterSet":
        return cls(alpha=alpha, trunc_i=trunc_i)

    @classmethod
    def conformable(cls, alpha: float) -> "ParameterSet":
        """Unit parameters with trunc_i=1: H(z) = 1 + z and C = 1."""
        return cls(alpha=alpha, trunc_i=1)

    @classmethod
    def real(
        cls,
        gamma: float,
        beta: float,
        rho: float,
        delta: float,
        p: float,
        q: float,
        alpha: float,
        trunc_i: int = 2,
    ) -> "ParameterSet":
        return cls(
            gamma_p=complex(gamma),
            beta_p=complex(beta),
            rho_p=complex(rho),
            delta_p=complex(delta),
            p_step=p,
            q_step=q,
            alpha=alpha,
            trunc_i=trunc_i,
        )

    @property
    def is_real(self) -> bool:
        return all(
            v.imag == 0 for v in (self.gamma_p, self.beta_p, self.rho_p, self.delta_p)
        )

    def with_alpha(self, alpha: float) -> "ParameterSet":
        return ParameterSet(**{**self.model_dump(), "alpha": alpha})

    def with_trunc(self, trunc_i: int) -> "ParameterSet":
        return ParameterSet(**{**self.model_dump(), "trunc_i": trunc_i})

    def describe(self) -> dict:
        """Flat echo used in reports; complex values render as strings."""

        def _fmt(z: complex) -> object:
            return z.real if z.imag == 0 else str(z)

        return {
            "gamma": _fmt(self.gamma_p),
            "beta": _fmt(self.beta_p),
            "rho": _fmt(self.rho_p),
            "delta": _fmt(self.delta_p),
            "p": self.p_step,
            "q": self.q_step,
            "trunc_i": self.trunc_i,
            "alpha": self.alpha,
        }


class LimitConfig(BaseModel):
    """Geometric epsilon ladder eps_base * 2^-j, j < eps_levels, plus Richardson order."""

    model_config = ConfigDict(frozen=True)

    eps_base: float = Field(default=1e-2, gt=0, le=1e-2)
    eps_levels: int = Field(default=6, ge=2)
    richardson_order: int = Field(default=4, ge=0)

    @property
    def effective_order(self) -> int:
        return min(self.richardson_order, self.eps_levels - 2)

    def ladder(self) -> np.ndarray:
        return self.eps_base * 0.5 ** np.arange(self.eps_levels)

    def deepened(self, extra: int = 2) -> "LimitConfig":
        return self.model_copy(update={"eps_levels": self.eps_levels + extra})


MIXED_LIMIT = LimitConfig(eps_base=1e-2, eps_levels=5, richardson_order=4)


class QuadratureConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default=1e-10, ge=1e-14)
    rel_tol: float = Field(default=1e-10, ge=1e-14)
    max_subdivisions: int = Field(default=4096, ge=1, le=10**6)
    nodes_per_panel: Literal[15, 21] = 15
    workers: int = Field(default=1, ge=1)

    def split(self, parts: int = 2) -> "QuadratureConfig":
        """Per-axis share of the tolerances for iterated integration."""
        return self.model_copy(
            update={
                "abs_tol": max(self.abs_tol / parts, 1e-14),
                "rel_tol": max(self.rel_tol / parts, 1e-14),
            }
        )


class Interval(BaseModel):
    model_config = ConfigDict(frozen=True)

    lo: float
    hi: float

    @model_validator(mode="after")
    def _ordered(self) -> "Interval":
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("Interval bounds must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"Interval requires lo < hi, got [{self.lo}, {self.hi}]")
        return self

    @property
    def width(self) -> float:
        return self.hi - self.lo


class Point(BaseModel):
    model_config = ConfigDict(frozen=True)

    coords: Tuple[float, ...] = Field(min_length=1)

    @field_validator("coords")
    @classmethod
    def _finite(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not all(math.isfinite(c) for c in v):
            raise ValueError("Point coordinates must be finite")
        return v

    @classmethod
    def of(cls, *coords: float) -> "Point":
        return cls(coords=tuple(float(c) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_positive(self) -> bool:
        return all(c > 0 for c in self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


class Region2D(BaseModel):
    model_config = ConfigDict(frozen=True)

    x_iv: Interval
    y_iv: Interval

    @model_validator(mode="after")
    def _positive_quadrant(self) -> "Region2D":
        if self.x_iv.lo <= 0 or self.y_iv.lo <= 0:
            raise ValueError("Region2D must lie strictly inside the positive quadrant")
        return self

    @classmethod
    def from_bounds(cls, x_lo: float, x_hi: float, y_lo: float, y_hi: float) -> "Region2D":
        return cls(x_iv=Interval(lo=x_lo, hi=x_hi), y_iv=Interval(lo=y_lo, hi=y_hi))

    def split_x(self, x_mid: float) -> Tuple["Region2D", "Region2D"]:
        left = Region2D(x_iv=Interval(lo=self.x_iv.lo, hi=x_mid), y_iv=self.y_iv)
        right = Region2D(x_iv=Interval(lo=x_mid, hi=self.x_iv.hi), y_iv=self.y_iv)
        return left, right


class MixedOrders(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0, le=1)
    kappa: float = Field(gt=0, le=1)


def _finite_matrix(v: Tuple[Tuple[float, ...], ...]) -> Tuple[Tuple[float, ...], ...]:
    if not v or not v[0]:
        raise ValueError("matrix must be non-empty")
    width = len(v[0])
    for row in v:
        if len(row) != width:
            raise ValueError("matrix rows must have equal length")
        if not all(math.isfinite(x) for x in row):
            raise ValueError("matrix entries must be finite")
    return v


class LinearMap(BaseModel):
    model_config = ConfigDict(frozen=True)

    matrix: Tuple[Tuple[float, ...], ...]

    @field_validator("matrix")
    @classmethod
    def _check_matrix(cls, v: Tuple[Tuple[float, ...], ...]) -> Tuple[Tuple[float, ...], ...]:
        return _finite_matrix(v)

    @classmethod
    def from_array(cls, m: np.ndarray) -> "LinearMap":
        m = np.atleast_2d(np.asarray(m, dtype=float))
        return cls(matrix=tuple(tuple(float(x) for x in row) for row in m))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    def apply(self, eps: np.ndarray) -> np.ndarray:
        return self.as_array() @ np.asarray(eps, dtype=float)


class VJacobian(BaseModel):
    """m x n matrix of V-fractional partials at `base`."""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[float, ...], ...]
    base: Point
    params: ParameterSet

    @field_validator("entries")
    @classmethod
    def _check_entries(cls, v: Tuple[Tuple[float, ...], ...]) -> Tuple[Tuple[float, ...], ...]:
        return _finite_matrix(v)

    @model_validator(mode="after")
    def _matches_base(self) -> "VJacobian":
        if len(self.entries[0]) != self.base.dim:
            raise ValueError(
                f"Jacobian has {len(self.entries[0])} columns but base point has {self.base.dim}"
            )
        return self

    @classmethod
    def from_array(cls, m: np.ndarray, base: Point, params: ParameterSet) -> "VJacobian":
        m = np.atleast_2d(np.asarray(m, dtype=float))
        entries = tuple(tuple(float(x) for x in row) for row in m)
        return cls(entries=entries, base=base, params=params)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)

    def as_linear_map(self) -> LinearMap:
        return LinearMap(matrix=self.entries)

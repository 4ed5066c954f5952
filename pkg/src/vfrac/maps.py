"""Function carriers passed to the operators: scalar maps, vector maps and closed curves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence, Tuple, Union

import numpy as np

from vfrac.errors import OpenCurve
from vfrac.models import Region2D

CLOSURE_TOL = 1e-10


@dataclass(frozen=True)
class ScalarMap:
    """
    A pure real (or complex-extended) function of one variable.
    - fn: evaluation rule; must accept complex arguments when used with complex parameters
    - derivative: optional classical derivative, used by closed-form operators
    - domain: open interval on which fn is finite
    """

    fn: Callable[[Any], Any]
    name: str = "<anonymous>"
    derivative: Optional[Callable[[Any], Any]] = None
    domain: Tuple[float, float] = (0.0, math.inf)

    def __call__(self, t: Any) -> Any:
        return self.fn(t)

    def prime(self) -> "ScalarMap":
        if self.derivative is None:
            raise ValueError(f"{self.name} has no registered derivative")
        return ScalarMap(fn=self.derivative, name=f"{self.name}'", domain=self.domain)


def as_scalar_map(f: Union[ScalarMap, Callable[[Any], Any]]) -> ScalarMap:
    if isinstance(f, ScalarMap):
        return f
    return ScalarMap(fn=f, name=getattr(f, "__name__", "<anonymous>"))


def _meet(a: Tuple[float, float], b: Tuple[float, float]) -> Tuple[float, float]:
    return max(a[0], b[0]), min(a[1], b[1])


def _both_known(*maps: ScalarMap) -> bool:
    return all(m.derivative is not None for m in maps)


def linear_combination(lam: float, f: ScalarMap, mu: float, g: ScalarMap) -> ScalarMap:
    def fn(t: Any) -> Any:
        return lam * f(t) + mu * g(t)

    def deriv(t: Any) -> Any:
        return lam * f.derivative(t) + mu * g.derivative(t)

    return ScalarMap(
        fn=fn,
        name=f"{lam:g}*{f.name} + {mu:g}*{g.name}",
        derivative=deriv if _both_known(f, g) else None,
        domain=_meet(f.domain, g.domain),
    )


def product(f: ScalarMap, g: ScalarMap) -> ScalarMap:
    def fn(t: Any) -> Any:
        return f(t) * g(t)

    def deriv(t: Any) -> Any:
        return f.derivative(t) * g(t) + f(t) * g.derivative(t)

    return ScalarMap(
        fn=fn,
        name=f"({f.name})*({g.name})",
        derivative=deriv if _both_known(f, g) else None,
        domain=_meet(f.domain, g.domain),
    )


def quotient(f: ScalarMap, g: ScalarMap) -> ScalarMap:
    def fn(t: Any) -> Any:
        return f(t) / g(t)

    def deriv(t: Any) -> Any:
        return (f.derivative(t) * g(t) - f(t) * g.derivative(t)) / g(t) ** 2

    return ScalarMap(
        fn=fn,
        name=f"({f.name})/({g.name})",
        derivative=deriv if _both_known(f, g) else None,
        domain=_meet(f.domain, g.domain),
    )


def compose(outer: ScalarMap, inner: ScalarMap) -> ScalarMap:
    """outer(inner(t)); the domain is inner's, outer must accept inner's range."""

    def fn(t: Any) -> Any:
        return outer(inner(t))

    def deriv(t: Any) -> Any:
        return outer.derivative(inner(t)) * inner.derivative(t)

    return ScalarMap(
        fn=fn,
        name=f"{outer.name}@{inner.name}",
        derivative=deriv if _both_known(outer, inner) else None,
        domain=inner.domain,
    )


@dataclass(frozen=True)
class VectorMap:
    """
    A pure map R^n -> R^m evaluated on 1-D arrays of length n.
    - jacobian: optional analytic classical Jacobian returning an (m, n) array
    """

    fn: Callable[[np.ndarray], Any]
    n_in: int
    n_out: int = 1
    name: str = "<anonymous>"
    jacobian: Optional[Callable[[np.ndarray], Any]] = None

    def __call__(self, x: Any) -> np.ndarray:
        out = np.atleast_1d(np.asarray(self.fn(np.asarray(x))))
        if out.shape != (self.n_out,):
            raise ValueError(f"{self.name} returned shape {out.shape}, expected ({self.n_out},)")
        return out

    @property
    def dims(self) -> Tuple[int, int]:
        return self.n_in, self.n_out

    def component(self, j: int) -> "VectorMap":
        """The j-th component (0-based) as a map R^n -> R."""
        if not 0 <= j < self.n_out:
            raise IndexError(f"component {j} out of range for {self.n_out} outputs")
        parent = self

        def fn(x: np.ndarray) -> Any:
            return parent(x)[j]

        jac = None
        if self.jacobian is not None:

            def jac(x: np.ndarray) -> np.ndarray:
                return np.atleast_2d(np.asarray(parent.jacobian(x)))[j : j + 1, :]

        return VectorMap(fn=fn, n_in=self.n_in, n_out=1, name=f"{self.name}[{j}]", jacobian=jac)

    def analytic_jacobian(self, x: np.ndarray) -> Optional[np.ndarray]:
        if self.jacobian is None:
            return None
        return np.asarray(self.jacobian(np.asarray(x)), dtype=float).reshape(self.n_out, self.n_in)


def stack(maps: Sequence[VectorMap], name: Optional[str] = None) -> VectorMap:
    """Stack scalar-output maps sharing n_in into one vector map."""
    if not maps:
        raise ValueError("stack needs at least one map")
    n_in = maps[0].n_in
    if any(m.n_in != n_in for m in maps):
        raise ValueError("stacked maps must share their input dimension")
    parts = list(maps)

    def fn(x: np.ndarray) -> np.ndarray:
        return np.concatenate([m(x) for m in parts])

    jac = None
    if all(m.jacobian is not None for m in parts):

        def jac(x: np.ndarray) -> np.ndarray:
            return np.vstack([m.analytic_jacobian(x) for m in parts])

    n_out = sum(m.n_out for m in parts)
    label = name or "(" + ", ".join(m.name for m in parts) + ")"
    return VectorMap(fn=fn, n_in=n_in, n_out=n_out, name=label, jacobian=jac)


def field2d(
    fn: Callable[[Any, Any], Any],
    name: str = "<anonymous>",
    grad: Optional[Callable[[Any, Any], Tuple[Any, Any]]] = None,
) -> VectorMap:
    """Wrap f(x, y) as a VectorMap R^2 -> R."""

    def vec(z: np.ndarray) -> Any:
        return fn(z[0], z[1])

    jac = None
    if grad is not None:

        def jac(z: np.ndarray) -> np.ndarray:
            gx, gy = grad(z[0], z[1])
            return np.array([[gx, gy]], dtype=float)

    return VectorMap(fn=vec, n_in=2, n_out=1, name=name, jacobian=jac)


@dataclass(frozen=True)
class Segment:
    """A smooth piece tau -> (x(tau), y(tau)), tau in [0, 1], with its velocity."""

    point: Callable[[float], Tuple[float, float]]
    velocity: Callable[[float], Tuple[float, float]]

    @classmethod
    def line(cls, start: Tuple[float, float], end: Tuple[float, float]) -> "Segment":
        (x0, y0), (x1, y1) = start, end
        dx, dy = x1 - x0, y1 - y0
        return cls(
            point=lambda tau: (x0 + tau * dx, y0 + tau * dy),
            velocity=lambda tau: (dx, dy),
        )

    def reversed(self) -> "Segment":
        point, velocity = self.point, self.velocity

        def rpoint(tau: float) -> Tuple[float, float]:
            return point(1.0 - tau)

        def rvelocity(tau: float) -> Tuple[float, float]:
            vx, vy = velocity(1.0 - tau)
            return -vx, -vy

        return Segment(point=rpoint, velocity=rvelocity)


@dataclass(frozen=True)
class Curve2D:
    segments: Tuple[Segment, ...]
    counterclockwise: bool = True
    closure_tol: float = field(default=CLOSURE_TOL, repr=False)

    @classmethod
    def rectangle(cls, region: Region2D) -> "Curve2D":
        """Counterclockwise boundary of an axis-aligned rectangle."""
        x0, x1 = region.x_iv.lo, region.x_iv.hi
        y0, y1 = region.y_iv.lo, region.y_iv.hi
        corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        segments = tuple(
            Segment.line(corners[k], corners[(k + 1) % 4]) for k in range(4)
        )
        return cls(segments=segments, counterclockwise=True)

    def reversed(self) -> "Curve2D":
        return Curve2D(
            segments=tuple(s.reversed() for s in reversed(self.segments)),
            counterclockwise=not self.counterclockwise,
            closure_tol=self.closure_tol,
        )

    def check_closed(self) -> None:
        if not self.segments:
            raise OpenCurve("curve has no segments")
        n = len(self.segments)
        for k in range(n):
            end = self.segments[k].point(1.0)
            start = self.segments[(k + 1) % n].point(0.0)
            gap = math.hypot(end[0] - start[0], end[1] - start[1])
            if gap > self.closure_tol:
                raise OpenCurve(f"segment {k} ends {gap:.3g} away from the start of the next piece")

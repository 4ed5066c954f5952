"""
Built-in function registry.

Scalar selectors (R -> R):
    sin, cos, exp, ln, id, const:<c>, poly:<c0,c1,...>, expsum:<a>, pow:<a>,
    and compositions outer@inner (right-associative: sin@exp@ln = sin(exp(ln t))).

Field selectors (R^2 -> R):
    poly2:<terms>   terms like xy, x2, 3*x2y3, joined by + / -
    expsum:<a>      e^(a (x + y))
    sincos          sin(x) cos(y)
    const:<c>
    <scalar>:x, <scalar>:y   a scalar selector applied to one coordinate

Every map carries its classical derivative (scalars) or gradient (fields); fields
also expose their mixed second partial for the closed-form mixed derivative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from vfrac.maps import ScalarMap, VectorMap, compose

NUMBER = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
NUMBER_RE = re.compile(rf"^{NUMBER}$")
TERM_RE = re.compile(r"^(?:(?P<coef>\d+(?:\.\d+)?)\*?)?(?:x(?P<xn>\d+)?)?(?:y(?P<yn>\d+)?)?$")
AXIS_RE = re.compile(r"^(?P<inner>.+):(?P<axis>[xy])$")


class SelectorError(ValueError):
    pass


def _number(text: str, selector: str) -> float:
    if not NUMBER_RE.match(text.strip()):
        raise SelectorError(f"Expected a number in {selector!r}, got {text!r}")
    return float(text)


def _numbers(text: str, selector: str) -> List[float]:
    parts = text.split(",")
    if any(not p.strip() for p in parts):
        raise SelectorError(f"Expected comma-separated numbers in {selector!r}")
    return [_number(p, selector) for p in parts]


# --- scalar maps ---------------------------------------------------------------


def _sin() -> ScalarMap:
    return ScalarMap(fn=np.sin, name="sin", derivative=np.cos)


def _cos() -> ScalarMap:
    return ScalarMap(fn=np.cos, name="cos", derivative=lambda t: -np.sin(t))


def _exp() -> ScalarMap:
    return ScalarMap(fn=np.exp, name="exp", derivative=np.exp)


def _ln() -> ScalarMap:
    return ScalarMap(fn=np.log, name="ln", derivative=lambda t: 1.0 / t)


def _identity() -> ScalarMap:
    return ScalarMap(fn=lambda t: t, name="id", derivative=lambda t: 1.0 + 0.0 * t)


_SCALARS: Dict[str, Callable[[], ScalarMap]] = {
    "sin": _sin,
    "cos": _cos,
    "exp": _exp,
    "ln": _ln,
    "log": _ln,
    "id": _identity,
}


def poly(coeffs: List[float]) -> ScalarMap:
    """Polynomial with ascending coefficients c0 + c1 t + ..."""
    c = np.asarray(coeffs, dtype=float)
    dc = P.polyder(c) if c.size > 1 else np.zeros(1)
    label = ",".join(f"{x:g}" for x in coeffs)
    return ScalarMap(
        fn=lambda t: P.polyval(t, c),
        name=f"poly:{label}",
        derivative=lambda t: P.polyval(t, dc),
    )


def expsum(a: float) -> ScalarMap:
    return ScalarMap(
        fn=lambda t: np.exp(a * t),
        name=f"expsum:{a:g}",
        derivative=lambda t: a * np.exp(a * t),
    )


def power(a: float) -> ScalarMap:
    return ScalarMap(
        fn=lambda t: t**a,
        name=f"pow:{a:g}",
        derivative=lambda t: a * t ** (a - 1.0),
    )


def constant(c: float) -> ScalarMap:
    return ScalarMap(fn=lambda t: c + 0.0 * t, name=f"const:{c:g}", derivative=lambda t: 0.0 * t)


_SCALAR_FAMILIES: Dict[str, Callable[[str, str], ScalarMap]] = {
    "poly": lambda arg, sel: poly(_numbers(arg, sel)),
    "expsum": lambda arg, sel: expsum(_number(arg, sel)),
    "pow": lambda arg, sel: power(_number(arg, sel)),
    "const": lambda arg, sel: constant(_number(arg, sel)),
}


def resolve_scalar(selector: str) -> ScalarMap:
    """Resolve a scalar selector, including outer@inner compositions."""
    text = selector.strip()
    if not text:
        raise SelectorError("Empty function selector")
    if "@" in text:
        outer, inner = text.split("@", 1)
        return compose(resolve_scalar(outer), resolve_scalar(inner))
    key = text.lower()
    if key in _SCALARS:
        return _SCALARS[key]()
    family, sep, arg = text.partition(":")
    builder = _SCALAR_FAMILIES.get(family.lower()) if sep else None
    if builder is None:
        raise SelectorError(f"Unknown function: {selector}")
    return builder(arg, selector)


def scalar_as_vector(f: ScalarMap) -> VectorMap:
    """A scalar map as a VectorMap R -> R with its derivative as Jacobian."""

    def fn(x: np.ndarray) -> Any:
        return f(x[0])

    jac = None
    if f.derivative is not None:
        deriv = f.derivative

        def jac(x: np.ndarray) -> np.ndarray:
            return np.array([[float(np.real(deriv(x[0])))]])

    return VectorMap(fn=fn, n_in=1, n_out=1, name=f.name, jacobian=jac)


# --- fields -------------------------------------------------------------------


Mixed = Callable[[Any, Any], Any]


@dataclass(frozen=True)
class FieldEntry:
    """A registry field: the map (with gradient) and its mixed partial f_xy."""

    map: VectorMap
    mixed: Optional[Mixed]


def _field(
    name: str,
    fn: Callable[[Any, Any], Any],
    grad: Callable[[Any, Any], Tuple[Any, Any]],
    mixed: Optional[Mixed],
) -> FieldEntry:
    def vec(z: np.ndarray) -> Any:
        return fn(z[0], z[1])

    def jac(z: np.ndarray) -> np.ndarray:
        gx, gy = grad(z[0], z[1])
        return np.real(np.array([[gx, gy]]))

    return FieldEntry(map=VectorMap(fn=vec, n_in=2, n_out=1, name=name, jacobian=jac), mixed=mixed)


def _monomial_power(base: Any, n: int) -> Any:
    return 1.0 if n == 0 else base**n


def parse_poly2(terms: str, selector: str) -> List[Tuple[float, int, int]]:
    """Parse 'xy + 2*x2 - y3' into (coefficient, x power, y power) triples."""
    text = terms.replace(" ", "")
    if not text:
        raise SelectorError(f"Empty polynomial in {selector!r}")
    if text[0] not in "+-":
        text = "+" + text
    out: List[Tuple[float, int, int]] = []
    for m in re.finditer(r"([+-])([^+-]+)", text):
        sign, body = m.group(1), m.group(2)
        tm = TERM_RE.match(body)
        if not tm or not body:
            raise SelectorError(f"Bad term {body!r} in {selector!r}")
        has_x = "x" in body
        has_y = "y" in body
        coef = float(tm.group("coef")) if tm.group("coef") else 1.0
        if tm.group("coef") is None and not (has_x or has_y):
            raise SelectorError(f"Bad term {body!r} in {selector!r}")
        xn = (int(tm.group("xn")) if tm.group("xn") else 1) if has_x else 0
        yn = (int(tm.group("yn")) if tm.group("yn") else 1) if has_y else 0
        out.append((-coef if sign == "-" else coef, xn, yn))
    if "".join(m.group(0) for m in re.finditer(r"([+-])([^+-]+)", text)) != text:
        raise SelectorError(f"Could not parse {selector!r}")
    return out


def poly2(terms: List[Tuple[float, int, int]], name: str) -> FieldEntry:
    def fn(x: Any, y: Any) -> Any:
        return sum(c * _monomial_power(x, i) * _monomial_power(y, j) for c, i, j in terms)

    def grad(x: Any, y: Any) -> Tuple[Any, Any]:
        gx = sum(
            c * i * _monomial_power(x, i - 1) * _monomial_power(y, j) for c, i, j in terms if i
        )
        gy = sum(
            c * j * _monomial_power(x, i) * _monomial_power(y, j - 1) for c, i, j in terms if j
        )
        return gx, gy

    def mixed(x: Any, y: Any) -> Any:
        return sum(
            c * i * j * _monomial_power(x, i - 1) * _monomial_power(y, j - 1)
            for c, i, j in terms
            if i and j
        )

    return _field(name, fn, grad, mixed)


def field_expsum(a: float) -> FieldEntry:
    return _field(
        f"expsum:{a:g}",
        lambda x, y: np.exp(a * (x + y)),
        lambda x, y: (a * np.exp(a * (x + y)), a * np.exp(a * (x + y))),
        lambda x, y: a * a * np.exp(a * (x + y)),
    )


def _sincos() -> FieldEntry:
    return _field(
        "sincos",
        lambda x, y: np.sin(x) * np.cos(y),
        lambda x, y: (np.cos(x) * np.cos(y), -np.sin(x) * np.sin(y)),
        lambda x, y: -np.cos(x) * np.sin(y),
    )


def _on_axis(f: ScalarMap, axis: str) -> FieldEntry:
    if f.derivative is None:
        raise SelectorError(f"{f.name} has no derivative and cannot be lifted to a field")
    deriv = f.derivative
    name = f"{f.name}:{axis}"
    if axis == "x":
        return _field(name, lambda x, y: f(x), lambda x, y: (deriv(x), 0.0), lambda x, y: 0.0)
    return _field(name, lambda x, y: f(y), lambda x, y: (0.0, deriv(y)), lambda x, y: 0.0)


def _field_const(c: float) -> FieldEntry:
    return _field(f"const:{c:g}", lambda x, y: c, lambda x, y: (0.0, 0.0), lambda x, y: 0.0)


_FIELDS: Dict[str, Callable[[], FieldEntry]] = {
    "sincos": _sincos,
}

_FIELD_FAMILIES: Dict[str, Callable[[str, str], FieldEntry]] = {
    "poly2": lambda arg, sel: poly2(parse_poly2(arg, sel), f"poly2:{arg}"),
    "expsum": lambda arg, sel: field_expsum(_number(arg, sel)),
    "const": lambda arg, sel: _field_const(_number(arg, sel)),
}


def resolve_field_entry(selector: str) -> FieldEntry:
    text = selector.strip()
    if not text:
        raise SelectorError("Empty field selector")
    key = text.lower()
    if key in _FIELDS:
        return _FIELDS[key]()
    family, sep, arg = text.partition(":")
    m = AXIS_RE.match(text)
    if m and family.lower() != "poly2":
        return _on_axis(resolve_scalar(m.group("inner")), m.group("axis"))
    builder = _FIELD_FAMILIES.get(family.lower()) if sep else None
    if builder is not None:
        return builder(arg, selector)
    raise SelectorError(f"Unknown field: {selector}")


def resolve_field(selector: str) -> VectorMap:
    return resolve_field_entry(selector).map


def resolve(selector: str, n_in: int) -> VectorMap:
    """A selector as a VectorMap on R^n_in (scalar selectors for n=1, fields for n=2)."""
    if n_in == 1:
        return scalar_as_vector(resolve_scalar(selector))
    if n_in == 2:
        return resolve_field(selector)
    raise SelectorError(f"Built-in maps are defined on R or R^2, not R^{n_in}")


def registry_help() -> str:
    scalars = ", ".join(sorted(_SCALARS)) + ", " + ", ".join(
        f"{k}:<...>" for k in _SCALAR_FAMILIES
    )
    fields = ", ".join(sorted(_FIELDS)) + ", " + ", ".join(f"{k}:<...>" for k in _FIELD_FAMILIES)
    return f"scalar: {scalars}, outer@inner; field: {fields}, <scalar>:x, <scalar>:y"


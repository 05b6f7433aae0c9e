"""Production-function catalog.

A FunctionSpec bundles an expression tree over inputs x1..xn with an
optional family tag and, when the function is a composition
F(g1(x1) * ... * gn(xn)), the outer and inner expressions of that
composition.  Constructors are provided for the classical families:

* generalized Cobb-Douglas          A * prod x_i^{k_i}
* generalized ACMS / Armington      A * (sum k_i x_i^rho)^{gamma/rho}
* Spillman-Mitscherlich             A * prod (1 - exp(-a_i x_i))
* transcendental                    A * prod x_i^{a_i} exp(b_i x_i)
* product                           prod g_i(x_i)
* quasi-product                     F(prod g_i(x_i))

The ACMS family is a quasi-sum inside a power, not a product, so it
carries no outer/inner structure; forcing one would only shrink the
valid domain.  All values are immutable after construction and
evaluation is pure.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    ArityMismatch,
    DomainViolation,
    EmptyInnerList,
    ExpressionError,
    ParameterViolation,
)
from .expr import (
    Const,
    Expr,
    Exp,
    Mul,
    Pow,
    Var,
    eval_expr,
    eval_value,
    expr_from_obj,
    expr_to_obj,
    product_chain,
    substitute,
    variables,
)
from .jets import Jet2, univariate_jet
from .points import Point, as_point

__all__ = [
    "FunctionSpec",
    "Point",
    "as_point",
    "FAMILIES",
    "build_family",
    "build_quasi_product",
    "evaluate",
    "validate",
    "Diagnostic",
    "spec_to_json_obj",
    "spec_from_json_obj",
    "spec_to_json",
    "spec_from_json",
]

FAMILIES = frozenset(
    {
        "cobb_douglas",
        "acms",
        "spillman_mitscherlich",
        "transcendental",
        "product",
        "quasi_product",
        "custom",
    }
)

# Points sampled per axis by validate(); the full grid is capped below.
_VALIDATE_POINTS_PER_AXIS = 5
_VALIDATE_MAX_POINTS = 100_000

# A first derivative this small (relative to the gradient norm) counts
# as a vanishing marginal product.
_ZERO_DERIVATIVE_RTOL = 1e-12


@dataclass(frozen=True)
class FunctionSpec:
    """An n-input positive function as an expression tree.

    ``outer``/``inners`` are populated when the function is known to be
    the composition of a one-variable outer expression with a product of
    one-variable inner expressions; the body is then structurally equal
    to that composition.
    """

    n: int
    body: Expr
    family: str = "custom"
    params: dict = field(default_factory=dict)
    outer: Optional[Expr] = None
    inners: Optional[tuple[Expr, ...]] = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ParameterViolation(f"a production function needs n >= 2 inputs, got {self.n!r}")
        if self.family not in FAMILIES:
            raise ParameterViolation(f"unknown family {self.family!r}")
        used = variables(self.body)
        if used and max(used) >= self.n:
            raise ExpressionError(
                f"body references x{max(used) + 1} but the function has {self.n} inputs"
            )
        if (self.outer is None) != (self.inners is None):
            raise ExpressionError("outer and inners must be given together")
        if self.inners is not None:
            inners = tuple(self.inners)
            object.__setattr__(self, "inners", inners)
            if len(inners) != self.n:
                raise ArityMismatch(f"{len(inners)} inner factors for {self.n} inputs")
            for i, g in enumerate(inners):
                if variables(g) != frozenset({i}):
                    raise ExpressionError(f"inner factor {i} must depend on x{i + 1} only")
            if variables(self.outer) != frozenset({0}):
                raise ExpressionError("outer expression must depend on exactly one variable")
            if self.body != substitute(self.outer, {0: product_chain(inners)}):
                raise ExpressionError("body is not the composition of outer and inners")

    @property
    def has_composition(self) -> bool:
        return self.outer is not None


# ---------------------------------------------------------------------------
# Family constructors
# ---------------------------------------------------------------------------

def _vector(params: dict, key: str, family: str) -> tuple[float, ...]:
    try:
        raw = params[key]
    except KeyError:
        raise ParameterViolation(f"{family}: missing parameter {key!r}") from None
    if isinstance(raw, (int, float)):
        raise ParameterViolation(f"{family}: parameter {key!r} must be a vector")
    vec = tuple(float(v) for v in raw)
    if len(vec) < 2:
        raise ParameterViolation(f"{family}: parameter {key!r} needs at least 2 entries")
    return vec


def _scalar(params: dict, key: str, family: str) -> float:
    try:
        return float(params[key])
    except KeyError:
        raise ParameterViolation(f"{family}: missing parameter {key!r}") from None


def _compose(outer: Expr, inners: tuple[Expr, ...], family: str, params: dict) -> FunctionSpec:
    body = substitute(outer, {0: product_chain(inners)})
    return FunctionSpec(
        n=len(inners), body=body, family=family, params=params, outer=outer, inners=inners
    )


def _build_cobb_douglas(params: dict) -> FunctionSpec:
    A = _scalar(params, "A", "cobb_douglas")
    k = _vector(params, "k", "cobb_douglas")
    if A <= 0.0:
        raise ParameterViolation(f"cobb_douglas: A must be positive, got {A!r}")
    if any(ki == 0.0 for ki in k):
        raise ParameterViolation("cobb_douglas: every exponent k_i must be nonzero")
    outer = Mul(Const(A), Var(0))
    inners = tuple(Pow(Var(i), ki) for i, ki in enumerate(k))
    return _compose(outer, inners, "cobb_douglas", {"A": A, "k": k})


def _build_acms(params: dict) -> FunctionSpec:
    A = _scalar(params, "A", "acms")
    k = _vector(params, "k", "acms")
    rho = _scalar(params, "rho", "acms")
    gamma = _scalar(params, "gamma", "acms")
    if A == 0.0:
        raise ParameterViolation("acms: A must be nonzero")
    if any(ki == 0.0 for ki in k):
        raise ParameterViolation("acms: every weight k_i must be nonzero")
    if rho == 0.0:
        raise ParameterViolation("acms: rho must be nonzero")
    terms = [Mul(Const(ki), Pow(Var(i), rho)) for i, ki in enumerate(k)]
    acc = terms[0]
    for t in terms[1:]:
        acc = acc + t
    body = Mul(Const(A), Pow(acc, gamma / rho))
    return FunctionSpec(
        n=len(k),
        body=body,
        family="acms",
        params={"A": A, "k": k, "rho": rho, "gamma": gamma},
    )


def _build_spillman(params: dict) -> FunctionSpec:
    A = _scalar(params, "A", "spillman_mitscherlich")
    a = _vector(params, "a", "spillman_mitscherlich")
    if A <= 0.0:
        raise ParameterViolation(f"spillman_mitscherlich: A must be positive, got {A!r}")
    if any(ai <= 0.0 for ai in a):
        raise ParameterViolation("spillman_mitscherlich: every rate a_i must be positive")
    outer = Mul(Const(A), Var(0))
    inners = tuple(Const(1.0) - Exp(Mul(Const(-ai), Var(i))) for i, ai in enumerate(a))
    return _compose(outer, inners, "spillman_mitscherlich", {"A": A, "a": a})


def _build_transcendental(params: dict) -> FunctionSpec:
    A = _scalar(params, "A", "transcendental")
    a = _vector(params, "a", "transcendental")
    b = _vector(params, "b", "transcendental")
    if A <= 0.0:
        raise ParameterViolation(f"transcendental: A must be positive, got {A!r}")
    if len(a) != len(b):
        raise ParameterViolation("transcendental: a and b must have the same length")
    if any(ai == 0.0 and bi == 0.0 for ai, bi in zip(a, b)):
        raise ParameterViolation("transcendental: a_i and b_i must not both vanish")
    outer = Mul(Const(A), Var(0))
    inners = tuple(
        Mul(Pow(Var(i), ai), Exp(Mul(Const(bi), Var(i)))) for i, (ai, bi) in enumerate(zip(a, b))
    )
    return _compose(outer, inners, "transcendental", {"A": A, "a": a, "b": b})


_BUILDERS = {
    "cobb_douglas": _build_cobb_douglas,
    "acms": _build_acms,
    "spillman_mitscherlich": _build_spillman,
    "transcendental": _build_transcendental,
}


def build_family(family: str, params: dict) -> FunctionSpec:
    """Construct a catalog family from its parameter record.

    Raises ParameterViolation naming the violated constraint.
    """
    if family in _BUILDERS:
        return _BUILDERS[family](dict(params))
    if family == "product":
        inners = params.get("inners")
        if inners is None:
            raise ParameterViolation("product: missing parameter 'inners'")
        return build_quasi_product(Var(0), inners, family="product")
    if family == "quasi_product":
        outer = params.get("outer")
        inners = params.get("inners")
        if outer is None or inners is None:
            raise ParameterViolation("quasi_product: need parameters 'outer' and 'inners'")
        return build_quasi_product(outer, inners)
    raise ParameterViolation(f"unknown family {family!r}")


def build_quasi_product(outer: Expr, inners, family: str = "quasi_product") -> FunctionSpec:
    """Compose a one-variable outer expression with one-variable inner
    factors; inner i is applied to x_i.

    The body is built as the structural composition, so evaluating the
    spec and evaluating the parts follow the same arithmetic path.
    """
    inners = tuple(inners)
    if len(inners) == 0:
        raise EmptyInnerList("a composite production function needs inner factors")
    if len(inners) < 2:
        raise ArityMismatch("a production function needs at least 2 inputs")
    if not isinstance(outer, Expr):
        raise ExpressionError(f"outer must be an expression, got {outer!r}")
    outer_vars = variables(outer)
    if len(outer_vars) != 1:
        raise ArityMismatch("outer expression must use exactly one variable")
    outer = substitute(outer, {next(iter(outer_vars)): Var(0)})
    slotted = []
    for i, g in enumerate(inners):
        if not isinstance(g, Expr):
            raise ExpressionError(f"inner factor {i} must be an expression, got {g!r}")
        g_vars = variables(g)
        if len(g_vars) != 1:
            raise ArityMismatch(f"inner factor {i} must use exactly one variable")
        slotted.append(substitute(g, {next(iter(g_vars)): Var(i)}))
    return _compose(outer, tuple(slotted), family, {})


# ---------------------------------------------------------------------------
# Evaluation and validation
# ---------------------------------------------------------------------------

def evaluate(spec: FunctionSpec, p) -> float:
    """f(p).  The output must be positive and finite; everything else is
    a DomainViolation."""
    point = as_point(p)
    if len(point) != spec.n:
        raise ArityMismatch(f"point has {len(point)} coordinates, function has {spec.n} inputs")
    try:
        return eval_value(spec.body, point.coords)
    except DomainViolation as e:
        if e.point is None:
            e.point = point
        raise


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding at one sampled point."""

    point: Point
    code: str
    message: str
    axis: Optional[int] = None
    value: Optional[float] = None


def _axis_samples(lo: float, hi: float, count: int) -> list[float]:
    if count == 1:
        return [math.sqrt(lo * hi)]
    ratio = hi / lo
    return [lo * ratio ** (i / (count - 1)) for i in range(count)]


def validate(spec: FunctionSpec, region) -> list[Diagnostic]:
    """Probe the spec over a box of positive bounds.

    Samples a log-uniform grid (5 points per axis, capped at 1e5 points)
    and reports, per point: non-positive or failing evaluations,
    vanishing first partials, and for composite functions a vanishing
    outer derivative, vanishing inner derivatives or non-positive inner
    values.  Diagnostics are the output; nothing raises for a bad
    function, only for a bad region.
    """
    region = [(float(lo), float(hi)) for lo, hi in region]
    if len(region) != spec.n:
        raise ParameterViolation(f"region has {len(region)} axes, function has {spec.n} inputs")
    for lo, hi in region:
        if not (0.0 < lo < hi) or not math.isfinite(hi):
            raise ParameterViolation(f"region bounds must satisfy 0 < lo < hi, got {(lo, hi)!r}")

    axes = [_axis_samples(lo, hi, _VALIDATE_POINTS_PER_AXIS) for lo, hi in region]
    mesh = itertools.islice(itertools.product(*axes), _VALIDATE_MAX_POINTS)

    findings: list[Diagnostic] = []
    for coords in mesh:
        point = Point(coords)
        try:
            out = eval_expr(spec.body, [Jet2.seed(x, i, spec.n) for i, x in enumerate(coords)])
        except DomainViolation as e:
            findings.append(Diagnostic(point, "evaluation_error", str(e)))
            continue
        if isinstance(out, Jet2):
            value, gradient = out.f, out.g
        else:
            value, gradient = out, np.zeros(spec.n)
        if not math.isfinite(value) or value <= 0.0:
            findings.append(
                Diagnostic(point, "nonpositive_output", f"f = {value!r}", value=float(value))
            )
        gnorm = float(np.sqrt(gradient @ gradient)) if np.all(np.isfinite(gradient)) else math.inf
        for i in range(spec.n):
            gi = float(gradient[i])
            if not math.isfinite(gi) or abs(gi) <= _ZERO_DERIVATIVE_RTOL * (1.0 + gnorm):
                findings.append(
                    Diagnostic(
                        point,
                        "zero_partial",
                        f"df/dx{i + 1} = {gi!r}",
                        axis=i,
                        value=gi,
                    )
                )
        if spec.has_composition:
            findings.extend(_composition_diagnostics(spec, point))
    return findings


def _composition_diagnostics(spec: FunctionSpec, point: Point) -> list[Diagnostic]:
    findings: list[Diagnostic] = []
    u = 1.0
    ok = True
    for i, g in enumerate(spec.inners):
        try:
            gv, gd, _ = univariate_jet(g, point[i])
        except DomainViolation as e:
            findings.append(Diagnostic(point, "evaluation_error", str(e), axis=i))
            ok = False
            continue
        if gv <= 0.0:
            findings.append(
                Diagnostic(point, "inner_nonpositive", f"g{i + 1} = {gv!r}", axis=i, value=gv)
            )
            ok = False
        if abs(gd) <= _ZERO_DERIVATIVE_RTOL * (1.0 + abs(gv)):
            findings.append(
                Diagnostic(point, "zero_inner_derivative", f"g{i + 1}' = {gd!r}", axis=i, value=gd)
            )
        u *= gv
    if ok:
        try:
            _, fd1, _ = univariate_jet(spec.outer, u)
        except DomainViolation as e:
            findings.append(Diagnostic(point, "evaluation_error", str(e)))
            return findings
        if abs(fd1) <= _ZERO_DERIVATIVE_RTOL:
            findings.append(
                Diagnostic(point, "zero_outer_derivative", f"F' = {fd1!r}", value=fd1)
            )
    return findings


# ---------------------------------------------------------------------------
# JSON form
# ---------------------------------------------------------------------------

def _params_to_obj(params: dict):
    out = {}
    for key, value in params.items():
        if isinstance(value, tuple):
            out[key] = [float(v) for v in value]
        else:
            out[key] = float(value)
    return out


def _params_from_obj(obj) -> dict:
    out = {}
    for key, value in obj.items():
        if isinstance(value, list):
            out[key] = tuple(float(v) for v in value)
        else:
            out[key] = float(value)
    return out


def spec_to_json_obj(spec: FunctionSpec) -> dict:
    """JSON-compatible document; numeric literals survive a round trip
    bit for bit (Python renders floats with their shortest 17-digit
    round-trip representation)."""
    return {
        "n": spec.n,
        "family": spec.family,
        "params": _params_to_obj(spec.params),
        "body": expr_to_obj(spec.body),
        "outer": expr_to_obj(spec.outer) if spec.outer is not None else None,
        "inners": [expr_to_obj(g) for g in spec.inners] if spec.inners is not None else None,
    }


def spec_from_json_obj(obj: dict) -> FunctionSpec:
    if not isinstance(obj, dict):
        raise ExpressionError(f"spec document must be an object, got {obj!r}")
    try:
        n = obj["n"]
        family = obj["family"]
        body = obj["body"]
    except KeyError as e:
        raise ExpressionError(f"spec document missing field {e.args[0]!r}") from None
    if not isinstance(n, int):
        raise ExpressionError(f"field 'n' must be an int, got {n!r}")
    if not isinstance(family, str):
        raise ExpressionError(f"field 'family' must be a string, got {family!r}")
    outer = obj.get("outer")
    inners = obj.get("inners")
    return FunctionSpec(
        n=n,
        body=expr_from_obj(body),
        family=family,
        params=_params_from_obj(obj.get("params", {})),
        outer=expr_from_obj(outer) if outer is not None else None,
        inners=tuple(expr_from_obj(g) for g in inners) if inners is not None else None,
    )


def spec_to_json(spec: FunctionSpec, indent: Optional[int] = None) -> str:
    return json.dumps(spec_to_json_obj(spec), indent=indent)


def spec_from_json(text: str) -> FunctionSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ExpressionError(f"invalid spec JSON: {e}") from None
    return spec_from_json_obj(obj)

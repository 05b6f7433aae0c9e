"""Expression trees for positive multivariate functions.

The node kinds cover exactly the arithmetic needed by the production
function catalog: constants, input variables, negation, sums, products,
quotients, powers with a real exponent, exp and ln.  Trees are immutable
and evaluation is pure, so expressions can be shared freely across
threads.

Evaluation is generic over the scalar type: plain floats give function
values, while jet scalars (see :mod:`prodgeo.jets`) propagate first and
second derivatives through the *identical* arithmetic path.  No
re-association or simplification ever happens, which keeps results
reproducible bit for bit.

Powers follow one domain rule: a real (non-integer) exponent requires a
strictly positive base, checked at evaluation time; integer exponents
are expanded by repeated multiplication and therefore stay smooth on the
whole real line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainViolation, ExpressionError

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Neg",
    "Add",
    "Mul",
    "Div",
    "Pow",
    "Exp",
    "Ln",
    "const",
    "var",
    "exp",
    "ln",
    "product_chain",
    "sum_chain",
    "variables",
    "substitute",
    "eval_expr",
    "eval_value",
    "expr_to_obj",
    "expr_from_obj",
]

# Integer exponents above this bound fall back to the positive-base power
# rule instead of an absurdly long multiplication chain.
_MAX_REPEATED_POW = 512


@dataclass(frozen=True)
class Expr:
    """Base node.  Subclasses are frozen dataclasses, so structural
    equality (``==``) compares whole trees."""

    def __add__(self, other) -> "Expr":
        return Add(self, _coerce(other))

    def __radd__(self, other) -> "Expr":
        return Add(_coerce(other), self)

    def __sub__(self, other) -> "Expr":
        return Add(self, Neg(_coerce(other)))

    def __rsub__(self, other) -> "Expr":
        return Add(_coerce(other), Neg(self))

    def __mul__(self, other) -> "Expr":
        return Mul(self, _coerce(other))

    def __rmul__(self, other) -> "Expr":
        return Mul(_coerce(other), self)

    def __truediv__(self, other) -> "Expr":
        return Div(self, _coerce(other))

    def __rtruediv__(self, other) -> "Expr":
        return Div(_coerce(other), self)

    def __neg__(self) -> "Expr":
        return Neg(self)

    def __pow__(self, exponent) -> "Expr":
        return Pow(self, float(exponent))


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise ExpressionError(f"constant must be finite, got {self.value!r}")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class Var(Expr):
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise ExpressionError(f"variable index must be a non-negative int, got {self.index!r}")


@dataclass(frozen=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float

    def __post_init__(self):
        e = float(self.exponent)
        if not math.isfinite(e):
            raise ExpressionError(f"power exponent must be finite, got {self.exponent!r}")
        object.__setattr__(self, "exponent", e)


@dataclass(frozen=True)
class Exp(Expr):
    child: Expr


@dataclass(frozen=True)
class Ln(Expr):
    child: Expr


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float)):
        return Const(float(x))
    raise ExpressionError(f"cannot use {x!r} in an expression")


def const(value: float) -> Const:
    return Const(float(value))


def var(index: int) -> Var:
    return Var(index)


def exp(x) -> Exp:
    return Exp(_coerce(x))


def ln(x) -> Ln:
    return Ln(_coerce(x))


def product_chain(factors) -> Expr:
    """Left-associated product of the given expressions."""
    factors = list(factors)
    if not factors:
        raise ExpressionError("product_chain needs at least one factor")
    acc = factors[0]
    for f in factors[1:]:
        acc = Mul(acc, f)
    return acc


def sum_chain(terms) -> Expr:
    """Left-associated sum of the given expressions."""
    terms = list(terms)
    if not terms:
        raise ExpressionError("sum_chain needs at least one term")
    acc = terms[0]
    for t in terms[1:]:
        acc = Add(acc, t)
    return acc


def variables(e: Expr) -> frozenset[int]:
    """Set of variable indices appearing in the tree."""
    match e:
        case Const():
            return frozenset()
        case Var(index=i):
            return frozenset({i})
        case Neg(child=a) | Exp(child=a) | Ln(child=a):
            return variables(a)
        case Add(left=a, right=b) | Mul(left=a, right=b) | Div(left=a, right=b):
            return variables(a) | variables(b)
        case Pow(base=a):
            return variables(a)
    raise ExpressionError(f"unknown node {e!r}")


def substitute(e: Expr, mapping: dict[int, Expr]) -> Expr:
    """Replace every Var(i) with mapping[i]; unmapped variables stay."""
    match e:
        case Const():
            return e
        case Var(index=i):
            return mapping.get(i, e)
        case Neg(child=a):
            return Neg(substitute(a, mapping))
        case Add(left=a, right=b):
            return Add(substitute(a, mapping), substitute(b, mapping))
        case Mul(left=a, right=b):
            return Mul(substitute(a, mapping), substitute(b, mapping))
        case Div(left=a, right=b):
            return Div(substitute(a, mapping), substitute(b, mapping))
        case Pow(base=a, exponent=c):
            return Pow(substitute(a, mapping), c)
        case Exp(child=a):
            return Exp(substitute(a, mapping))
        case Ln(child=a):
            return Ln(substitute(a, mapping))
    raise ExpressionError(f"unknown node {e!r}")


# ---------------------------------------------------------------------------
# Evaluation (generic over floats and jet scalars)
# ---------------------------------------------------------------------------

def _exp_scalar(v):
    if isinstance(v, float):
        try:
            return math.exp(v)
        except OverflowError:
            raise DomainViolation(f"exp overflow at argument {v!r}") from None
    return v.exp()


def _ln_scalar(v):
    if isinstance(v, float):
        if v <= 0.0:
            raise DomainViolation(f"ln of non-positive value {v!r}")
        return math.log(v)
    return v.ln()


def _pow_scalar(v, exponent: float):
    if exponent.is_integer() and abs(exponent) <= _MAX_REPEATED_POW:
        m = int(exponent)
        if m == 0:
            return 1.0
        acc = v
        for _ in range(abs(m) - 1):
            acc = acc * v
        if m < 0:
            return _div_scalar(1.0, acc)
        return acc
    if isinstance(v, float):
        if v <= 0.0:
            raise DomainViolation(f"real power of non-positive base {v!r}")
        try:
            return math.pow(v, exponent)
        except OverflowError:
            raise DomainViolation(f"power overflow: {v!r} ** {exponent!r}") from None
    return v.pow_real(exponent)


def _div_scalar(num, den):
    if isinstance(den, float) and den == 0.0:
        raise DomainViolation("division by zero")
    return num / den


def eval_expr(e: Expr, xs):
    """Evaluate the tree with the given per-variable scalars.

    ``xs`` may hold plain floats or jet scalars; the arithmetic path is
    identical either way.  A tree with no variables yields a float even
    when jets are supplied.
    """
    match e:
        case Const(value=c):
            return c
        case Var(index=i):
            if i >= len(xs):
                raise ExpressionError(f"variable x{i + 1} out of range for {len(xs)} inputs")
            return xs[i]
        case Neg(child=a):
            return -eval_expr(a, xs)
        case Add(left=a, right=b):
            return eval_expr(a, xs) + eval_expr(b, xs)
        case Mul(left=a, right=b):
            return eval_expr(a, xs) * eval_expr(b, xs)
        case Div(left=a, right=b):
            return _div_scalar(eval_expr(a, xs), eval_expr(b, xs))
        case Pow(base=a, exponent=c):
            return _pow_scalar(eval_expr(a, xs), c)
        case Exp(child=a):
            return _exp_scalar(eval_expr(a, xs))
        case Ln(child=a):
            return _ln_scalar(eval_expr(a, xs))
    raise ExpressionError(f"unknown node {e!r}")


def eval_value(e: Expr, xs) -> float:
    """Evaluate with floats and enforce the positive, finite output
    contract of a production function."""
    v = eval_expr(e, [float(x) for x in xs])
    if not math.isfinite(v):
        raise DomainViolation(f"non-finite output {v!r}")
    if v <= 0.0:
        raise DomainViolation(f"non-positive output {v!r}")
    return v


# ---------------------------------------------------------------------------
# Serialization: nested prefix arrays, JSON-compatible
# ---------------------------------------------------------------------------

def expr_to_obj(e: Expr):
    """Encode as a nested prefix array, e.g. ``["mul", ["var", 0], ["const", 2.0]]``."""
    match e:
        case Const(value=c):
            return ["const", c]
        case Var(index=i):
            return ["var", i]
        case Neg(child=a):
            return ["neg", expr_to_obj(a)]
        case Add(left=a, right=b):
            return ["add", expr_to_obj(a), expr_to_obj(b)]
        case Mul(left=a, right=b):
            return ["mul", expr_to_obj(a), expr_to_obj(b)]
        case Div(left=a, right=b):
            return ["div", expr_to_obj(a), expr_to_obj(b)]
        case Pow(base=a, exponent=c):
            return ["pow", expr_to_obj(a), c]
        case Exp(child=a):
            return ["exp", expr_to_obj(a)]
        case Ln(child=a):
            return ["ln", expr_to_obj(a)]
    raise ExpressionError(f"unknown node {e!r}")


def expr_from_obj(obj) -> Expr:
    """Decode a nested prefix array produced by :func:`expr_to_obj`."""
    if not isinstance(obj, (list, tuple)) or not obj:
        raise ExpressionError(f"expression node must be a non-empty array, got {obj!r}")
    tag, *args = obj

    def _need(k: int):
        if len(args) != k:
            raise ExpressionError(f"node {tag!r} expects {k} argument(s), got {len(args)}")

    if tag == "const":
        _need(1)
        if not isinstance(args[0], (int, float)):
            raise ExpressionError(f"const payload must be a number, got {args[0]!r}")
        return Const(float(args[0]))
    if tag == "var":
        _need(1)
        if not isinstance(args[0], int):
            raise ExpressionError(f"var payload must be an int, got {args[0]!r}")
        return Var(args[0])
    if tag == "neg":
        _need(1)
        return Neg(expr_from_obj(args[0]))
    if tag == "add":
        _need(2)
        return Add(expr_from_obj(args[0]), expr_from_obj(args[1]))
    if tag == "mul":
        _need(2)
        return Mul(expr_from_obj(args[0]), expr_from_obj(args[1]))
    if tag == "div":
        _need(2)
        return Div(expr_from_obj(args[0]), expr_from_obj(args[1]))
    if tag == "pow":
        _need(2)
        if not isinstance(args[1], (int, float)):
            raise ExpressionError(f"pow exponent must be a number, got {args[1]!r}")
        return Pow(expr_from_obj(args[0]), float(args[1]))
    if tag == "exp":
        _need(1)
        return Exp(expr_from_obj(args[0]))
    if tag == "ln":
        _need(1)
        return Ln(expr_from_obj(args[0]))
    raise ExpressionError(f"unknown node tag {tag!r}")

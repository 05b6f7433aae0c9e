"""Grid-based verification of classification predicates.

The classification statements for quasi-product production models are
"if and only if" statements about identities holding everywhere:
vanishing Gauss-Kronecker curvature, flatness, minimality, vanishing
sectional curvature, proportional marginal rate of substitution,
constant output elasticities and the constant-elasticity-of-substitution
property.  This module checks them the only way an executable artifact
honestly can: each identity is evaluated on a deterministic sample grid
and judged against a tolerance policy, and the sufficiency direction is
covered by negative controls that must *fail* the identity at every grid
point.

Zero tests are noise-scaled: a determinant of near-cancelling terms
loses about n digits, so the relative part of the zero tolerance is
multiplied by the natural magnitude of the terms involved (Hadamard-type
row-norm products for determinants and minors).

``verify_catalog`` runs a built-in fixture table pairing each classified
functional form with its expected verdict and reports one pass/fail
entry per expectation, with the worst witness point.

Everything here is deterministic: identical (spec, grid, tolerance)
inputs produce bit-identical verdicts, and grid generation is fixed by
(box, points_per_axis, seed).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .catalog import FunctionSpec, build_family, build_quasi_product
from .economics import hicks_elasticity, mrs, output_elasticity
from .errors import ParameterViolation, ProdGeoError
from .expr import Const, Exp, Ln, Mul, Pow, Var, sum_chain
from .geometry import (
    canonical_riemann_quads,
    gauss_kronecker,
    mean_curvature_of_jet,
    riemann_component,
    sectional_curvature,
    slope_w,
)
from .jets import SecondOrderJet, jet
from .points import Point

__all__ = [
    "SampleGrid",
    "default_grid",
    "TolerancePolicy",
    "PropertyVerdict",
    "ClassificationVerdict",
    "classify",
    "estimate_sigma",
    "CatalogFixture",
    "ExpectationResult",
    "CatalogReport",
    "verify_catalog",
]

SCHEMA_VERSION = "1"


# ---------------------------------------------------------------------------
# Sampling and tolerances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleGrid:
    """Deterministic log-uniform sample of a positive box.

    The mesh places ``points_per_axis`` log-midpoints per axis (strictly
    inside the box) and appends ``jitter_points`` seeded log-uniform
    random points.  Generation is a pure function of
    (box, points_per_axis, seed, jitter_points).
    """

    box: tuple[tuple[float, float], ...]
    points_per_axis: int = 7
    seed: int = 0
    jitter_points: int = 32

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        object.__setattr__(self, "box", box)
        if not box:
            raise ParameterViolation("grid box must have at least one axis")
        for lo, hi in box:
            if not (0.0 < lo < hi) or not math.isfinite(hi):
                raise ParameterViolation(f"grid bounds must satisfy 0 < lo < hi, got {(lo, hi)!r}")
        if self.points_per_axis < 2:
            raise ParameterViolation("points_per_axis must be at least 2")
        if self.jitter_points < 0:
            raise ParameterViolation("jitter_points must be non-negative")

    @property
    def n(self) -> int:
        return len(self.box)

    def points(self) -> list[Point]:
        axes = []
        for lo, hi in self.box:
            ratio = hi / lo
            k = self.points_per_axis
            axes.append([lo * ratio ** ((i + 0.5) / k) for i in range(k)])
        pts = [Point(coords) for coords in itertools.product(*axes)]
        rng = np.random.default_rng(self.seed)
        lows = np.array([lo for lo, _ in self.box])
        ratios = np.array([hi / lo for lo, hi in self.box])
        for _ in range(self.jitter_points):
            while True:
                coords = lows * ratios ** rng.random(self.n)
                if all(lo < c < hi for c, (lo, hi) in zip(coords, self.box)):
                    break
            pts.append(Point(tuple(coords)))
        return pts


def default_grid(n: int, seed: int = 0) -> SampleGrid:
    """The default verification grid: box [0.5, 2]^n, 7 points per axis
    up to three inputs and 4 beyond, 32 jitter points.  Stays away from
    the origin, where logarithmic forms change sign."""
    return SampleGrid(
        box=((0.5, 2.0),) * n,
        points_per_axis=7 if n <= 3 else 4,
        seed=seed,
    )


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds for zero tests and constancy tests.

    ``zero_abs`` is the absolute floor; ``zero_rel`` multiplies the
    noise scale of the quantity under test; ``constancy_rel`` bounds
    (max - min) / |mean| for quantities that must be constant.
    """

    zero_abs: float = 1e-9
    zero_rel: float = 1e-9
    constancy_rel: float = 1e-6

    def __post_init__(self):
        for name in ("zero_abs", "zero_rel", "constancy_rel"):
            if getattr(self, name) <= 0.0:
                raise ParameterViolation(f"{name} must be positive")


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropertyVerdict:
    """One predicate checked over the grid.

    ``holds`` is true exactly when ``worst_value <= threshold_used``.
    ``estimate`` carries the grid mean for constancy-type properties
    (the sigma estimate for the CES property)."""

    name: str
    holds: bool
    worst_point: Point
    worst_value: float
    threshold_used: float
    estimate: Optional[float] = None

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "worst_point": list(self.worst_point.coords),
            "worst_value": self.worst_value,
            "threshold_used": self.threshold_used,
            "estimate": self.estimate,
        }


@dataclass(frozen=True)
class ClassificationVerdict:
    family: str
    n: int
    properties: tuple[PropertyVerdict, ...]

    def property(self, name: str) -> PropertyVerdict:
        for p in self.properties:
            if p.name == name:
                return p
        raise KeyError(name)

    def holds(self, name: str) -> bool:
        return self.property(name).holds

    def to_json_obj(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "family": self.family,
            "n": self.n,
            "properties": [p.to_json_obj() for p in self.properties],
        }


class _Extreme:
    """Track max and min of |value| with first-encountered witnesses."""

    __slots__ = ("max", "max_point", "min", "min_point")

    def __init__(self):
        self.max = -math.inf
        self.max_point = None
        self.min = math.inf
        self.min_point = None

    def update(self, value: float, point: Point):
        a = abs(value)
        if a > self.max:
            self.max = a
            self.max_point = point
        if a < self.min:
            self.min = a
            self.min_point = point


def _annotate(exc: ProdGeoError, point: Point):
    if exc.point is None:
        exc.point = point
        exc.args = (f"{exc.args[0]} at point {tuple(point.coords)}",) + exc.args[1:]


def _grid_jets(spec: FunctionSpec, points: list[Point]) -> list[SecondOrderJet]:
    jets = []
    for p in points:
        try:
            jets.append(jet(spec, p))
        except ProdGeoError as e:
            _annotate(e, p)
            raise
    return jets


# ---------------------------------------------------------------------------
# Noise scales
# ---------------------------------------------------------------------------

def _row_norms(h: np.ndarray) -> np.ndarray:
    return np.sqrt((h * h).sum(axis=1))


def _det_noise(j: SecondOrderJet) -> float:
    # Hadamard bound on |det Hess| / w^(n+2): product of Hessian row
    # norms over the same normalizer the curvature uses.
    rn = _row_norms(j.hessian)
    return float(np.prod(rn)) / slope_w(j) ** (j.n + 2)


def _minor_noise(j: SecondOrderJet, i: int, k: int) -> float:
    rn = _row_norms(j.hessian)
    w2 = 1.0 + float(j.gradient @ j.gradient)
    return float(rn[i] * rn[k]) / (w2 * w2)


def _sectional_noise(j: SecondOrderJet, i: int, k: int) -> float:
    rn = _row_norms(j.hessian)
    g = j.gradient
    w2 = 1.0 + float(g @ g)
    return float(rn[i] * rn[k]) / (w2 * (1.0 + g[i] * g[i] + g[k] * g[k]))


def _mean_noise(j: SecondOrderJet) -> float:
    g, h = j.gradient, j.hessian
    w = slope_w(j)
    ag = np.abs(g)
    return (float(np.abs(np.diag(h)).sum()) / w + float(ag @ np.abs(h) @ ag) / w**3) / j.n


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def _constancy_verdict(
    name: str, values: list[float], value_points: list[Point], tol: TolerancePolicy
) -> PropertyVerdict:
    mean = sum(values) / len(values)
    spread = max(values) - min(values)
    worst_point = value_points[0]
    worst_dev = -math.inf
    for v, p in zip(values, value_points):
        d = abs(v - mean)
        if d > worst_dev:
            worst_dev = d
            worst_point = p
    if abs(mean) < tol.zero_abs:
        worst, threshold = spread, tol.zero_abs
    else:
        worst, threshold = spread / abs(mean), tol.constancy_rel
    return PropertyVerdict(
        name=name,
        holds=bool(worst <= threshold),
        worst_point=worst_point,
        worst_value=float(worst),
        threshold_used=float(threshold),
        estimate=float(mean),
    )


def classify(spec: FunctionSpec, grid: SampleGrid, tol: Optional[TolerancePolicy] = None) -> ClassificationVerdict:
    """Evaluate every classification predicate on the grid.

    Requires the spec to be valid on the grid (``validate`` clean);
    evaluation errors propagate with the offending point attached.
    """
    if grid.n != spec.n:
        raise ParameterViolation(f"grid has {grid.n} axes, function has {spec.n} inputs")
    tol = tol or TolerancePolicy()
    points = grid.points()
    jets = _grid_jets(spec, points)
    n = spec.n
    pairs = [(i, k) for i in range(n) for k in range(i + 1, n)]
    quads = canonical_riemann_quads(n)

    k_ext = _Extreme()
    r_ext = _Extreme()
    s_ext = _Extreme()
    h_ext = _Extreme()
    mrs_dev = _Extreme()
    k_noise = r_noise = s_noise = h_noise = 0.0
    elasticity_values: list[list[float]] = [[] for _ in range(n)]
    hicks_values: list[float] = []
    hicks_points: list[Point] = []

    for p, j in zip(points, jets):
        k_ext.update(gauss_kronecker(j), p)
        h_ext.update(mean_curvature_of_jet(j), p)
        k_noise = max(k_noise, _det_noise(j))
        h_noise = max(h_noise, _mean_noise(j))
        for q in quads:
            r_ext.update(riemann_component(j, *q), p)
        for i, k in pairs:
            s_ext.update(sectional_curvature(j, i, k), p)
            r_noise = max(r_noise, _minor_noise(j, i, k))
            s_noise = max(s_noise, _sectional_noise(j, i, k))
        try:
            for i in range(n):
                elasticity_values[i].append(output_elasticity(j, p, i))
            for i in range(n):
                for k in range(n):
                    if i != k:
                        # proportional MRS means MRS_ik == x_i / x_k
                        mrs_dev.update(mrs(j, i, k) * p[k] / p[i] - 1.0, p)
            for i, k in pairs:
                hicks_values.append(hicks_elasticity(j, p, i, k))
                hicks_points.append(p)
        except ProdGeoError as e:
            _annotate(e, p)
            raise

    thr_k = tol.zero_abs + tol.zero_rel * k_noise
    thr_r = tol.zero_abs + tol.zero_rel * r_noise
    thr_s = tol.zero_abs + tol.zero_rel * s_noise
    thr_h = tol.zero_abs + tol.zero_rel * h_noise

    def zero_verdict(name: str, ext: _Extreme, threshold: float) -> PropertyVerdict:
        return PropertyVerdict(
            name=name,
            holds=bool(ext.max <= threshold),
            worst_point=ext.max_point,
            worst_value=float(ext.max),
            threshold_used=float(threshold),
        )

    properties = [
        zero_verdict("vanishing_gk", k_ext, thr_k),
        zero_verdict("flat", r_ext, thr_r),
        zero_verdict("minimal", h_ext, thr_h),
        zero_verdict("vanishing_sectional", s_ext, thr_s),
        PropertyVerdict(
            name="proportional_mrs",
            holds=bool(mrs_dev.max <= tol.constancy_rel),
            worst_point=mrs_dev.max_point,
            worst_value=float(mrs_dev.max),
            threshold_used=float(tol.constancy_rel),
        ),
    ]
    for i in range(n):
        properties.append(
            _constancy_verdict(f"constant_elasticity_x{i + 1}", elasticity_values[i], points, tol)
        )
    properties.append(_constancy_verdict("ces", hicks_values, hicks_points, tol))
    return ClassificationVerdict(family=spec.family, n=n, properties=tuple(properties))


def estimate_sigma(spec: FunctionSpec, grid: SampleGrid) -> tuple[float, float]:
    """Grid mean and (max - min) spread of the Hicks elasticity over all
    input pairs; the CES property holds when spread / |mean| is within
    the constancy tolerance."""
    if grid.n != spec.n:
        raise ParameterViolation(f"grid has {grid.n} axes, function has {spec.n} inputs")
    points = grid.points()
    jets = _grid_jets(spec, points)
    pairs = [(i, k) for i in range(spec.n) for k in range(i + 1, spec.n)]
    values = []
    for p, j in zip(points, jets):
        try:
            for i, k in pairs:
                values.append(hicks_elasticity(j, p, i, k))
        except ProdGeoError as e:
            _annotate(e, p)
            raise
    return sum(values) / len(values), max(values) - min(values)


# ---------------------------------------------------------------------------
# Built-in classification fixture suite
# ---------------------------------------------------------------------------

#: check name -> what passing means
CHECKS = {
    "vanishing_gk": "max |K| within the zero threshold",
    "nonvanishing_gk": "min |K| at least 10x the zero threshold",
    "flat": "max |Riemann component| within the zero threshold",
    "nonflat_everywhere": "some Riemann component exceeds 10x the threshold at every point",
    "vanishing_sectional": "max |K_ij| within the zero threshold",
}


@dataclass(frozen=True)
class CatalogFixture:
    name: str
    spec: FunctionSpec
    checks: tuple[str, ...]
    seed: int


@dataclass(frozen=True)
class ExpectationResult:
    fixture: str
    n: int
    check: str
    passed: bool
    observed: float
    bound: float
    witness: Point

    def to_json_obj(self) -> dict:
        return {
            "fixture": self.fixture,
            "n": self.n,
            "check": self.check,
            "passed": self.passed,
            "observed": self.observed,
            "bound": self.bound,
            "witness_point": list(self.witness.coords),
        }


@dataclass(frozen=True)
class CatalogReport:
    results: tuple[ExpectationResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json_obj(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "all_passed": self.all_passed,
            "results": [r.to_json_obj() for r in self.results],
        }


def _monomial(c: float) -> Pow:
    return Pow(Var(0), c)


def _exponential(c: float) -> Exp:
    return Exp(Mul(Const(c), Var(0)))


def _log_of_exp_sum(weights, rates) -> FunctionSpec:
    terms = [Mul(Const(b), Exp(Mul(Const(a), Var(i)))) for i, (b, a) in enumerate(zip(weights, rates))]
    body = Mul(Const(1.2), Ln(sum_chain(terms)))
    return FunctionSpec(n=len(weights), body=body, family="custom")


def catalog_fixtures() -> list[CatalogFixture]:
    """The classified forms and their expected grid verdicts, for two
    and three inputs each."""
    fixtures: list[CatalogFixture] = []

    def add(name: str, spec: FunctionSpec, *checks: str):
        fixtures.append(CatalogFixture(name, spec, checks, seed=len(fixtures)))

    for n in (2, 3):
        tag = f"_{n}in"
        exp_rates = (0.7, -0.4, 1.1)[:n]
        add(
            "exp_of_linear" + tag,
            build_quasi_product(Mul(Const(1.5), Var(0)), [_exponential(c) for c in exp_rates]),
            "flat",
            "vanishing_gk",
        )
        # The square root of a product has constant return to scale only
        # for two inputs, so the K = 0 expectation applies there alone.
        sqrt_checks = ("flat", "vanishing_sectional") + (("vanishing_gk",) if n == 2 else ())
        add(
            "sqrt_of_product" + tag,
            build_quasi_product(Mul(Const(2.0), Pow(Var(0), 0.5)), [Var(0)] * n),
            *sqrt_checks,
        )
        cr_k = (0.4, 0.6) if n == 2 else (0.2, 0.3, 0.5)
        add(
            "cobb_douglas_constant_return" + tag,
            build_family("cobb_douglas", {"A": 1.3, "k": cr_k}),
            "vanishing_gk",
        )
        add(
            "log_outer_with_exponential_factor" + tag,
            build_quasi_product(
                Mul(Const(1.0), Ln(Var(0))),
                [_exponential(1.0)] + [_monomial(0.25)] * (n - 1),
            ),
            "vanishing_gk",
        )
        add(
            "squared_exponential_product" + tag,
            build_quasi_product(
                Pow(Var(0), 2.0),
                [Mul(Const(0.8), _exponential(0.6)), _exponential(-0.5)] + [Var(0)] * (n - 2),
            ),
            "vanishing_gk",
        )
        add(
            "armington_constant_return" + tag,
            build_family(
                "acms",
                {"A": 1.0, "k": (1.0, 0.5, 0.25)[:n], "rho": 2.0, "gamma": 1.0},
            ),
            "vanishing_gk",
        )
        add(
            "log_of_exponential_sum" + tag,
            _log_of_exp_sum((1.0, 2.0, 1.5)[:n], (0.8, -0.6, 0.5)[:n]),
            "vanishing_gk",
        )
        ir_k = (0.5, 0.6) if n == 2 else (0.4, 0.4, 0.3)
        add(
            "cobb_douglas_increasing_return" + tag,
            build_family("cobb_douglas", {"A": 1.0, "k": ir_k}),
            "nonvanishing_gk",
        )
        add(
            "spillman" + tag,
            build_family("spillman_mitscherlich", {"A": 1.0, "a": (1.0,) * n}),
            "nonvanishing_gk",
            "nonflat_everywhere",
        )
        tc_a = (0.5, 0.5) if n == 2 else (0.3, 0.3, 0.4)
        add(
            "transcendental_constant_return" + tag,
            build_family("transcendental", {"A": 1.0, "a": tc_a, "b": (0.0,) * n}),
            "vanishing_gk",
        )
        tz_a = (0.0, 0.0) if n == 2 else (0.0, 0.0, 1.0)
        tz_b = (0.8, -0.5) if n == 2 else (0.9, 0.7, 0.0)
        add(
            "transcendental_two_pure_exponentials" + tag,
            build_family("transcendental", {"A": 1.0, "a": tz_a, "b": tz_b}),
            "vanishing_gk",
        )
        add(
            "transcendental_flat_exponential" + tag,
            build_family(
                "transcendental",
                {"A": 1.0, "a": (0.0,) * n, "b": (1.0, 0.5, -0.4)[:n]},
            ),
            "flat",
        )
        add(
            "transcendental_flat_sqrt" + tag,
            build_family("transcendental", {"A": 1.0, "a": (0.5,) * n, "b": (0.0,) * n}),
            "flat",
        )
    return fixtures


@dataclass
class _CurvatureStats:
    k: _Extreme = field(default_factory=_Extreme)
    r: _Extreme = field(default_factory=_Extreme)
    s: _Extreme = field(default_factory=_Extreme)
    pointwise_max_r_min: float = math.inf
    pointwise_max_r_min_point: Optional[Point] = None
    thr_k: float = 0.0
    thr_r: float = 0.0
    thr_s: float = 0.0


def _curvature_stats(spec: FunctionSpec, grid: SampleGrid, tol: TolerancePolicy) -> _CurvatureStats:
    points = grid.points()
    jets = _grid_jets(spec, points)
    n = spec.n
    pairs = [(i, k) for i in range(n) for k in range(i + 1, n)]
    quads = canonical_riemann_quads(n)
    stats = _CurvatureStats()
    k_noise = r_noise = s_noise = 0.0
    for p, j in zip(points, jets):
        stats.k.update(gauss_kronecker(j), p)
        k_noise = max(k_noise, _det_noise(j))
        max_r_here = 0.0
        for q in quads:
            r = riemann_component(j, *q)
            stats.r.update(r, p)
            max_r_here = max(max_r_here, abs(r))
        if max_r_here < stats.pointwise_max_r_min:
            stats.pointwise_max_r_min = max_r_here
            stats.pointwise_max_r_min_point = p
        for i, k in pairs:
            stats.s.update(sectional_curvature(j, i, k), p)
            r_noise = max(r_noise, _minor_noise(j, i, k))
            s_noise = max(s_noise, _sectional_noise(j, i, k))
    stats.thr_k = tol.zero_abs + tol.zero_rel * k_noise
    stats.thr_r = tol.zero_abs + tol.zero_rel * r_noise
    stats.thr_s = tol.zero_abs + tol.zero_rel * s_noise
    return stats


def _run_check(fx: CatalogFixture, check: str, st: _CurvatureStats) -> ExpectationResult:
    if check == "vanishing_gk":
        passed, observed, bound, witness = st.k.max <= st.thr_k, st.k.max, st.thr_k, st.k.max_point
    elif check == "nonvanishing_gk":
        bound = 10.0 * st.thr_k
        passed, observed, witness = st.k.min >= bound, st.k.min, st.k.min_point
    elif check == "flat":
        passed, observed, bound, witness = st.r.max <= st.thr_r, st.r.max, st.thr_r, st.r.max_point
    elif check == "nonflat_everywhere":
        bound = 10.0 * st.thr_r
        observed = st.pointwise_max_r_min
        passed, witness = observed >= bound, st.pointwise_max_r_min_point
    elif check == "vanishing_sectional":
        passed, observed, bound, witness = st.s.max <= st.thr_s, st.s.max, st.thr_s, st.s.max_point
    else:
        raise ParameterViolation(f"unknown check {check!r}")
    return ExpectationResult(
        fixture=fx.name,
        n=fx.spec.n,
        check=check,
        passed=bool(passed),
        observed=float(observed),
        bound=float(bound),
        witness=witness,
    )


def verify_catalog(tol: Optional[TolerancePolicy] = None) -> CatalogReport:
    """Run every fixture expectation and report pass/fail with the worst
    witness.  Failures are report entries, never exceptions."""
    tol = tol or TolerancePolicy()
    results = []
    for fx in catalog_fixtures():
        grid = default_grid(fx.spec.n, seed=fx.seed)
        stats = _curvature_stats(fx.spec, grid, tol)
        for check in fx.checks:
            results.append(_run_check(fx, check, stats))
    return CatalogReport(tuple(results))

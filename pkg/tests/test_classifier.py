"""Sample grids, classification verdicts and the classification fixture suite."""

import pytest

from prodgeo.catalog import FunctionSpec, build_family, build_quasi_product
from prodgeo.classifier import (
    SampleGrid,
    TolerancePolicy,
    catalog_fixtures,
    classify,
    default_grid,
    estimate_sigma,
    verify_catalog,
)
from prodgeo.errors import DegenerateDenominator, DomainViolation, ParameterViolation
from prodgeo.expr import Const, Exp, Ln, Mul, Pow, Var


# ---------------------------------------------------------------------------
# SampleGrid
# ---------------------------------------------------------------------------

def test_grid_points_strictly_inside_and_deterministic():
    grid = SampleGrid(box=((0.5, 2.0), (0.3, 3.0)), points_per_axis=5, seed=42)
    pts1 = grid.points()
    pts2 = grid.points()
    assert len(pts1) == 25 + 32
    assert [p.coords for p in pts1] == [p.coords for p in pts2]
    for p in pts1:
        for (lo, hi), c in zip(grid.box, p.coords):
            assert lo < c < hi


def test_grid_seed_changes_jitter_only():
    a = SampleGrid(box=((0.5, 2.0),) * 2, points_per_axis=4, seed=0).points()
    b = SampleGrid(box=((0.5, 2.0),) * 2, points_per_axis=4, seed=1).points()
    assert [p.coords for p in a[:16]] == [p.coords for p in b[:16]]
    assert [p.coords for p in a[16:]] != [p.coords for p in b[16:]]


def test_grid_validation():
    with pytest.raises(ParameterViolation):
        SampleGrid(box=((0.0, 2.0),))
    with pytest.raises(ParameterViolation):
        SampleGrid(box=((0.5, 2.0),), points_per_axis=1)
    with pytest.raises(ParameterViolation):
        TolerancePolicy(zero_abs=0.0)


def test_default_grid_shape():
    assert default_grid(2).points_per_axis == 7
    assert default_grid(3).points_per_axis == 7
    assert default_grid(4).points_per_axis == 4
    assert default_grid(5).box == ((0.5, 2.0),) * 5


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def test_classify_cobb_douglas_constant_return():
    spec = build_family("cobb_douglas", {"A": 1.0, "k": (0.4, 0.6)})
    verdict = classify(spec, default_grid(2))
    assert verdict.holds("vanishing_gk")
    assert not verdict.holds("minimal")
    # unequal exponents break proportionality of the MRS
    assert not verdict.holds("proportional_mrs")
    assert verdict.holds("constant_elasticity_x1")
    assert verdict.holds("constant_elasticity_x2")
    ces = verdict.property("ces")
    assert ces.holds and ces.estimate == pytest.approx(1.0, abs=1e-10)
    assert verdict.property("constant_elasticity_x1").estimate == pytest.approx(0.4, abs=1e-12)


def test_classify_sqrt_product():
    spec = build_quasi_product(Pow(Var(0), 0.5), [Var(0), Var(0)])
    verdict = classify(spec, default_grid(2))
    for name in ("vanishing_gk", "flat", "vanishing_sectional", "proportional_mrs"):
        assert verdict.holds(name), name
    assert not verdict.holds("minimal")


def test_classify_spillman_negative_controls():
    spec = build_family("spillman_mitscherlich", {"A": 1.0, "a": (1.0, 1.0)})
    verdict = classify(spec, default_grid(2))
    for name in ("vanishing_gk", "flat", "ces", "constant_elasticity_x1", "constant_elasticity_x2"):
        assert not verdict.holds(name), name


def test_classify_verdict_invariant_and_json():
    spec = build_family("cobb_douglas", {"A": 1.0, "k": (0.4, 0.6)})
    verdict = classify(spec, default_grid(2))
    for p in verdict.properties:
        assert p.holds == (p.worst_value <= p.threshold_used)
    doc = verdict.to_json_obj()
    assert doc["schema_version"] == "1"
    assert [p["name"] for p in doc["properties"]] == [p.name for p in verdict.properties]


def test_classify_is_deterministic():
    spec = build_family("transcendental", {"A": 1.0, "a": (0.5, 0.5), "b": (0.3, 0.1)})
    a = classify(spec, default_grid(2)).to_json_obj()
    b = classify(spec, default_grid(2)).to_json_obj()
    assert a == b


def test_classify_propagates_errors_with_point():
    linear = FunctionSpec(2, Var(0) + Var(1))
    with pytest.raises(DegenerateDenominator) as exc:
        classify(linear, default_grid(2))
    assert exc.value.point is not None

    log_spec = FunctionSpec(2, Ln(Mul(Var(0), Var(1))))  # non-positive where x1 x2 <= 1
    with pytest.raises(DomainViolation) as exc:
        classify(log_spec, default_grid(2))
    assert exc.value.point is not None


def test_classify_grid_dimension_mismatch():
    spec = build_family("cobb_douglas", {"A": 1.0, "k": (0.4, 0.6)})
    with pytest.raises(ParameterViolation):
        classify(spec, default_grid(3))


# ---------------------------------------------------------------------------
# estimate_sigma
# ---------------------------------------------------------------------------

def test_estimate_sigma_for_ces_products():
    for sigma in (0.5, 2.0, 3.0):
        c = (sigma - 1.0) / sigma
        spec = build_quasi_product(
            Var(0), [Exp(Pow(Var(0), c)), Exp(Mul(Const(0.7), Pow(Var(0), c)))]
        )
        est, spread = estimate_sigma(spec, default_grid(2))
        assert est == pytest.approx(sigma, abs=1e-8)
        assert spread <= 1e-8


@pytest.mark.parametrize("rho", [2.0, -1.0, 0.5, -3.0])
@pytest.mark.parametrize("gamma", [1.0, 0.7, 2.0])
def test_estimate_sigma_acms_matches_textbook_value(rho, gamma):
    """The CES-type aggregator has substitution elasticity 1/(1 - rho),
    independent of the homogeneity degree."""
    spec = build_family("acms", {"A": 1.3, "k": (1.0, 0.6), "rho": rho, "gamma": gamma})
    est, spread = estimate_sigma(spec, default_grid(2))
    assert est == pytest.approx(1.0 / (1.0 - rho), rel=1e-12)
    assert spread <= 1e-12


def test_estimate_sigma_cobb_douglas_is_one():
    spec = build_family("cobb_douglas", {"A": 2.0, "k": (0.3, 0.7)})
    est, spread = estimate_sigma(spec, default_grid(2))
    assert est == pytest.approx(1.0, abs=1e-10)
    assert spread <= 1e-10


def test_estimate_sigma_transcendental_with_growth_terms_is_not_ces():
    spec = build_family("transcendental", {"A": 1.0, "a": (0.5, 0.5), "b": (1.0, 1.0)})
    est, spread = estimate_sigma(spec, default_grid(2))
    assert spread / abs(est) > TolerancePolicy().constancy_rel


def test_classify_single_factor_constant_elasticity():
    """A monomial factor in one input gives a constant elasticity for
    that input alone."""
    spec = build_quasi_product(Var(0), [Pow(Var(0), 0.7), Const(1.0) + Var(0)])
    verdict = classify(spec, default_grid(2))
    e1 = verdict.property("constant_elasticity_x1")
    assert e1.holds and e1.estimate == pytest.approx(0.7, abs=1e-12)
    assert not verdict.holds("constant_elasticity_x2")


def test_classify_homothetic_power_product():
    """Any outer over a common-power product keeps the proportional MRS,
    is nowhere minimal, and is CES with unit elasticity."""
    spec = build_quasi_product(Pow(Var(0), 2.0), [Pow(Var(0), 0.7)] * 3)
    verdict = classify(spec, default_grid(3))
    assert verdict.holds("proportional_mrs")
    assert not verdict.holds("minimal")
    ces = verdict.property("ces")
    assert ces.holds and ces.estimate == pytest.approx(1.0, abs=1e-10)


def test_estimate_sigma_two_input_ratio_forms_general_parameters():
    """The two-input ratio forms are CES for general (sigma, k); the
    indicator is 0/0 on the diagonal, hence the asymmetric box."""
    from prodgeo.expr import Add, Div

    asym = SampleGrid(box=((0.5, 2.0), (0.7, 2.8)), points_per_axis=7, seed=0)
    sigma, k = 3.0, 2.0
    c = (sigma - 1.0) / sigma
    ratio = Div(Add(Pow(Var(0), c), Const(0.5)), Add(Pow(Var(1), c), Const(-0.3)))
    est, spread = estimate_sigma(FunctionSpec(2, Pow(ratio, sigma / k)), asym)
    assert est == pytest.approx(sigma, rel=1e-10) and spread <= 1e-10

    log_ratio = Div(Ln(Mul(Const(4.0), Var(0))), Ln(Mul(Const(5.0), Var(1))))
    est, spread = estimate_sigma(FunctionSpec(2, Pow(log_ratio, 1.0 / -2.0)), asym)
    assert est == pytest.approx(1.0, rel=1e-10) and spread <= 1e-10


# ---------------------------------------------------------------------------
# verify_catalog
# ---------------------------------------------------------------------------

def test_verify_catalog_all_pass():
    report = verify_catalog()
    failures = [r for r in report.results if not r.passed]
    assert report.all_passed, failures
    names = {r.fixture for r in report.results}
    assert {"sqrt_of_product_2in", "spillman_3in", "armington_constant_return_2in"} <= names


def test_verify_catalog_fixture_table_shape():
    fixtures = catalog_fixtures()
    assert {fx.spec.n for fx in fixtures} == {2, 3}
    assert len({fx.name for fx in fixtures}) == len(fixtures)
    # negative controls present
    assert any("increasing_return" in fx.name and "nonvanishing_gk" in fx.checks for fx in fixtures)
    assert any(fx.name.startswith("spillman") and "nonflat_everywhere" in fx.checks for fx in fixtures)


def test_verify_catalog_respects_tolerances():
    # an absurdly small zero tolerance must break the vanishing checks
    strict = TolerancePolicy(zero_abs=1e-30, zero_rel=1e-30)
    report = verify_catalog(strict)
    assert not report.all_passed


def test_verify_catalog_report_json():
    report = verify_catalog()
    doc = report.to_json_obj()
    assert doc["schema_version"] == "1"
    assert doc["all_passed"] is True
    assert len(doc["results"]) == len(report.results)
    first = doc["results"][0]
    assert set(first) == {"fixture", "n", "check", "passed", "observed", "bound", "witness_point"}


def test_flat_verdicts_imply_vanishing_sectional():
    """Across the whole fixture table: every produced verdict with flat
    true also has vanishing sectional curvature, and proportional MRS
    excludes minimality.  Pure-exponential fixtures are perfect
    substitutes (degenerate substitution denominator), so classify()
    legitimately refuses them and they are skipped."""
    produced = 0
    for fx in catalog_fixtures():
        try:
            verdict = classify(fx.spec, default_grid(fx.spec.n, seed=fx.seed))
        except DegenerateDenominator:
            continue
        produced += 1
        if verdict.holds("flat"):
            assert verdict.holds("vanishing_sectional"), fx.name
        if verdict.holds("proportional_mrs"):
            assert not verdict.holds("minimal"), fx.name
    assert produced >= 10

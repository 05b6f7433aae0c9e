"""prodgeo: curvature and substitution-elasticity analysis of production
hypersurfaces.

A production function f maps strictly positive input quantities to a
positive output; its graph (x1, ..., xn, f(x)) is a hypersurface whose
geometry encodes economic structure.  This package evaluates the
curvature invariants of that hypersurface (Gauss-Kronecker, mean,
sectional, Riemann components) and the classical substitution
indicators (output elasticities, marginal rates of substitution, Hicks
and Allen elasticities), with exact derivatives from second-order
forward propagation, and verifies the classification statements for
quasi-product models numerically over sample grids.
"""

from .catalog import (
    Diagnostic,
    FunctionSpec,
    Point,
    build_family,
    build_quasi_product,
    evaluate,
    spec_from_json,
    spec_to_json,
    validate,
)
from .classifier import (
    CatalogReport,
    ClassificationVerdict,
    SampleGrid,
    TolerancePolicy,
    classify,
    default_grid,
    estimate_sigma,
    verify_catalog,
)
from .economics import (
    allen_determinant,
    allen_elasticity,
    hicks_elasticity,
    mrs,
    output_elasticity,
    substitution_sample,
)
from .errors import (
    ArityMismatch,
    DegenerateDenominator,
    DegenerateOuter,
    DomainViolation,
    EmptyInnerList,
    ExpressionError,
    ParameterViolation,
    ProdGeoError,
    SingularAllenDeterminant,
    StencilOutOfDomain,
    StructureMissing,
    ZeroMarginalProduct,
)
from .expr import Expr, expr_from_obj, expr_to_obj
from .geometry import (
    CurvatureSample,
    curvature_sample,
    gauss_kronecker,
    hessian_determinant,
    mean_curvature,
    minimality_residual,
    quasi_product_hessian_det,
    riemann_component,
    sectional_curvature,
    slope_w,
)
from .jets import SecondOrderJet, fd_oracle, jet
from .reports import GeometryReport, geometry_report

__version__ = "0.1.0"

__all__ = [
    "FunctionSpec",
    "Point",
    "Diagnostic",
    "build_family",
    "build_quasi_product",
    "evaluate",
    "validate",
    "spec_to_json",
    "spec_from_json",
    "SampleGrid",
    "TolerancePolicy",
    "ClassificationVerdict",
    "CatalogReport",
    "classify",
    "default_grid",
    "estimate_sigma",
    "verify_catalog",
    "SecondOrderJet",
    "jet",
    "fd_oracle",
    "slope_w",
    "hessian_determinant",
    "gauss_kronecker",
    "mean_curvature",
    "minimality_residual",
    "sectional_curvature",
    "riemann_component",
    "CurvatureSample",
    "curvature_sample",
    "quasi_product_hessian_det",
    "output_elasticity",
    "mrs",
    "hicks_elasticity",
    "allen_determinant",
    "allen_elasticity",
    "substitution_sample",
    "GeometryReport",
    "geometry_report",
    "Expr",
    "expr_to_obj",
    "expr_from_obj",
    "ProdGeoError",
    "ExpressionError",
    "ParameterViolation",
    "ArityMismatch",
    "EmptyInnerList",
    "DomainViolation",
    "StencilOutOfDomain",
    "StructureMissing",
    "DegenerateOuter",
    "ZeroMarginalProduct",
    "DegenerateDenominator",
    "SingularAllenDeterminant",
    "__version__",
]

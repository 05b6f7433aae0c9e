"""Curvature of the graph hypersurface (x1, ..., xn, f(x)).

For a graph hypersurface all curvature quantities are rational in the
first and second derivatives of f and the slope factor
w = sqrt(1 + |grad f|^2):

* Gauss-Kronecker curvature   K      = det(Hess f) / w^(n+2)
* mean curvature              H      = (1/n) sum_i d/dx_i (f_i / w)
* sectional curvature         K_ij   = (f_ii f_jj - f_ij^2) / (w^2 (1 + f_i^2 + f_j^2))
* Riemann components          R_ijkl = (f_il f_jk - f_ik f_jl) / w^4

The mean curvature is assembled in closed form from the jet,
(1/n) [sum_i f_ii / w  -  sum_{i,j} f_i f_j f_ij / w^3],
so only second derivatives are needed.  Because every Riemann component
is a 2x2 minor of the Hessian (divided by w^4), flatness is decided by
the canonical set of independent minors.

For composite functions F(g1(x1) * ... * gn(xn)) the Hessian determinant
also has an analytic product form, implemented here from univariate jets
of F and the inner factors; it must agree with the generic determinant
and the test suite holds it to 1e-9 relative.

Everything in this module is pure; grids of points may be evaluated
concurrently without coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import FunctionSpec, as_point
from .errors import ArityMismatch, DegenerateOuter, DomainViolation, StructureMissing
from .jets import SecondOrderJet, jet, univariate_jet
from .linalg import det_pivoted
from .points import Point

__all__ = [
    "slope_w",
    "hessian_determinant",
    "gauss_kronecker",
    "mean_curvature",
    "mean_curvature_of_jet",
    "minimality_residual",
    "sectional_curvature",
    "riemann_component",
    "canonical_riemann_quads",
    "CurvatureSample",
    "curvature_sample",
    "quasi_product_hessian_det",
]


def slope_w(j: SecondOrderJet) -> float:
    """Slope factor sqrt(1 + |grad f|^2); always >= 1."""
    g = j.gradient
    return math.sqrt(1.0 + float(g @ g))


def hessian_determinant(j: SecondOrderJet) -> float:
    return det_pivoted(j.hessian)


def gauss_kronecker(j: SecondOrderJet) -> float:
    """det(Hess f) / w^(n+2)."""
    return hessian_determinant(j) / slope_w(j) ** (j.n + 2)


def mean_curvature_of_jet(j: SecondOrderJet) -> float:
    """(1/n) [sum_i f_ii / w - sum_{i,j} f_i f_j f_ij / w^3]."""
    g, h = j.gradient, j.hessian
    w = slope_w(j)
    return (float(np.trace(h)) / w - float(g @ h @ g) / w**3) / j.n


def mean_curvature(spec: FunctionSpec, p) -> float:
    return mean_curvature_of_jet(jet(spec, p))


def minimality_residual(j: SecondOrderJet) -> float:
    """Expanded zero-mean-curvature condition:
    sum_i f_ii + sum_{i != j} (f_i^2 f_jj - f_i f_j f_ij).

    Vanishes exactly where the mean curvature does; the two are related
    by residual = n * H * w^3.  Useful as an independent cross-check
    because it needs no square root.
    """
    g, h = j.gradient, j.hessian
    tr = float(np.trace(h))
    # The i == j terms of the double sum cancel pairwise, so it equals
    # |g|^2 tr(h) - g.h.g.
    return tr + float(g @ g) * tr - float(g @ h @ g)


def _check_index(j: SecondOrderJet, *idx: int):
    for i in idx:
        if not 0 <= i < j.n:
            raise IndexError(f"input index {i} out of range for n={j.n}")


def sectional_curvature(j: SecondOrderJet, i: int, k: int) -> float:
    """Curvature of the coordinate plane section spanned by axes i and k."""
    _check_index(j, i, k)
    if i == k:
        raise IndexError("sectional curvature needs two distinct axes")
    g, h = j.gradient, j.hessian
    w2 = 1.0 + float(g @ g)
    numerator = h[i, i] * h[k, k] - h[i, k] * h[i, k]
    return float(numerator / (w2 * (1.0 + g[i] * g[i] + g[k] * g[k])))


def riemann_component(j: SecondOrderJet, i: int, k: int, l: int, m: int) -> float:
    """Component R(d_i, d_k, d_l, d_m) = (f_im f_kl - f_il f_km) / w^4."""
    _check_index(j, i, k, l, m)
    g, h = j.gradient, j.hessian
    w2 = 1.0 + float(g @ g)
    return float(h[i, m] * h[k, l] - h[i, l] * h[k, m]) / (w2 * w2)


def canonical_riemann_quads(n: int) -> list[tuple[int, int, int, int]]:
    """The canonical component set {(i, j, j, i): i < j}.

    R(i, j, j, i) is the principal 2x2 Hessian minor of axes i, j over
    w^4; one component per axis pair.  These are the components the
    flatness verdict monitors, and they determine every coordinate-plane
    sectional curvature (same minors, different normalizer).
    """
    return [(i, j, j, i) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True, eq=False)
class CurvatureSample:
    """All curvature quantities evaluated at one point.

    ``sectional`` is an n-by-n symmetric matrix with NaN on the diagonal
    (the plane section needs two distinct axes).  ``riemann`` maps the
    canonical quadruples, plus any extra requested ones, to component
    values.
    """

    point: Point
    w: float
    gauss_kronecker: float
    mean: float
    sectional: np.ndarray
    riemann: dict[tuple[int, int, int, int], float]


def curvature_sample(spec: FunctionSpec, p, extra_quads=()) -> CurvatureSample:
    point = as_point(p)
    j = jet(spec, point)
    n = j.n
    sect = np.full((n, n), math.nan)
    for i in range(n):
        for k in range(i + 1, n):
            sect[i, k] = sectional_curvature(j, i, k)
            sect[k, i] = sect[i, k]
    sect.setflags(write=False)
    quads = list(canonical_riemann_quads(n)) + [q for q in extra_quads]
    riemann = {q: riemann_component(j, *q) for q in quads}
    return CurvatureSample(
        point=point,
        w=slope_w(j),
        gauss_kronecker=gauss_kronecker(j),
        mean=mean_curvature_of_jet(j),
        sectional=sect,
        riemann=riemann,
    )


def quasi_product_hessian_det(spec: FunctionSpec, p) -> float:
    """Analytic Hessian determinant of F(g1(x1) * ... * gn(xn)).

    With u = prod g_i, r_i = g_i'/g_i and s_i = (g_i'/g_i)', the
    determinant equals

        (u F')^n [ prod_j s_j
                   + (1 + u F''/F') * sum_j ( r_j^2 * prod_{i != j} s_i ) ].

    Requires the outer/inner structure, F'(u) != 0 and every g_i > 0 at
    the point.
    """
    if not spec.has_composition:
        raise StructureMissing(
            f"{spec.family} spec carries no outer/inner composition structure"
        )
    point = as_point(p)
    if len(point) != spec.n:
        raise ArityMismatch(f"point has {len(point)} coordinates, function has {spec.n} inputs")
    n = spec.n
    r = np.zeros(n)
    s = np.zeros(n)
    u = 1.0
    for i, g in enumerate(spec.inners):
        gv, gd, gdd = univariate_jet(g, point[i])
        if gv <= 0.0:
            raise DomainViolation(
                f"inner factor {i + 1} is non-positive ({gv!r}) at {point.coords}", point=point
            )
        r[i] = gd / gv
        s[i] = gdd / gv - r[i] * r[i]
        u *= gv
    _, fd1, fd2 = univariate_jet(spec.outer, u)
    if fd1 == 0.0:
        raise DegenerateOuter(f"outer derivative vanishes at u={u!r}", point=point)
    prod_all = 1.0
    for si in s:
        prod_all *= si
    correction = 0.0
    for jdx in range(n):
        partial = 1.0
        for i in range(n):
            if i != jdx:
                partial *= s[i]
        correction += r[jdx] * r[jdx] * partial
    bracket = prod_all + (1.0 + u * fd2 / fd1) * correction
    return (u * fd1) ** n * bracket

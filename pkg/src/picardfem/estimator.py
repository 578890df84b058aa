"""Residual refinement indicators and bulk-chasing (Dörfler) marking.

Per element T the squared indicator is

    h_T^2 ||f + div(mu_v grad v)||_{L2(T)}^2
  + h_T   ||[mu_v dn v]||_{L2(dT cap Omega)}^2
  + h_T   ||g - mu_v dn v||_{L2(dT cap GammaN)}^2

with h_T = |T|^(1/2).  Interior edge jumps enter the indicators of both
adjacent elements (the boundary sum is taken per element, without
halving).  Dirichlet edges contribute nothing.  For P1 functions and
x-independent mu the flux is elementwise constant, so the divergence
term reduces to the volume residual of f alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import NEUMANN, MeshError, Triangulation
from .nonlinearity import MonotoneProblem, _element_flux_data
from .quadrature import EDGE_POINTS, EDGE_WEIGHTS, TRI_WEIGHTS, triangle_points
from .space import FESpace, FEFunction


@dataclass
class IndicatorField:
    mesh: Triangulation
    eta_sq: np.ndarray      # (ne,) squared indicators
    total_sq: float

    @property
    def total(self) -> float:
        return float(np.sqrt(self.total_sq))


@dataclass
class MarkedSet:
    elements: np.ndarray    # ids, ascending
    theta: float


def compute_indicators(problem: MonotoneProblem, space: FESpace, v: FEFunction) -> IndicatorField:
    mesh = space.mesh
    et = mesh.edge_table()
    grads, t, mu = _element_flux_data(problem, v)
    flux = mu[:, None] * grads
    h = mesh.element_sizes()
    eta_sq = np.zeros(mesh.n_elements)

    # volume residual; for x-dependent mu the flux divergence picks up the
    # x-gradient of mu (zero for the built-in nonlinearities)
    nl = problem.nonlinearity
    if problem.f is not None or (nl.x_dependent and nl.grad_x_mu is not None):
        p = mesh.coords[mesh.elements]
        pts = triangle_points(p[:, 0], p[:, 1], p[:, 2]).reshape(-1, 2)
        m = 7
        vals = np.zeros(len(pts))
        if problem.f is not None:
            vals += problem.f(pts)
        if nl.x_dependent and nl.grad_x_mu is not None:
            gmu = nl.grad_x_mu(pts, np.repeat(t, m))
            vals += (gmu * np.repeat(grads, m, axis=0)).sum(axis=1)
        sq = (vals.reshape(-1, m) ** 2 * TRI_WEIGHTS).sum(axis=1) * mesh.areas()
        eta_sq += h ** 2 * sq

    # interior jumps: [mu dn v] is direction-independent after squaring
    interior = np.nonzero(~et.is_boundary)[0]
    if len(interior):
        pa = mesh.coords[et.edge_vertices[interior, 0]]
        pb = mesh.coords[et.edge_vertices[interior, 1]]
        d = pb - pa
        lengths = et.lengths[interior]
        normals = np.column_stack([d[:, 1], -d[:, 0]]) / lengths[:, None]
        ep = et.edge_elems[interior, 0]
        em = et.edge_elems[interior, 1]
        jump = ((flux[ep] - flux[em]) * normals).sum(axis=1)
        jump_sq = jump ** 2 * lengths
        np.add.at(eta_sq, ep, h[ep] * jump_sq)
        np.add.at(eta_sq, em, h[em] * jump_sq)

    # Neumann mismatch
    neumann_facets = np.nonzero(mesh.boundary_tags == NEUMANN)[0]
    if len(neumann_facets):
        edges = et.facet_edge[neumann_facets]
        elems = et.edge_elems[edges, 0]
        po, qo = et.edge_oriented[edges, 0], et.edge_oriented[edges, 1]
        d = mesh.coords[qo] - mesh.coords[po]
        lengths = et.lengths[edges]
        outward = np.column_stack([d[:, 1], -d[:, 0]]) / lengths[:, None]
        fn = (flux[elems] * outward).sum(axis=1)
        if problem.g is not None:
            pts = (mesh.coords[po][:, None, :]
                   + EDGE_POINTS[None, :, None] * d[:, None, :])
            gvals = problem.g(pts.reshape(-1, 2)).reshape(-1, len(EDGE_POINTS))
            mismatch_sq = ((gvals - fn[:, None]) ** 2 * EDGE_WEIGHTS).sum(axis=1) * lengths
        else:
            mismatch_sq = fn ** 2 * lengths
        np.add.at(eta_sq, elems, h[elems] * mismatch_sq)

    return IndicatorField(mesh=mesh, eta_sq=eta_sq, total_sq=float(eta_sq.sum()))


def dorfler_mark(ind: IndicatorField, theta: float) -> MarkedSet:
    """Minimum-cardinality set M with theta^2 * total <= sum of eta_sq over M.

    Elements are sorted by decreasing squared indicator (ties by ascending
    id) and the shortest sufficient prefix is taken, which is exactly
    minimal.  A zero estimator yields the empty set (lucky breakdown).
    """
    if not 0.0 < theta <= 1.0:
        raise ValueError("theta must lie in (0, 1]")
    eta_sq = ind.eta_sq
    if ind.total_sq == 0.0:
        return MarkedSet(elements=np.empty(0, dtype=np.int64), theta=theta)
    order = np.lexsort((np.arange(len(eta_sq)), -eta_sq))
    csum = np.cumsum(eta_sq[order])
    target = theta * theta * ind.total_sq
    k = int(np.searchsorted(csum, target)) + 1
    if k > len(order):  # summation-order slack; take every positive entry
        k = int((eta_sq[order] > 0).sum())
    chosen = order[:k]
    return MarkedSet(elements=np.sort(chosen), theta=theta)


def restricted_estimator(ind: IndicatorField, subset) -> float:
    """Estimator restricted to a subset of elements: sqrt of the partial sum."""
    subset = np.asarray(list(subset), dtype=np.int64)
    if len(subset) == 0:
        return 0.0
    if subset.min() < 0 or subset.max() >= len(ind.eta_sq):
        raise MeshError("subset contains an unknown element id")
    return float(np.sqrt(ind.eta_sq[subset].sum()))

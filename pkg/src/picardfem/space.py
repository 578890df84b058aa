"""Lowest-order conforming P1 spaces on triangulations.

Degrees of freedom are vertex values; vertices on the Dirichlet boundary
are constrained and excluded from the free dof numbering (which follows
vertex-id order).  Assembly returns the full vertex-indexed structures
where natural and restricts to free dofs for solves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .mesh import DIRICHLET, NEUMANN, MeshError, Triangulation, is_refinement_of
from .quadrature import EDGE_POINTS, EDGE_WEIGHTS, TRI_BARY, TRI_WEIGHTS, triangle_points


class ConfigurationError(ValueError):
    """Problem setup violates a structural requirement."""


class AssemblyError(ValueError):
    """Assembly failed (degenerate geometry)."""


@dataclass(frozen=True)
class FESpace:
    mesh: Triangulation
    dirichlet_mask: np.ndarray   # (nv,) bool
    free: np.ndarray             # (N,) vertex ids in ascending order
    dof_of_vertex: np.ndarray    # (nv,) dof index or -1 for Dirichlet vertices

    @property
    def n_dofs(self) -> int:
        return len(self.free)


def build_space(mesh: Triangulation) -> FESpace:
    """Space of continuous P1 functions vanishing on the Dirichlet boundary."""
    dmask = np.zeros(mesh.n_vertices, dtype=bool)
    is_d = mesh.boundary_tags == DIRICHLET
    if not is_d.any():
        raise ConfigurationError("mesh has no Dirichlet facet; at least one is required")
    dmask[mesh.boundary[is_d].ravel()] = True
    free = np.nonzero(~dmask)[0]
    dof = -np.ones(mesh.n_vertices, dtype=np.int64)
    dof[free] = np.arange(len(free))
    dmask.setflags(write=False)
    free.setflags(write=False)
    dof.setflags(write=False)
    return FESpace(mesh=mesh, dirichlet_mask=dmask, free=free, dof_of_vertex=dof)


@dataclass
class FEFunction:
    """P1 function given by one coefficient per vertex (Dirichlet values included)."""
    space: FESpace
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=np.float64)
        if self.coefficients.shape != (self.space.mesh.n_vertices,):
            raise ValueError("coefficient vector must have one entry per vertex")

    def copy(self) -> "FEFunction":
        return FEFunction(self.space, self.coefficients.copy())


def zero_function(space: FESpace, dirichlet_data=None) -> FEFunction:
    """Zero free dofs; Dirichlet entries interpolate ``dirichlet_data`` if given."""
    coeffs = np.zeros(space.mesh.n_vertices)
    if dirichlet_data is not None:
        idx = np.nonzero(space.dirichlet_mask)[0]
        coeffs[idx] = dirichlet_data(space.mesh.coords[idx])
    return FEFunction(space, coeffs)


def impose_dirichlet(u: FEFunction, dirichlet_data) -> None:
    if dirichlet_data is None:
        return
    idx = np.nonzero(u.space.dirichlet_mask)[0]
    u.coefficients[idx] = dirichlet_data(u.space.mesh.coords[idx])


def interpolate(space: FESpace, fn) -> FEFunction:
    """Nodal interpolant of a pointwise function."""
    return FEFunction(space, np.asarray(fn(space.mesh.coords), dtype=np.float64))


def p1_gradients(mesh: Triangulation) -> tuple[np.ndarray, np.ndarray]:
    """Constant basis gradients per element.

    Returns (areas, grads) with grads of shape (ne, 3, 2); grads[t, i] is
    the gradient of the hat function of local vertex i on element t.
    """
    p = mesh.coords[mesh.elements]
    areas = mesh.areas()
    if (areas <= 0).any():
        raise AssemblyError("degenerate element (non-positive area)")
    d = p[:, [2, 0, 1]] - p[:, [1, 2, 0]]  # opposite-edge vectors p_{i+2} - p_{i+1}
    grads = np.empty_like(d)
    grads[:, :, 0] = -d[:, :, 1]
    grads[:, :, 1] = d[:, :, 0]
    grads /= (2.0 * areas)[:, None, None]
    return areas, grads


def element_gradients(mesh: Triangulation, coefficients: np.ndarray) -> np.ndarray:
    """Constant gradient of a P1 coefficient vector on every element, (ne, 2)."""
    _, grads = p1_gradients(mesh)
    vals = coefficients[mesh.elements]  # (ne, 3)
    return np.einsum("ti,tid->td", vals, grads)


def stiffness_matrix(mesh: Triangulation) -> sp.csr_matrix:
    """Unconstrained matrix of the Dirichlet form: entry (i, j) = sum_T |T| grad phi_i . grad phi_j."""
    areas, grads = p1_gradients(mesh)
    local = np.einsum("t,tid,tjd->tij", areas, grads, grads)
    e = mesh.elements
    rows = np.repeat(e, 3, axis=1).ravel()
    cols = np.tile(e, (1, 3)).ravel()
    mat = sp.coo_matrix((local.ravel(), (rows, cols)),
                        shape=(mesh.n_vertices, mesh.n_vertices))
    return mat.tocsr()


def assemble_riesz(space: FESpace) -> sp.csr_matrix:
    """SPD matrix of the H-inner product (grad, grad) on free dofs."""
    full = stiffness_matrix(space.mesh)
    return full[space.free, :][:, space.free].tocsr()


def assemble_load(space: FESpace, f=None, g=None) -> np.ndarray:
    """Vertex-indexed load vector: entry i = int f phi_i + int_GammaN g phi_i.

    Volume terms use the degree-5 triangle rule, Neumann terms 3-point
    Gauss per edge.  ``f`` and ``g`` map (m, 2) point arrays to (m,) values;
    either may be None (treated as zero).
    """
    mesh = space.mesh
    load = np.zeros(mesh.n_vertices)
    if f is not None:
        p = mesh.coords[mesh.elements]
        pts = triangle_points(p[:, 0], p[:, 1], p[:, 2])
        vals = f(pts.reshape(-1, 2)).reshape(-1, 7)
        areas = mesh.areas()
        # int_T f phi_i ~ |T| sum_q w_q f(x_q) lambda_i(x_q)
        contrib = areas[:, None] * (vals * TRI_WEIGHTS[None, :]) @ TRI_BARY
        np.add.at(load, mesh.elements, contrib)
    if g is not None:
        is_n = mesh.boundary_tags == NEUMANN
        if is_n.any():
            edges = mesh.boundary[is_n]
            pa = mesh.coords[edges[:, 0]]
            pb = mesh.coords[edges[:, 1]]
            lengths = np.hypot(*(pb - pa).T)
            pts = pa[:, None, :] + EDGE_POINTS[None, :, None] * (pb - pa)[:, None, :]
            vals = g(pts.reshape(-1, 2)).reshape(-1, len(EDGE_POINTS))
            w = vals * EDGE_WEIGHTS[None, :]
            c0 = lengths * (w * (1.0 - EDGE_POINTS)[None, :]).sum(axis=1)
            c1 = lengths * (w * EDGE_POINTS[None, :]).sum(axis=1)
            np.add.at(load, edges[:, 0], c0)
            np.add.at(load, edges[:, 1], c1)
    return load


def h_norm(v: FEFunction) -> float:
    """Energy norm ||grad v||_L2 computed elementwise with exact P1 gradients."""
    return h_norm_of(v.space.mesh, v.coefficients)


def h_norm_of(mesh: Triangulation, coefficients: np.ndarray) -> float:
    g = element_gradients(mesh, coefficients)
    return float(np.sqrt((mesh.areas() * (g ** 2).sum(axis=1)).sum()))


def prolongate(v: FEFunction, fine: FESpace) -> FEFunction:
    """Represent a coarse function on a nested finer space.

    New vertices take the linear interpolation along their bisected edge, so
    the function is unchanged pointwise.  Requires the fine mesh to descend
    from the coarse one through refine calls (the coarse vertex list is then
    a prefix of the fine one).
    """
    coarse_mesh = v.space.mesh
    fine_mesh = fine.mesh
    nc = coarse_mesh.n_vertices
    nf = fine_mesh.n_vertices
    if (nf < nc
            or not np.array_equal(fine_mesh.coords[:nc], coarse_mesh.coords)
            or not is_refinement_of(fine_mesh, coarse_mesh)):
        raise MeshError("target space is not a nested refinement of the source space")
    out = np.empty(nf)
    out[:nc] = v.coefficients
    parents = fine_mesh.vertex_parents
    for k in range(nc, nf):
        out[k] = 0.5 * (out[parents[k, 0]] + out[parents[k, 1]])
    return FEFunction(fine, out)


class RieszSolver:
    """Solver for the H-inner-product (Riesz) system on the free dofs.

    ``direct`` uses a sparse LU factorization computed once; ``cg`` runs
    conjugate gradients to a relative residual of ``tol``.  Both are
    deterministic.
    """

    def __init__(self, space: FESpace, method: str = "direct", tol: float = 1e-12):
        if method not in ("direct", "cg"):
            raise ConfigurationError(f"unknown linear solver {method!r}")
        self.space = space
        self.method = method
        self.tol = tol
        self.matrix = assemble_riesz(space)
        self._lu = None
        if method == "direct" and space.n_dofs > 0:
            self._lu = spla.splu(self.matrix.tocsc())

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if self.space.n_dofs == 0:
            return np.zeros(0)
        if self.method == "direct":
            return self._lu.solve(rhs)
        norm = np.linalg.norm(rhs)
        if norm == 0.0:
            return np.zeros_like(rhs)
        try:
            x, info = spla.cg(self.matrix, rhs, rtol=self.tol, atol=0.0)
        except TypeError:  # older scipy spells it tol
            x, info = spla.cg(self.matrix, rhs, tol=self.tol, atol=0.0)
        if info != 0:
            residual = np.linalg.norm(self.matrix @ x - rhs) / norm
            raise RuntimeError(f"cg failed to reach tolerance {self.tol:g}; relative residual {residual:.3e}")
        return x

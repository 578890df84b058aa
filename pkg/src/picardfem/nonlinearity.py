"""Quasilinear diffusion operators with strongly monotone structure.

The flux coefficient is a scalar function mu(x, t) of position and the
squared gradient modulus t = |grad u|^2.  Monotonicity and Lipschitz
continuity of the induced operator are governed by the bounds

    gamma1  <= mu(x, t)                      <= gamma2,
    gtilde1 <= mu(x, t) + 2 t d/dt mu(x, t)  <= gtilde2,

which give the monotonicity constant alpha = gtilde1 and the Lipschitz
constant L = gtilde2 of the operator, hence the fixed-point contraction
factor q = sqrt(1 - alpha^2 / L^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .quadrature import TRI_WEIGHTS, triangle_points
from .space import FESpace, FEFunction, assemble_load, element_gradients


@dataclass(frozen=True)
class Nonlinearity:
    """Scalar coefficient mu(x, t) with derivative, primitive, and bounds.

    All three callables take ``(x, t)`` where ``x`` is an (m, 2) point array
    (ignored and possibly None when ``x_dependent`` is False) and ``t`` an
    (m,) array of nonnegative values.  ``mu_primitive(x, t)`` is
    int_0^t mu(x, s) ds.
    """
    mu: Callable
    dmu_dt: Callable
    mu_primitive: Callable
    gamma1: float
    gamma2: float
    gtilde1: float
    gtilde2: float
    x_dependent: bool = False
    grad_x_mu: Optional[Callable] = None   # (x, t) -> (m, 2), for x-dependent mu
    lip_x: Optional[float] = None
    lip_x_t: Optional[float] = None


@dataclass(frozen=True)
class MonotoneProblem:
    """Operator data: nonlinearity plus volume source f, Neumann flux g.

    ``dirichlet`` optionally prescribes boundary values, imposed by nodal
    interpolation (None means homogeneous).
    """
    nonlinearity: Nonlinearity
    f: Optional[Callable] = None
    g: Optional[Callable] = None
    dirichlet: Optional[Callable] = None

    @property
    def alpha(self) -> float:
        return self.nonlinearity.gtilde1

    @property
    def lip(self) -> float:
        return self.nonlinearity.gtilde2

    @property
    def q(self) -> float:
        return float(np.sqrt(1.0 - (self.alpha / self.lip) ** 2))

    @property
    def step_factor(self) -> float:
        return self.alpha / self.lip ** 2


def builtin_known_solution() -> Nonlinearity:
    """mu(t) = 2 + 1/sqrt(1+t); alpha = 2, L = 3."""
    def mu(x, t):
        return 2.0 + 1.0 / np.sqrt(1.0 + t)

    def dmu(x, t):
        return -0.5 * (1.0 + t) ** -1.5

    def primitive(x, t):
        return 2.0 * t + 2.0 * (np.sqrt(1.0 + t) - 1.0)

    return Nonlinearity(mu=mu, dmu_dt=dmu, mu_primitive=primitive,
                        gamma1=2.0, gamma2=3.0, gtilde1=2.0, gtilde2=3.0)


def builtin_arctan() -> Nonlinearity:
    """mu(t) = 1 + arctan(t); alpha = 1, L = 1 + sqrt(3)/2 + pi/3."""
    def mu(x, t):
        return 1.0 + np.arctan(t)

    def dmu(x, t):
        return 1.0 / (1.0 + t * t)

    def primitive(x, t):
        return t + t * np.arctan(t) - 0.5 * np.log1p(t * t)

    lip = 1.0 + np.sqrt(3.0) / 2.0 + np.pi / 3.0
    return Nonlinearity(mu=mu, dmu_dt=dmu, mu_primitive=primitive,
                        gamma1=1.0, gamma2=1.0 + np.pi / 2.0, gtilde1=1.0, gtilde2=lip)


_BUILTINS = {"known-solution": builtin_known_solution, "arctan": builtin_arctan}


def nonlinearity_by_name(name: str) -> Nonlinearity:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown nonlinearity {name!r}; choose from {sorted(_BUILTINS)}") from None


def numeric_primitive(mu: Callable) -> Callable:
    """Primitive of mu in t by adaptive quadrature, for nonlinearities without one."""
    def primitive(x, t):
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        out = np.empty_like(t)
        for i, ti in enumerate(t):
            xi = None if x is None else x[i:i + 1]
            out[i] = quad(lambda s: float(mu(xi, np.array([s]))[0]), 0.0, ti,
                          epsabs=1e-12, epsrel=1e-12)[0]
        return out
    return primitive


def _element_flux_data(problem: MonotoneProblem, v: FEFunction):
    """Per-element gradient, squared modulus, and mu value of a P1 function."""
    mesh = v.space.mesh
    grads = element_gradients(mesh, v.coefficients)
    t = (grads ** 2).sum(axis=1)
    assert (t >= 0.0).all()
    nl = problem.nonlinearity
    if nl.x_dependent:
        # elementwise midpoint evaluation keeps the flux constant per element
        centroids = mesh.coords[mesh.elements].mean(axis=1)
        mu = nl.mu(centroids, t)
    else:
        mu = nl.mu(None, t)
    return grads, t, mu


def apply_operator_full(problem: MonotoneProblem, v: FEFunction) -> np.ndarray:
    """Vertex-indexed vector of <A v, phi_i> for all hat functions phi_i.

    For P1 functions and x-independent mu the flux is constant per element
    and the elementwise integral is exact.
    """
    mesh = v.space.mesh
    grads, _, mu = _element_flux_data(problem, v)
    from .space import p1_gradients
    areas, basis_grads = p1_gradients(mesh)
    flux = mu[:, None] * grads
    contrib = areas[:, None] * np.einsum("td,tid->ti", flux, basis_grads)
    out = np.zeros(mesh.n_vertices)
    np.add.at(out, mesh.elements, contrib)
    return out


def apply_operator(problem: MonotoneProblem, v: FEFunction) -> np.ndarray:
    """<A v, phi_i> restricted to the free dofs of v's space."""
    return apply_operator_full(problem, v)[v.space.free]


def residual_vector(problem: MonotoneProblem, space: FESpace, v: FEFunction,
                    load_full: Optional[np.ndarray] = None) -> np.ndarray:
    """<A v - F, phi_i> over free dofs; the load may be passed in precomputed."""
    if load_full is None:
        load_full = assemble_load(space, problem.f, problem.g)
    return apply_operator_full(problem, v)[space.free] - load_full[space.free]


def energy(problem: MonotoneProblem, v: FEFunction,
           load_full: Optional[np.ndarray] = None) -> float:
    """E(v) = 1/2 int M(|grad v|^2) - F(v) with M the primitive of mu.

    Exact for P1 functions and x-independent mu; x-dependent coefficients
    are integrated with the degree-5 rule.
    """
    mesh = v.space.mesh
    nl = problem.nonlinearity
    grads = element_gradients(mesh, v.coefficients)
    t = (grads ** 2).sum(axis=1)
    areas = mesh.areas()
    if nl.x_dependent:
        p = mesh.coords[mesh.elements]
        pts = triangle_points(p[:, 0], p[:, 1], p[:, 2])
        m = pts.shape[1]
        vals = nl.mu_primitive(pts.reshape(-1, 2), np.repeat(t, m)).reshape(-1, m)
        volume = (areas * (vals * TRI_WEIGHTS).sum(axis=1)).sum()
    else:
        volume = (areas * nl.mu_primitive(None, t)).sum()
    if load_full is None:
        load_full = assemble_load(v.space, problem.f, problem.g)
    return float(0.5 * volume - load_full @ v.coefficients)

"""The Z-shaped benchmark domain and its manufactured singular solution.

The domain is the square (-1, 1)^2 with the closed wedge between polar
angles -pi/4 and 0 removed (the triangle (0,0), (1,0), (1,-1)), leaving a
reentrant corner of interior angle 7*pi/4 at the origin.  The associated
singular exponent is beta = 4/7, and u(r, phi) = r^beta cos(beta phi) is
harmonic with vanishing angular derivative on both wedge edges, so those
edges carry homogeneous Neumann data while the outer boundary carries the
trace of u as Dirichlet data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .mesh import DIRICHLET, NEUMANN, Triangulation
from .nonlinearity import (MonotoneProblem, Nonlinearity, builtin_arctan,
                           builtin_known_solution)
from .quadrature import TRI_WEIGHTS, TRI_BARY, subdivided_bary, triangle_points
from .space import FESpace, FEFunction, element_gradients

CORNER_EXPONENT = 4.0 / 7.0
CORNER_ANGLE = 7.0 * np.pi / 4.0

_VERTICES = np.array([
    [-1.0, -1.0], [0.0, -1.0], [1.0, -1.0],
    [-1.0, 0.0], [0.0, 0.0], [1.0, 0.0],
    [-1.0, 1.0], [0.0, 1.0], [1.0, 1.0],
    [0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5], [0.5, -0.5],
])

_ELEMENTS = np.array([
    # NE, NW, SW quarter squares, each split by both diagonals
    [4, 5, 9], [5, 8, 9], [8, 7, 9], [7, 4, 9],
    [4, 7, 10], [7, 6, 10], [6, 3, 10], [3, 4, 10],
    [4, 3, 11], [3, 0, 11], [0, 1, 11], [1, 4, 11],
    # half of the SE quarter, split at the wedge-hypotenuse midpoint
    [4, 1, 12], [12, 1, 2],
])

# counter-clockwise along the boundary; the last three facets are the two
# halves of the wedge hypotenuse and the wedge top edge
_FACETS = np.array([
    [5, 8], [8, 7], [7, 6], [6, 3], [3, 0], [0, 1], [1, 2],
    [2, 12], [12, 4], [4, 5],
])
_WEDGE_FACETS = np.array([7, 8, 9])  # rows of _FACETS on the wedge edges


def build_zshape(neumann_wedge: bool = True) -> Triangulation:
    """Initial 14-element mesh of the Z-shaped domain.

    With ``neumann_wedge`` the two edges meeting at the reentrant corner are
    tagged Neumann and the outer boundary Dirichlet; otherwise the whole
    boundary is Dirichlet.
    """
    tags = np.full(len(_FACETS), DIRICHLET)
    if neumann_wedge:
        tags[_WEDGE_FACETS] = NEUMANN
    return Triangulation.from_arrays(_VERTICES, _ELEMENTS, _FACETS, tags)


def _polar(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = points[..., 0]
    y = points[..., 1]
    r = np.hypot(x, y)
    phi = np.arctan2(y, x)
    phi = np.where(phi < 0.0, phi + 2.0 * np.pi, phi)
    return r, phi


def exact_solution_known(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values and gradients of r^beta cos(beta phi).

    The polar angle is measured from the wedge top edge counterclockwise
    through the domain, phi in [0, 7*pi/4].  At the origin the gradient is
    unbounded and reported as inf.
    """
    points = np.asarray(points, dtype=np.float64)
    r, phi = _polar(points)
    beta = CORNER_EXPONENT
    vals = r ** beta * np.cos(beta * phi)
    grads = np.empty(points.shape)
    singular = r == 0.0
    rs = np.where(singular, 1.0, r)
    ur = beta * rs ** (beta - 1.0) * np.cos(beta * phi)
    ut = -beta * rs ** (beta - 1.0) * np.sin(beta * phi)
    grads[..., 0] = ur * np.cos(phi) - ut * np.sin(phi)
    grads[..., 1] = ur * np.sin(phi) + ut * np.cos(phi)
    grads[singular] = np.inf
    return vals, grads


def exact_values(points: np.ndarray) -> np.ndarray:
    return exact_solution_known(points)[0]


def manufactured_data(nonlinearity: Nonlinearity, u_star: Optional[Callable] = None):
    """Volume source and Neumann flux that make the singular solution exact.

    Since the solution is harmonic and |grad u|^2 = beta^2 r^(2 beta - 2)
    depends on r only, the chain rule collapses the flux divergence to a
    purely radial term:

        f = -d/dt mu(t(r)) * t'(r) * du/dr,   t(r) = beta^2 r^(2 beta - 2).

    Both wedge edges have vanishing normal derivative, so g = 0 there.
    """
    if u_star is not None and u_star is not exact_solution_known:
        raise ValueError("manufactured data is specific to the built-in singular solution")
    beta = CORNER_EXPONENT

    def f(points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        r, phi = _polar(points)
        if (r == 0.0).any():
            raise ValueError("volume source is singular at the origin")
        t = beta ** 2 * r ** (2.0 * beta - 2.0)
        tprime = beta ** 2 * (2.0 * beta - 2.0) * r ** (2.0 * beta - 3.0)
        ur = beta * r ** (beta - 1.0) * np.cos(beta * phi)
        return -nonlinearity.dmu_dt(points, t) * tprime * ur

    def g(points: np.ndarray) -> np.ndarray:
        return np.zeros(np.asarray(points).shape[0])

    return f, g


@dataclass(frozen=True)
class ProblemSpec:
    """A complete benchmark instance: geometry, data, and optional exact solution."""
    name: str
    mesh: Triangulation
    problem: MonotoneProblem
    nonlinearity_name: str
    exact: Optional[Callable] = None    # points -> (values, gradients)

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    def error_fn(self) -> Optional[Callable]:
        if self.exact is None:
            return None
        return lambda space, u: h1_error_known(space, u)


def known_solution_spec() -> ProblemSpec:
    nl = builtin_known_solution()
    f, g = manufactured_data(nl)
    problem = MonotoneProblem(nonlinearity=nl, f=f, g=g, dirichlet=exact_values)
    return ProblemSpec(name="zshape-known", mesh=build_zshape(neumann_wedge=True),
                       problem=problem, nonlinearity_name="known-solution",
                       exact=exact_solution_known)


def unknown_solution_spec() -> ProblemSpec:
    nl = builtin_arctan()

    def f(points: np.ndarray) -> np.ndarray:
        return np.ones(np.asarray(points).shape[0])

    problem = MonotoneProblem(nonlinearity=nl, f=f, g=None, dirichlet=None)
    return ProblemSpec(name="zshape-unknown", mesh=build_zshape(neumann_wedge=False),
                       problem=problem, nonlinearity_name="arctan", exact=None)


_SPECS = {"zshape-known": known_solution_spec, "zshape-unknown": unknown_solution_spec}


def problem_spec(name: str) -> ProblemSpec:
    try:
        return _SPECS[name]()
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(_SPECS)}") from None


def h1_error_known(space: FESpace, u: FEFunction) -> float:
    """||grad u_exact - grad u||_L2 by elementwise quadrature.

    Elements touching the origin see the r^(-3/7) gradient singularity and
    use a 3-level composite subdivision of the degree-5 rule.
    """
    mesh = space.mesh
    grads_u = element_gradients(mesh, u.coefficients)
    areas = mesh.areas()
    p = mesh.coords[mesh.elements]
    at_origin = (p == 0.0).all(axis=2).any(axis=1)

    def accumulate(idx, bary, weights):
        pts = np.einsum("qk,tkd->tqd", bary, p[idx])
        _, ge = exact_solution_known(pts.reshape(-1, 2))
        diff = ge.reshape(len(idx), -1, 2) - grads_u[idx][:, None, :]
        local = ((diff ** 2).sum(axis=2) * weights).sum(axis=1)
        return float((areas[idx] * local).sum())

    total = 0.0
    regular = np.nonzero(~at_origin)[0]
    if len(regular):
        total += accumulate(regular, TRI_BARY, TRI_WEIGHTS)
    near = np.nonzero(at_origin)[0]
    if len(near):
        bary, weights = subdivided_bary(3)
        total += accumulate(near, bary, weights)
    return float(np.sqrt(total))

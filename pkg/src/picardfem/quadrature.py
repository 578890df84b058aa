"""Fixed quadrature rules: degree-5 on triangles, 3-point Gauss on edges."""

from __future__ import annotations

import numpy as np

# Symmetric 7-point degree-5 rule in barycentric coordinates; weights sum to 1.
_S15 = np.sqrt(15.0)
_A1 = (6.0 - _S15) / 21.0
_A2 = (6.0 + _S15) / 21.0
_W0 = 9.0 / 40.0
_W1 = (155.0 - _S15) / 1200.0
_W2 = (155.0 + _S15) / 1200.0

TRI_BARY = np.array([
    [1 / 3, 1 / 3, 1 / 3],
    [_A1, _A1, 1 - 2 * _A1],
    [_A1, 1 - 2 * _A1, _A1],
    [1 - 2 * _A1, _A1, _A1],
    [_A2, _A2, 1 - 2 * _A2],
    [_A2, 1 - 2 * _A2, _A2],
    [1 - 2 * _A2, _A2, _A2],
])
TRI_WEIGHTS = np.array([_W0, _W1, _W1, _W1, _W2, _W2, _W2])

# 3-point Gauss-Legendre on [0, 1]; weights sum to 1.
_G = np.sqrt(3.0 / 5.0)
EDGE_POINTS = 0.5 * (1.0 + np.array([-_G, 0.0, _G]))
EDGE_WEIGHTS = np.array([5.0, 8.0, 5.0]) / 18.0


def triangle_points(p0: np.ndarray, p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """Quadrature points for a batch of triangles.

    Inputs are (n, 2) vertex arrays; the result has shape (n, 7, 2).
    """
    lam = TRI_BARY  # (7, 3)
    return (lam[None, :, 0, None] * p0[:, None, :]
            + lam[None, :, 1, None] * p1[:, None, :]
            + lam[None, :, 2, None] * p2[:, None, :])


def integrate_over_elements(mesh, fn) -> np.ndarray:
    """Per-element integral of a pointwise function via the degree-5 rule.

    ``fn`` maps an (m, 2) point array to (m,) values.
    """
    p = mesh.coords[mesh.elements]
    pts = triangle_points(p[:, 0], p[:, 1], p[:, 2])
    vals = fn(pts.reshape(-1, 2)).reshape(pts.shape[0], 7)
    return mesh.areas() * (vals * TRI_WEIGHTS).sum(axis=1)


def subdivided_bary(levels: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule: uniform 4-way triangle subdivision applied ``levels`` times.

    Returns barycentric nodes (k, 3) and weights (k,) summing to 1.
    """
    corners = [np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])]
    for _ in range(levels):
        nxt = []
        for c in corners:
            m01 = 0.5 * (c[0] + c[1])
            m12 = 0.5 * (c[1] + c[2])
            m20 = 0.5 * (c[2] + c[0])
            nxt.append(np.array([c[0], m01, m20]))
            nxt.append(np.array([m01, c[1], m12]))
            nxt.append(np.array([m20, m12, c[2]]))
            nxt.append(np.array([m01, m12, m20]))
        corners = nxt
    nodes = []
    weights = []
    frac = 1.0 / len(corners)
    for c in corners:
        nodes.append(TRI_BARY @ c)
        weights.append(TRI_WEIGHTS * frac)
    return np.vstack(nodes), np.concatenate(weights)

"""Conforming 2D triangular meshes with newest-vertex bisection.

Element convention: each element stores an ordered vertex triple
``(v0, v1, v2)`` where ``v2`` is the newest vertex and the edge
``(v0, v1)`` is the refinement edge.  Bisecting an element inserts the
midpoint ``m`` of ``(v0, v1)`` and produces the children ``(v2, v0, m)``
and ``(v1, v2, m)``; both inherit positive orientation and have ``m`` as
their newest vertex.

Every mesh remembers, per element, its ancestor in the initial mesh and
the sequence of left/right bisection choices (a path in the binary
bisection tree).  Overlays, refinement queries, and element identity
across meshes all operate on these trees.  Meshes are immutable after
construction; refinement returns a new mesh.
"""

from __future__ import annotations

import numpy as np

DIRICHLET = 0
NEUMANN = 1

_TAG_TO_CHAR = {DIRICHLET: "D", NEUMANN: "N"}
_CHAR_TO_TAG = {"D": DIRICHLET, "N": NEUMANN}

_MAX_DEPTH = 63  # path bits live in a uint64


class MeshError(ValueError):
    """Invalid mesh topology or geometry, or an incompatible mesh pair."""


def _signed_areas(coords: np.ndarray, elements: np.ndarray) -> np.ndarray:
    p0 = coords[elements[:, 0]]
    p1 = coords[elements[:, 1]]
    p2 = coords[elements[:, 2]]
    return 0.5 * ((p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1])
                  - (p1[:, 1] - p0[:, 1]) * (p2[:, 0] - p0[:, 0]))


class EdgeTable:
    """Unique-edge connectivity of a triangulation.

    Edges are keyed by their sorted vertex pair.  ``elem_edges[i, k]`` is
    the edge index of local edge ``k`` of element ``i`` with the local
    order (v0,v1), (v1,v2), (v2,v0); column 0 is the refinement edge.
    """

    def __init__(self, mesh: "Triangulation"):
        elems = mesh.elements
        ne = elems.shape[0]
        local = np.stack([elems[:, [0, 1]], elems[:, [1, 2]], elems[:, [2, 0]]], axis=1)
        flat = local.reshape(-1, 2)
        lo = flat.min(axis=1).astype(np.int64)
        hi = flat.max(axis=1).astype(np.int64)
        keys = lo * np.int64(mesh.n_vertices) + hi
        self.edge_keys, inverse = np.unique(keys, return_inverse=True)
        self.n_edges = len(self.edge_keys)
        self.elem_edges = inverse.reshape(ne, 3)
        self.edge_vertices = np.column_stack(
            [self.edge_keys // mesh.n_vertices, self.edge_keys % mesh.n_vertices]
        ).astype(elems.dtype)

        counts = np.bincount(inverse, minlength=self.n_edges)
        if counts.max(initial=0) > 2:
            raise MeshError("non-manifold edge: shared by more than two elements")
        order = np.argsort(inverse, kind="stable")
        se = inverse[order]
        owner = order // 3
        first = np.ones(len(se), dtype=bool)
        first[1:] = se[1:] != se[:-1]
        self.edge_elems = -np.ones((self.n_edges, 2), dtype=np.int64)
        self.edge_elems[se[first], 0] = owner[first]
        self.edge_elems[se[~first], 1] = owner[~first]

        # Ordered endpoints as traversed (CCW) by the first adjacent element,
        # so the rotated direction is that element's outward normal.
        self.edge_oriented = np.empty_like(self.edge_vertices)
        slot_of_first = (order % 3)[first]
        eidx = se[first]
        own = owner[first]
        self.edge_oriented[eidx] = local[own, slot_of_first]

        pa = mesh.coords[self.edge_vertices[:, 0]]
        pb = mesh.coords[self.edge_vertices[:, 1]]
        self.lengths = np.hypot(pb[:, 0] - pa[:, 0], pb[:, 1] - pa[:, 1])
        self.is_boundary = self.edge_elems[:, 1] < 0

        # Match boundary facets to edges.
        bnd = mesh.boundary
        self.facet_edge = np.empty(len(bnd), dtype=np.int64)
        if len(bnd):
            blo = bnd.min(axis=1).astype(np.int64)
            bhi = bnd.max(axis=1).astype(np.int64)
            bkeys = blo * np.int64(mesh.n_vertices) + bhi
            pos = np.searchsorted(self.edge_keys, bkeys)
            ok = (pos < self.n_edges) & (self.edge_keys[np.minimum(pos, self.n_edges - 1)] == bkeys)
            if not ok.all():
                raise MeshError("boundary facet does not match any mesh edge")
            self.facet_edge = pos
        self.edge_facet = -np.ones(self.n_edges, dtype=np.int64)
        self.edge_facet[self.facet_edge] = np.arange(len(bnd))


class Triangulation:
    """A conforming triangulation with NVB ancestry data.

    Parameters are stored as given (arrays are made read-only); use
    :func:`Triangulation.from_arrays` to build an initial mesh from raw
    geometry.
    """

    def __init__(self, coords, elements, generation, boundary, boundary_tags,
                 root, path_depth, path_bits, vertex_parents,
                 root_elements, root_boundary, root_boundary_tags, n_root_vertices,
                 root_signature):
        self.coords = np.ascontiguousarray(coords, dtype=np.float64)
        self.elements = np.ascontiguousarray(elements, dtype=np.int64)
        self.generation = np.ascontiguousarray(generation, dtype=np.int64)
        self.boundary = np.ascontiguousarray(boundary, dtype=np.int64).reshape(-1, 2)
        self.boundary_tags = np.ascontiguousarray(boundary_tags, dtype=np.int64)
        self.root = np.ascontiguousarray(root, dtype=np.int64)
        self.path_depth = np.ascontiguousarray(path_depth, dtype=np.int64)
        self.path_bits = np.ascontiguousarray(path_bits, dtype=np.uint64)
        self.vertex_parents = np.ascontiguousarray(vertex_parents, dtype=np.int64).reshape(-1, 2)
        self.root_elements = np.ascontiguousarray(root_elements, dtype=np.int64)
        self.root_boundary = np.ascontiguousarray(root_boundary, dtype=np.int64).reshape(-1, 2)
        self.root_boundary_tags = np.ascontiguousarray(root_boundary_tags, dtype=np.int64)
        self.n_root_vertices = int(n_root_vertices)
        self.root_signature = root_signature
        self._edge_table = None
        for arr in (self.coords, self.elements, self.generation, self.boundary,
                    self.boundary_tags, self.root, self.path_depth, self.path_bits,
                    self.vertex_parents):
            arr.setflags(write=False)

    # -- basic queries ----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self.coords.shape[0]

    @property
    def n_elements(self) -> int:
        return self.elements.shape[0]

    def areas(self) -> np.ndarray:
        return _signed_areas(self.coords, self.elements)

    def element_sizes(self) -> np.ndarray:
        """h_T = |T|^(1/2) for every element."""
        return np.sqrt(self.areas())

    def edge_table(self) -> EdgeTable:
        if self._edge_table is None:
            self._edge_table = EdgeTable(self)
        return self._edge_table

    def min_angle(self) -> float:
        p = self.coords[self.elements]  # (ne, 3, 2)
        angles = []
        for k in range(3):
            a = p[:, (k + 1) % 3] - p[:, k]
            b = p[:, (k + 2) % 3] - p[:, k]
            cosang = (a * b).sum(axis=1) / (np.hypot(a[:, 0], a[:, 1]) * np.hypot(b[:, 0], b[:, 1]))
            angles.append(np.arccos(np.clip(cosang, -1.0, 1.0)))
        return float(np.min(angles))

    def element_key(self, i: int) -> tuple:
        """Sorted vertex-coordinate triple; equal keys mean equal elements."""
        pts = [tuple(self.coords[v]) for v in self.elements[i]]
        return tuple(sorted(pts))

    def validate(self) -> None:
        """Raise MeshError unless the mesh is conforming and well-formed."""
        if not np.isfinite(self.coords).all():
            raise MeshError("non-finite vertex coordinates")
        if self.elements.min(initial=0) < 0 or self.elements.max(initial=-1) >= self.n_vertices:
            raise MeshError("element vertex id out of range")
        e = self.elements
        if ((e[:, 0] == e[:, 1]) | (e[:, 1] == e[:, 2]) | (e[:, 0] == e[:, 2])).any():
            raise MeshError("element with repeated vertex")
        if (self.areas() <= 0).any():
            raise MeshError("element with non-positive area")
        et = self.edge_table()
        n_incident = (self.edge_elems_counts(et))
        boundary_edges = n_incident == 1
        has_facet = et.edge_facet >= 0
        if not np.array_equal(boundary_edges, has_facet):
            raise MeshError("boundary facets do not coincide with boundary edges")

    def edge_elems_counts(self, et: EdgeTable | None = None) -> np.ndarray:
        et = et or self.edge_table()
        return (et.edge_elems >= 0).sum(axis=1)

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_arrays(coords, elements, boundary, boundary_tags,
                    assign_refinement_edges: bool = True) -> "Triangulation":
        """Build an initial mesh (a refinement-forest root).

        With ``assign_refinement_edges`` the vertex triples are reordered so
        that the refinement edge of each element is its longest edge (ties
        broken by the smallest opposite-vertex id) and orientation is made
        positive.  Otherwise the given order is kept verbatim and must
        already be positively oriented.
        """
        coords = np.ascontiguousarray(coords, dtype=np.float64)
        elements = np.ascontiguousarray(elements, dtype=np.int64)
        boundary = np.ascontiguousarray(boundary, dtype=np.int64).reshape(-1, 2)
        boundary_tags = np.ascontiguousarray(boundary_tags, dtype=np.int64)
        if len(boundary_tags) != len(boundary):
            raise MeshError("one tag per boundary facet required")

        if assign_refinement_edges:
            p = coords[elements]
            # squared length of the edge opposite each local vertex
            d = p[:, [2, 0, 1]] - p[:, [1, 2, 0]]
            sq = (d ** 2).sum(axis=2)
            is_max = sq == sq.max(axis=1, keepdims=True)
            vid_masked = np.where(is_max, elements, np.iinfo(np.int64).max)
            k = np.argmin(vid_masked, axis=1)
            rows = np.arange(len(elements))
            rotated = np.column_stack([
                elements[rows, (k + 1) % 3],
                elements[rows, (k + 2) % 3],
                elements[rows, k],
            ])
            elements = rotated
        areas = _signed_areas(coords, elements)
        flip = areas < 0
        if flip.any():
            elements = elements.copy()
            elements[flip] = elements[flip][:, [1, 0, 2]]
        if (_signed_areas(coords, elements) <= 0).any():
            raise MeshError("degenerate element in input")

        ne = elements.shape[0]
        signature = (coords.tobytes(), elements.tobytes(),
                     boundary.tobytes(), boundary_tags.tobytes())
        mesh = Triangulation(
            coords=coords,
            elements=elements,
            generation=np.zeros(ne, dtype=np.int64),
            boundary=boundary,
            boundary_tags=boundary_tags,
            root=np.arange(ne, dtype=np.int64),
            path_depth=np.zeros(ne, dtype=np.int64),
            path_bits=np.zeros(ne, dtype=np.uint64),
            vertex_parents=-np.ones((coords.shape[0], 2), dtype=np.int64),
            root_elements=elements,
            root_boundary=boundary,
            root_boundary_tags=boundary_tags,
            n_root_vertices=coords.shape[0],
            root_signature=hash(signature),
        )
        mesh.validate()
        return mesh


def element_size(mesh: Triangulation, element: int) -> float:
    """h_T = |T|^(1/2) of a single element."""
    if not 0 <= element < mesh.n_elements:
        raise MeshError(f"invalid element id {element}")
    return float(mesh.element_sizes()[element])


# -- refinement -----------------------------------------------------------

def _child_rows(a, b, c, m):
    """Children of (a, b, c) after bisecting (a, b) at m: left, right."""
    return (c, a, m), (b, c, m)


def refine(mesh: Triangulation, marked) -> Triangulation:
    """Coarsest conforming NVB refinement in which all marked elements split.

    Closure marks the refinement edge of every element that touches an
    already-marked edge, iterated to a fixpoint; each element is then
    bisected once for each of its marked edges (at most three times, hence
    at most four children).
    """
    marked_list = list(marked)
    if not marked_list:
        return mesh
    marked = np.unique(np.asarray(marked_list, dtype=np.int64))
    if marked.min() < 0 or marked.max() >= mesh.n_elements:
        raise MeshError("marked set contains an invalid element id")

    et = mesh.edge_table()
    edge_marked = np.zeros(et.n_edges, dtype=bool)
    edge_marked[et.elem_edges[marked, 0]] = True
    while True:
        touched = edge_marked[et.elem_edges].any(axis=1)
        need = touched & ~edge_marked[et.elem_edges[:, 0]]
        if not need.any():
            break
        edge_marked[et.elem_edges[need, 0]] = True

    # one new vertex per marked edge, in ascending edge order
    marked_edges = np.nonzero(edge_marked)[0]
    nv0 = mesh.n_vertices
    edge_mid = -np.ones(et.n_edges, dtype=np.int64)
    edge_mid[marked_edges] = nv0 + np.arange(len(marked_edges))
    ev = et.edge_vertices[marked_edges]
    mid_coords = 0.5 * (mesh.coords[ev[:, 0]] + mesh.coords[ev[:, 1]])
    new_coords = np.vstack([mesh.coords, mid_coords])
    new_parents = np.vstack([mesh.vertex_parents, ev])

    if (mesh.path_depth.max(initial=0) + 2) > _MAX_DEPTH:
        raise MeshError("bisection depth exceeds path encoding capacity")

    refined = np.nonzero(edge_marked[et.elem_edges].any(axis=1))[0]
    keep = np.ones(mesh.n_elements, dtype=bool)
    keep[refined] = False

    rows = []      # (a, b, c, gen, root, depth, bits, parent_order)
    elems = mesh.elements
    gens = mesh.generation
    roots = mesh.root
    depths = mesh.path_depth
    bits_arr = mesh.path_bits
    for i in refined:
        a, b, c = (int(v) for v in elems[i])
        e0, e1, e2 = (int(x) for x in et.elem_edges[i])
        m0 = edge_mid[e0]
        g = int(gens[i])
        r = int(roots[i])
        d = int(depths[i])
        bbits = int(bits_arr[i])
        left, right = _child_rows(a, b, c, m0)
        lbits, rbits = bbits, bbits | (1 << d)
        m1 = edge_mid[e1]
        m2 = edge_mid[e2]
        if m2 >= 0:
            la, lb, lc = left
            ll, lr = _child_rows(la, lb, lc, m2)
            rows.append((*ll, g + 2, r, d + 2, lbits, i))
            rows.append((*lr, g + 2, r, d + 2, lbits | (1 << (d + 1)), i))
        else:
            rows.append((*left, g + 1, r, d + 1, lbits, i))
        if m1 >= 0:
            ra, rb, rc = right
            rl, rr = _child_rows(ra, rb, rc, m1)
            rows.append((*rl, g + 2, r, d + 2, rbits, i))
            rows.append((*rr, g + 2, r, d + 2, rbits | (1 << (d + 1)), i))
        else:
            rows.append((*right, g + 1, r, d + 1, rbits, i))

    child = np.array(rows, dtype=np.int64)
    order_key = np.concatenate([np.nonzero(keep)[0], child[:, 7]])
    perm = np.argsort(order_key, kind="stable")

    new_elements = np.vstack([elems[keep], child[:, 0:3]])[perm]
    new_generation = np.concatenate([gens[keep], child[:, 3]])[perm]
    new_root = np.concatenate([roots[keep], child[:, 4]])[perm]
    new_depth = np.concatenate([depths[keep], child[:, 5]])[perm]
    new_bits = np.concatenate([bits_arr[keep].astype(np.int64), child[:, 6]])[perm].astype(np.uint64)

    # split boundary facets whose edge was bisected
    facets = []
    tags = []
    for j, (u, w) in enumerate(mesh.boundary):
        eid = et.facet_edge[j]
        t = int(mesh.boundary_tags[j])
        m = edge_mid[eid]
        if m < 0:
            facets.append((u, w))
            tags.append(t)
        else:
            facets.append((u, m))
            facets.append((m, w))
            tags.extend((t, t))

    return Triangulation(
        coords=new_coords,
        elements=new_elements,
        generation=new_generation,
        boundary=np.array(facets, dtype=np.int64).reshape(-1, 2),
        boundary_tags=np.array(tags, dtype=np.int64),
        root=new_root,
        path_depth=new_depth,
        path_bits=new_bits,
        vertex_parents=new_parents,
        root_elements=mesh.root_elements,
        root_boundary=mesh.root_boundary,
        root_boundary_tags=mesh.root_boundary_tags,
        n_root_vertices=mesh.n_root_vertices,
        root_signature=mesh.root_signature,
    )


def uniform_refine(mesh: Triangulation, times: int = 1) -> Triangulation:
    for _ in range(times):
        mesh = refine(mesh, range(mesh.n_elements))
    return mesh


# -- bisection-tree queries ------------------------------------------------

def _leaf_sets(mesh: Triangulation) -> dict:
    """Per-root set of (depth, bits) leaf paths."""
    out: dict = {}
    for r, d, b in zip(mesh.root, mesh.path_depth, mesh.path_bits):
        out.setdefault(int(r), set()).add((int(d), int(b)))
    return out


def _has_ancestor_in(depth: int, bits: int, leaves: set) -> bool:
    for d in range(depth + 1):
        if (d, bits & ((1 << d) - 1)) in leaves:
            return True
    return False


def is_refinement_of(fine: Triangulation, coarse: Triangulation) -> bool:
    """True iff every element of ``coarse`` is a union of ``fine`` elements."""
    if fine.root_signature != coarse.root_signature:
        return False
    coarse_leaves = _leaf_sets(coarse)
    for r, d, b in zip(fine.root, fine.path_depth, fine.path_bits):
        if not _has_ancestor_in(int(d), int(b), coarse_leaves.get(int(r), set())):
            return False
    return True


def common_elements(a: Triangulation, b: Triangulation) -> set:
    """Ids of elements of ``a`` also present in ``b``.

    Elements are equal iff their sorted vertex-coordinate triples are equal
    (coordinates are never mutated, so exact comparison is safe).
    """
    keys_b = {b.element_key(j) for j in range(b.n_elements)}
    return {i for i in range(a.n_elements) if a.element_key(i) in keys_b}


def overlay(a: Triangulation, b: Triangulation) -> Triangulation:
    """Coarsest common refinement of two meshes over the same initial mesh.

    Implemented as the per-root union of the two bisection trees: a union
    leaf is a leaf of one input that no leaf of the other strictly refines.
    The result's vertex list starts with all vertices of ``a``, so functions
    on ``a`` can be prolongated onto the overlay.
    """
    if a.root_signature != b.root_signature:
        raise MeshError("overlay requires meshes refined from the same initial mesh")
    leaves_a = _leaf_sets(a)
    leaves_b = _leaf_sets(b)

    def internal_nodes(leaves: set) -> set:
        nodes = set()
        for d, bits in leaves:
            for k in range(d):
                nodes.add((k, bits & ((1 << k) - 1)))
        return nodes

    union_leaves: dict = {}
    n_roots = len(a.root_elements)
    for r in range(n_roots):
        la = leaves_a.get(r, set())
        lb = leaves_b.get(r, set())
        ia = internal_nodes(la)
        ib = internal_nodes(lb)
        union_leaves[r] = {p for p in la if p not in ib} | {p for p in lb if p not in ia}

    vid = {}
    coords_list = []
    parents_list = []
    for i, xy in enumerate(a.coords):
        key = (float(xy[0]), float(xy[1]))
        vid[key] = i
        coords_list.append(key)
        parents_list.append((int(a.vertex_parents[i, 0]), int(a.vertex_parents[i, 1])))

    def vertex_id(x: float, y: float, pa: int, pb: int) -> int:
        key = (x, y)
        j = vid.get(key)
        if j is None:
            j = len(coords_list)
            vid[key] = j
            coords_list.append(key)
            parents_list.append((pa, pb))
        return j

    facet_reg = {}
    for j, (u, w) in enumerate(a.root_boundary):
        facet_reg[(min(u, w), max(u, w))] = (int(u), int(w), int(a.root_boundary_tags[j]))

    elements = []
    generation = []
    roots_out = []
    depth_out = []
    bits_out = []

    def split_facet(u: int, w: int, m: int) -> None:
        key = (min(u, w), max(u, w))
        rec = facet_reg.pop(key, None)
        if rec is None:
            return
        v0, v1, t = rec
        facet_reg[(min(v0, m), max(v0, m))] = (v0, m, t)
        facet_reg[(min(m, v1), max(m, v1))] = (m, v1, t)

    def walk(r: int, va: int, vb: int, vc: int, depth: int, bits: int, leaves: set) -> None:
        if (depth, bits) in leaves:
            elements.append((va, vb, vc))
            generation.append(depth)
            roots_out.append(r)
            depth_out.append(depth)
            bits_out.append(bits)
            return
        xa, ya = coords_list[va]
        xb, yb = coords_list[vb]
        m = vertex_id(0.5 * (xa + xb), 0.5 * (ya + yb), min(va, vb), max(va, vb))
        split_facet(va, vb, m)
        (l0, l1, l2), (r0, r1, r2) = _child_rows(va, vb, vc, m)
        walk(r, l0, l1, l2, depth + 1, bits, leaves)
        walk(r, r0, r1, r2, depth + 1, bits | (1 << depth), leaves)

    for r in range(n_roots):
        va, vb, vc = (int(v) for v in a.root_elements[r])
        walk(r, va, vb, vc, 0, 0, union_leaves[r])

    facets = np.array([(v0, v1) for (v0, v1, _) in facet_reg.values()], dtype=np.int64).reshape(-1, 2)
    tags = np.array([t for (_, _, t) in facet_reg.values()], dtype=np.int64)
    return Triangulation(
        coords=np.array(coords_list, dtype=np.float64),
        elements=np.array(elements, dtype=np.int64),
        generation=np.array(generation, dtype=np.int64),
        boundary=facets,
        boundary_tags=tags,
        root=np.array(roots_out, dtype=np.int64),
        path_depth=np.array(depth_out, dtype=np.int64),
        path_bits=np.array(bits_out, dtype=np.uint64),
        vertex_parents=np.array(parents_list, dtype=np.int64),
        root_elements=a.root_elements,
        root_boundary=a.root_boundary,
        root_boundary_tags=a.root_boundary_tags,
        n_root_vertices=a.n_root_vertices,
        root_signature=a.root_signature,
    )


# -- text format ------------------------------------------------------------

def write_mesh(mesh: Triangulation, path) -> None:
    """Plain-text mesh format; coordinates keep 17 significant digits."""
    lines = [f"vertices {mesh.n_vertices} elements {mesh.n_elements} boundary {len(mesh.boundary)}"]
    for x, y in mesh.coords:
        lines.append(f"{x:.17g} {y:.17g}")
    for v0, v1, v2 in mesh.elements:
        lines.append(f"{v0} {v1} {v2}")
    for (v0, v1), t in zip(mesh.boundary, mesh.boundary_tags):
        lines.append(f"{v0} {v1} {_TAG_TO_CHAR[int(t)]}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_mesh(path) -> Triangulation:
    """Read the text format; the result is a fresh initial mesh.

    The stored vertex-triple order is kept verbatim (it encodes the
    refinement-edge convention), so write/read round-trips are loss-free.
    """
    with open(path) as fh:
        tokens = fh.readline().split()
        if len(tokens) != 6 or tokens[0] != "vertices" or tokens[2] != "elements" or tokens[4] != "boundary":
            raise MeshError("malformed mesh header")
        nv, ne, nb = int(tokens[1]), int(tokens[3]), int(tokens[5])
        coords = np.array([[float(t) for t in fh.readline().split()] for _ in range(nv)])
        elements = np.array([[int(t) for t in fh.readline().split()] for _ in range(ne)], dtype=np.int64)
        facets = []
        tags = []
        for _ in range(nb):
            t0, t1, tc = fh.readline().split()
            facets.append((int(t0), int(t1)))
            tags.append(_CHAR_TO_TAG[tc])
    return Triangulation.from_arrays(coords, elements, np.array(facets, dtype=np.int64),
                                     np.array(tags, dtype=np.int64),
                                     assign_refinement_edges=False)


def unit_square_mesh() -> Triangulation:
    """Unit square split into two triangles by its diagonal, all Dirichlet."""
    coords = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    elements = np.array([[0, 1, 2], [0, 2, 3]])
    boundary = np.array([[0, 1], [1, 2], [2, 3], [3, 0]])
    tags = np.full(4, DIRICHLET)
    return Triangulation.from_arrays(coords, elements, boundary, tags)

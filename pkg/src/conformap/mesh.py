"""Triangle meshes with intrinsic (edge-length) geometry and discrete curvature.

Vertices are integers ``0..n-1``, faces are oriented triples.  All geometry is
carried by edge lengths; vertex positions are only used to derive lengths at
construction time.  Boundary loops follow the face orientation (interior on
the left), so exterior angles of a planar mesh sum to +2*pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse as sp
from scipy.sparse import csgraph

from .errors import (
    AlreadyOpenWithCuts,
    ConeNotReachable,
    DegenerateFace,
    NonManifold,
    NotADisk,
)

# Relative slack on the triangle inequality below which a face is rejected.
TRIANGLE_SLACK = 1e-12


def _canonical_edges(faces: np.ndarray):
    """Unique sorted vertex pairs and the per-face directed-edge lookup.

    Returns ``(edges, face_edges)`` where ``face_edges[f, c]`` is the index of
    the undirected edge from corner ``c`` to corner ``c+1`` of face ``f``.
    """
    directed = np.stack([faces, np.roll(faces, -1, axis=1)], axis=2).reshape(-1, 2)
    edges, inverse = np.unique(np.sort(directed, axis=1), axis=0, return_inverse=True)
    return edges, inverse.reshape(-1, 3)


class SurfaceMesh:
    """Oriented manifold triangle mesh of arbitrary topology.

    Use :meth:`from_positions` or :meth:`from_edge_lengths`; the constructor
    validates manifoldness, orientation consistency, connectivity, and the
    triangle inequality on every face.
    """

    def __init__(self, faces, edge_lengths, n_vertices=None):
        faces = np.ascontiguousarray(faces, dtype=np.int64)
        if faces.ndim != 2 or faces.shape[1] != 3:
            raise NonManifold("faces must be an (F, 3) index array")
        if faces.shape[0] == 0:
            raise NonManifold("mesh has no faces")
        if faces.min() < 0:
            raise NonManifold("negative vertex index")
        n = int(faces.max()) + 1 if n_vertices is None else int(n_vertices)
        if (faces[:, 0] == faces[:, 1]).any() or (faces[:, 1] == faces[:, 2]).any() \
                or (faces[:, 2] == faces[:, 0]).any():
            raise DegenerateFace("face with repeated vertex")

        used = np.zeros(n, dtype=bool)
        used[faces.ravel()] = True
        if not used.all():
            raise NonManifold("isolated vertex not referenced by any face")

        self.faces = faces
        self.n_vertices = n
        self.edges, self.face_edges = _canonical_edges(faces)

        lengths = np.asarray(edge_lengths, dtype=np.float64)
        if lengths.shape != (len(self.edges),):
            raise NonManifold("edge length array does not match edge count")
        if not np.all(np.isfinite(lengths)) or (lengths <= 0).any():
            raise DegenerateFace("non-positive or non-finite edge length")
        self.edge_lengths = lengths

        self._validate_connectivity()
        self._check_triangle_inequality()

    # -- construction ------------------------------------------------------

    @classmethod
    def from_positions(cls, positions, faces):
        """Build from vertex positions; positions are discarded afterwards."""
        positions = np.asarray(positions, dtype=np.float64)
        faces = np.ascontiguousarray(faces, dtype=np.int64)
        edges, _ = _canonical_edges(faces)
        lengths = np.linalg.norm(positions[edges[:, 0]] - positions[edges[:, 1]], axis=1)
        return cls(faces, lengths, n_vertices=len(positions))

    @classmethod
    def from_edge_lengths(cls, faces, lengths, n_vertices=None):
        """Build from a ``{(i, j): length}`` mapping or canonical-order array."""
        faces = np.ascontiguousarray(faces, dtype=np.int64)
        edges, _ = _canonical_edges(faces)
        if isinstance(lengths, dict):
            arr = np.empty(len(edges))
            for e, (i, j) in enumerate(edges):
                key = (int(i), int(j))
                if key in lengths:
                    arr[e] = lengths[key]
                elif (key[1], key[0]) in lengths:
                    arr[e] = lengths[(key[1], key[0])]
                else:
                    raise NonManifold(f"missing length for edge {key}")
        else:
            arr = np.asarray(lengths, dtype=np.float64)
        return cls(faces, arr, n_vertices=n_vertices)

    # -- validation --------------------------------------------------------

    def _validate_connectivity(self):
        faces, n = self.faces, self.n_vertices
        nf = len(faces)
        src = faces.ravel()
        dst = np.roll(faces, -1, axis=1).ravel()
        keys = src.astype(np.int64) * n + dst
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        if len(sorted_keys) > 1 and (sorted_keys[1:] == sorted_keys[:-1]).any():
            raise NonManifold("repeated directed half-edge (inconsistent orientation)")

        twin_keys = dst.astype(np.int64) * n + src
        pos = np.searchsorted(sorted_keys, twin_keys)
        pos = np.clip(pos, 0, len(sorted_keys) - 1)
        has_twin = sorted_keys[pos] == twin_keys
        # half-edge index of the twin, aligned with (face-major, corner-minor) order
        self._twin = np.where(has_twin, order[pos], -1)
        self._he_boundary = ~has_twin

        counts = np.bincount(self.face_edges.ravel(), minlength=len(self.edges))
        if counts.max() > 2:
            raise NonManifold("edge shared by more than two faces")
        self.edge_face_count = counts

        # single umbrella per vertex: corners glued across interior edges must
        # form exactly one component at every vertex
        he = np.arange(3 * nf)
        interior = self._twin >= 0
        rows = he[interior]
        cols = self._twin[interior]
        # gluing across edge (he, twin): corner at src of he ~ corner at dst-side
        # of the twin (they reference the same vertex in the adjacent face)
        c_src = rows                       # corner src(he)
        c_src_twin = _next_corner(cols)    # twin's next corner sits on the same vertex
        c_dst = _next_corner(rows)
        c_dst_twin = cols
        adj = sp.coo_matrix(
            (np.ones(2 * len(rows)),
             (np.concatenate([c_src, c_dst]), np.concatenate([c_src_twin, c_dst_twin]))),
            shape=(3 * nf, 3 * nf),
        )
        # gluing stays within a vertex, so component count == total fan count
        n_comp, _ = csgraph.connected_components(adj, directed=False)
        if n_comp != n:
            raise NonManifold("pinched vertex (multiple umbrellas)")

        vertex_adj = sp.coo_matrix(
            (np.ones(len(self.edges)), (self.edges[:, 0], self.edges[:, 1])), shape=(n, n)
        )
        if csgraph.connected_components(vertex_adj, directed=False)[0] != 1:
            raise NonManifold("mesh is disconnected")

        self.boundary_loops = self._trace_boundary_loops()

    def _trace_boundary_loops(self):
        faces = self.faces
        src = faces.ravel()
        dst = np.roll(faces, -1, axis=1).ravel()
        nxt = {}
        for s, d in zip(src[self._he_boundary], dst[self._he_boundary]):
            if int(s) in nxt:
                raise NonManifold("vertex with two outgoing boundary edges")
            nxt[int(s)] = int(d)
        loops = []
        seen = set()
        for start in sorted(nxt):
            if start in seen:
                continue
            loop = [start]
            seen.add(start)
            v = nxt[start]
            while v != start:
                if v in seen:
                    raise NonManifold("boundary walk revisited a vertex")
                loop.append(v)
                seen.add(v)
                v = nxt[v]
            loops.append(np.asarray(loop, dtype=np.int64))
        return loops

    def _check_triangle_inequality(self):
        tri = self.edge_lengths[self.face_edges]  # (F, 3)
        perim = tri.sum(axis=1)
        bad = (perim - 2.0 * tri.max(axis=1)) <= perim * TRIANGLE_SLACK
        if bad.any():
            raise DegenerateFace(
                f"{int(bad.sum())} face(s) violate the triangle inequality "
                f"(first: face {int(np.flatnonzero(bad)[0])})"
            )

    # -- intrinsic geometry --------------------------------------------------

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges) + len(self.faces)

    @cached_property
    def corner_angles(self) -> np.ndarray:
        """Interior angle at each face corner, from the law of cosines."""
        opp = self.edge_lengths[self.face_edges[:, [1, 2, 0]]]
        b = self.edge_lengths[self.face_edges]            # edge (c, c+1)
        c = self.edge_lengths[self.face_edges[:, [2, 0, 1]]]  # edge (c+2, c)
        cos = (b * b + c * c - opp * opp) / (2.0 * b * c)
        return np.arccos(np.clip(cos, -1.0, 1.0))

    @cached_property
    def angle_sums(self) -> np.ndarray:
        sums = np.zeros(self.n_vertices)
        np.add.at(sums, self.faces.ravel(), self.corner_angles.ravel())
        return sums

    @cached_property
    def is_boundary_vertex(self) -> np.ndarray:
        mask = np.zeros(self.n_vertices, dtype=bool)
        for loop in self.boundary_loops:
            mask[loop] = True
        return mask

    @cached_property
    def angle_defect(self) -> np.ndarray:
        """Integrated Gaussian curvature per vertex; zero on the boundary."""
        omega = 2.0 * np.pi - self.angle_sums
        omega[self.is_boundary_vertex] = 0.0
        return omega

    @cached_property
    def face_areas(self) -> np.ndarray:
        tri = self.edge_lengths[self.face_edges]
        s = tri.sum(axis=1) / 2.0
        return np.sqrt(np.maximum(s * (s - tri[:, 0]) * (s - tri[:, 1]) * (s - tri[:, 2]), 0.0))

    @cached_property
    def mean_edge_length(self) -> float:
        return float(self.edge_lengths.mean())

    def edge_index(self, i: int, j: int) -> int:
        """Canonical index of undirected edge {i, j}."""
        a, b = (i, j) if i < j else (j, i)
        lo = np.searchsorted(self.edges[:, 0], a)
        hi = np.searchsorted(self.edges[:, 0], a, side="right")
        block = self.edges[lo:hi, 1]
        k = np.searchsorted(block, b)
        if k == len(block) or block[k] != b:
            raise KeyError(f"no edge ({i}, {j})")
        return int(lo + k)


def _next_corner(c):
    """Corner index of the next corner within the same face."""
    return (c // 3) * 3 + (c + 1) % 3


@dataclass
class DiscreteCurvatures:
    """Angle defects at interior vertices and exterior angles on the boundary.

    ``omega`` spans all vertices (zero on the boundary); ``k`` follows the
    boundary loop order.
    """

    omega: np.ndarray
    k: np.ndarray


class DiskMesh(SurfaceMesh):
    """Triangle mesh with disk topology (chi = 1, one boundary loop)."""

    def __init__(self, faces, edge_lengths, n_vertices=None):
        super().__init__(faces, edge_lengths, n_vertices=n_vertices)
        if len(self.boundary_loops) != 1:
            raise NotADisk(f"expected one boundary loop, found {len(self.boundary_loops)}")
        if self.euler_characteristic != 1:
            raise NotADisk(f"Euler characteristic {self.euler_characteristic} != 1")

    @property
    def boundary_loop(self) -> np.ndarray:
        return self.boundary_loops[0]

    @cached_property
    def interior_vertices(self) -> np.ndarray:
        return np.flatnonzero(~self.is_boundary_vertex)

    @cached_property
    def boundary_position(self) -> np.ndarray:
        """Vertex -> position along the boundary loop (-1 for interior)."""
        pos = np.full(self.n_vertices, -1, dtype=np.int64)
        pos[self.boundary_loop] = np.arange(len(self.boundary_loop))
        return pos

    @cached_property
    def boundary_edge_lengths(self) -> np.ndarray:
        """Length of boundary edge j (loop[j] -> loop[j+1])."""
        loop = self.boundary_loop
        idx = [self.edge_index(int(loop[j]), int(loop[(j + 1) % len(loop)]))
               for j in range(len(loop))]
        return self.edge_lengths[np.asarray(idx)]

    @cached_property
    def dual_boundary_lengths(self) -> np.ndarray:
        """Half the two boundary edges meeting at each boundary vertex."""
        ell = self.boundary_edge_lengths
        return 0.5 * (np.roll(ell, 1) + ell)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_loop)


def interior_angles(mesh: SurfaceMesh) -> np.ndarray:
    """Corner angles beta per face, shape (F, 3)."""
    return mesh.corner_angles


def discrete_curvatures(mesh: DiskMesh, beta: np.ndarray | None = None) -> DiscreteCurvatures:
    """Angle defects and boundary exterior angles from corner angles."""
    if beta is None:
        beta = mesh.corner_angles
    sums = np.zeros(mesh.n_vertices)
    np.add.at(sums, mesh.faces.ravel(), beta.ravel())
    omega = 2.0 * np.pi - sums
    omega[mesh.is_boundary_vertex] = 0.0
    k = np.pi - sums[mesh.boundary_loop]
    return DiscreteCurvatures(omega=omega, k=k)


# -- cutting ----------------------------------------------------------------


@dataclass
class SeamMap:
    """Correspondence between a cut mesh and its uncut origin.

    ``vertex_origin[v_cut]`` is the original vertex; ``edge_pairs`` lists pairs
    of boundary-edge positions (edge j runs loop[j] -> loop[j+1]) that are the
    two copies of one cut edge.
    """

    vertex_origin: np.ndarray
    edge_pairs: list = field(default_factory=list)

    def copies_of(self, original_vertex: int) -> np.ndarray:
        return np.flatnonzero(self.vertex_origin == original_vertex)

    def boundary_edge_groups(self, n_boundary_edges: int) -> np.ndarray:
        """Group labels per boundary edge; seam pairs share one label."""
        group = np.arange(n_boundary_edges)
        for a, b in self.edge_pairs:
            group[b] = group[a]
        return group


def _dual_spanning_tree(mesh: SurfaceMesh) -> np.ndarray:
    """Mask of edges crossed by a spanning tree of the face-adjacency graph.

    Gluing faces along the crossed edges always yields a topological disk, so
    the uncrossed edges form a connected, vertex-spanning cut candidate set.
    """
    nf = len(mesh.faces)
    fe = mesh.face_edges
    ne = len(mesh.edges)
    flat_edges = fe.ravel()
    flat_faces = np.repeat(np.arange(nf), 3)
    order = np.argsort(flat_edges, kind="stable")
    sorted_faces = flat_faces[order]
    counts = np.bincount(flat_edges, minlength=ne)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    e_faces = -np.ones((ne, 2), dtype=np.int64)
    e_faces[:, 0] = sorted_faces[starts]
    two = counts == 2
    e_faces[two, 1] = sorted_faces[starts[two] + 1]
    usable = e_faces[:, 1] >= 0
    rows = e_faces[usable, 0]
    cols = e_faces[usable, 1]
    data = np.flatnonzero(usable) + 1
    # keep one representative edge per face pair (faces may share several edges)
    pair_key = np.minimum(rows, cols) * nf + np.maximum(rows, cols)
    _, first = np.unique(pair_key, return_index=True)
    rows, cols, data = rows[first], cols[first], data[first]
    adj = sp.csr_matrix((data, (rows, cols)), shape=(nf, nf))
    adj = adj + adj.T
    crossed = np.zeros(len(mesh.edges), dtype=bool)
    seen = np.zeros(nf, dtype=bool)
    for root in range(nf):
        if seen[root]:
            continue
        tree = csgraph.breadth_first_tree(adj.astype(bool), root, directed=False).tocoo()
        seen[root] = True
        for i, j in zip(tree.row, tree.col):
            crossed[adj[i, j] - 1] = True
            seen[i] = seen[j] = True
    return crossed


def cut_to_disk(surface: SurfaceMesh, cones=()) -> tuple[DiskMesh, SeamMap]:
    """Cut a surface into a disk through all cone vertices.

    The cut graph is a trimmed tree-cotree complement: a primal spanning tree
    plus the leftover (generator) edges, with non-cone leaf branches removed.
    Ties are broken by lowest vertex index throughout, so the seam is
    deterministic.
    """
    cones = sorted(int(c) for c in cones)
    on_boundary = surface.is_boundary_vertex
    for c in cones:
        if c < 0 or c >= surface.n_vertices:
            raise ConeNotReachable(f"cone vertex {c} out of range")
        if on_boundary[c]:
            raise ConeNotReachable(f"cone vertex {c} lies on the boundary")

    closed = len(surface.boundary_loops) == 0
    already_disk = (not closed and len(surface.boundary_loops) == 1
                    and surface.euler_characteristic == 1)
    if already_disk and not cones:
        raise AlreadyOpenWithCuts("input is already a disk and no cones were given")
    if closed and surface.euler_characteristic == 2 and not cones:
        raise AlreadyOpenWithCuts("closed genus-0 surface needs at least one cone")

    boundary_edge = surface.edge_face_count == 1
    crossed = _dual_spanning_tree(surface)
    # cut candidates: every interior edge not crossed by the dual tree
    cut = ~crossed & ~boundary_edge

    # trim leaves that are not cones (boundary edges pin their endpoints)
    e = surface.edges
    degree = np.bincount(e[cut].ravel(), minlength=surface.n_vertices)
    degree = degree + 2 * on_boundary  # boundary vertices sit on the boundary cycle
    incident = [[] for _ in range(surface.n_vertices)]
    for idx in np.flatnonzero(cut):
        incident[e[idx, 0]].append(idx)
        incident[e[idx, 1]].append(idx)
    is_cone = np.zeros(surface.n_vertices, dtype=bool)
    is_cone[cones] = True
    removed = np.zeros(len(e), dtype=bool)
    stack = [v for v in range(surface.n_vertices) if degree[v] == 1 and not is_cone[v]]
    while stack:
        v = stack.pop()
        if degree[v] != 1 or is_cone[v]:
            continue
        for idx in incident[v]:
            if cut[idx] and not removed[idx]:
                removed[idx] = True
                cut[idx] = False
                degree[e[idx, 0]] -= 1
                degree[e[idx, 1]] -= 1
                for w in e[idx]:
                    if degree[w] == 1 and not is_cone[w]:
                        stack.append(int(w))
                break

    if not cut.any():
        raise AlreadyOpenWithCuts("cut graph is empty; nothing to cut")

    disk, seams = _split_along_edges(surface, cut)

    cone_missing = [c for c in cones
                    if not np.isin(seams.copies_of(c), disk.boundary_loop).all()]
    if cone_missing:
        raise ConeNotReachable(f"cones {cone_missing} not on the cut boundary")
    return disk, seams


def _split_along_edges(surface: SurfaceMesh, cut: np.ndarray) -> tuple[DiskMesh, SeamMap]:
    """Duplicate vertices so that faces are glued only across non-cut edges."""
    faces = surface.faces
    nf = len(faces)
    fe = surface.face_edges

    he = np.arange(3 * nf)
    twin = surface._twin
    glue = (twin >= 0) & ~cut[fe.ravel()]
    rows = he[glue]
    cols = twin[glue]
    c_pairs_a = np.concatenate([rows, _next_corner(rows)])
    c_pairs_b = np.concatenate([_next_corner(cols), cols])
    adj = sp.coo_matrix(
        (np.ones(len(c_pairs_a)), (c_pairs_a, c_pairs_b)), shape=(3 * nf, 3 * nf)
    )
    n_new, labels = csgraph.connected_components(adj, directed=False)

    # one new vertex per corner-component; remember its original vertex
    new_faces = labels.reshape(nf, 3)
    vertex_origin = np.zeros(n_new, dtype=np.int64)
    vertex_origin[labels] = faces.ravel()

    # compact ids in first-seen order for determinism
    order = np.unique(new_faces.ravel())
    remap = np.zeros(n_new, dtype=np.int64)
    remap[order] = np.arange(len(order))
    new_faces = remap[new_faces]
    vertex_origin = vertex_origin[order]

    new_edges, _ = _canonical_edges(new_faces)
    orig_pairs = np.sort(vertex_origin[new_edges], axis=1)
    lengths = np.empty(len(new_edges))
    for idx, (a, b) in enumerate(orig_pairs):
        lengths[idx] = surface.edge_lengths[surface.edge_index(int(a), int(b))]

    disk = DiskMesh(new_faces, lengths, n_vertices=len(order))

    loop = disk.boundary_loop
    nb = len(loop)
    seam_pairs = []
    by_orig: dict[tuple[int, int], list[int]] = {}
    for j in range(nb):
        a = int(vertex_origin[loop[j]])
        b = int(vertex_origin[loop[(j + 1) % nb]])
        key = (a, b) if a < b else (b, a)
        eidx = surface.edge_index(*key)
        if cut[eidx]:
            by_orig.setdefault(key, []).append(j)
    for key, positions in sorted(by_orig.items()):
        if len(positions) != 2:
            raise NotADisk(f"cut edge {key} appears {len(positions)} times on the boundary")
        seam_pairs.append((positions[0], positions[1]))

    return disk, SeamMap(vertex_origin=vertex_origin, edge_pairs=seam_pairs)

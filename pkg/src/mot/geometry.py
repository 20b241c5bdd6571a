"""Convex geometry on finite point sets.

Affine hulls, minimal V-representations, relative-interior tests and
minimal faces, all decided by small linear programs so that every
predicate uses one consistent pair of tolerances:

* ``TAU_GEO`` (1e-9) for rank, membership and tightness decisions,
* ``EPS_RI``  (1e-7) for strict positivity in relative-interior tests.

Polytopes are bounded and stored by their vertices.  Lower-dimensional
polytopes are first projected onto their affine hull, so faces and
half-space descriptions are genuine ones of the set itself and not of
the ambient space.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import lp
from .errors import DimensionMismatch, InvalidInput, PointOutsidePolytope

TAU_GEO = 1e-9
EPS_RI = 1e-7


def as_point(x, dim: int | None = None) -> np.ndarray:
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.ndim != 1:
        raise InvalidInput("a point must be a flat coordinate list")
    if not np.all(np.isfinite(p)):
        raise InvalidInput("point coordinates must be finite")
    if dim is not None and p.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {p.shape[0]}")
    return p


def as_points(points, dim: int | None = None) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise InvalidInput("empty point list")
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if dim == 1 else pts.reshape(1, -1)
    if not np.all(np.isfinite(pts)):
        raise InvalidInput("point coordinates must be finite")
    if dim is not None and pts.shape[1] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {pts.shape[1]}")
    return pts


@dataclass(frozen=True)
class AffineSubspace:
    """Affine hull base_point + span(basis); basis rows are orthonormal."""

    base_point: np.ndarray
    basis: np.ndarray  # (dim, ambient_dim), orthonormal rows
    dim: int

    def project(self, points: np.ndarray) -> np.ndarray:
        """Coordinates of ``points`` in the subspace frame."""
        pts = np.atleast_2d(points)
        return (pts - self.base_point) @ self.basis.T

    def lift(self, coords: np.ndarray) -> np.ndarray:
        coords = np.atleast_2d(coords)
        if self.dim == 0:
            return np.tile(self.base_point, (coords.shape[0], 1))
        return self.base_point + coords @ self.basis

    def contains(self, x: np.ndarray, tol: float = TAU_GEO) -> bool:
        x = as_point(x, self.base_point.shape[0])
        diff = x - self.base_point
        residual = diff - self.basis.T @ (self.basis @ diff) if self.dim else diff
        return bool(np.linalg.norm(residual) <= max(tol, 10 * tol * max(1.0, np.linalg.norm(diff))))


def affine_hull(points) -> AffineSubspace:
    """Affine hull of a point set; dimension is the TAU_GEO-rank."""
    pts = as_points(points)
    base = pts.mean(axis=0)
    centered = pts - base
    if pts.shape[0] == 1:
        return AffineSubspace(pts[0], np.zeros((0, pts.shape[1])), 0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(s > TAU_GEO))
    return AffineSubspace(base, vt[:rank], rank)


class Polytope:
    """Bounded convex polytope given by a minimal vertex list."""

    def __init__(self, vertices, *, minimal: bool = False):
        pts = as_points(vertices)
        pts = _dedupe(pts)
        if not minimal and pts.shape[0] > 1:
            pts = _minimal_vertices(pts)
        self.vertices = pts
        self.ambient_dim = pts.shape[1]

    def __repr__(self):
        return f"Polytope({self.vertices.tolist()})"

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def affine_dim(self) -> int:
        return affine_hull(self.vertices).dim

    def is_singleton(self, tol: float = TAU_GEO) -> bool:
        return self.n_vertices == 1

    def contains(self, x, tol: float = TAU_GEO) -> bool:
        """LP membership: x is a convex combination of the vertices."""
        x = as_point(x, self.ambient_dim)
        return _membership_feasible(self.vertices, x, tol)

    def same_vertices(self, other: "Polytope", tol: float = 1e-7) -> bool:
        if self.n_vertices != other.n_vertices:
            return False
        return _match_point_sets(self.vertices, other.vertices, tol)


def _dedupe(pts: np.ndarray, tol: float = TAU_GEO) -> np.ndarray:
    keep = []
    for i in range(pts.shape[0]):
        if not any(np.max(np.abs(pts[i] - pts[j])) <= tol for j in keep):
            keep.append(i)
    return pts[keep]


def _match_point_sets(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    used = [False] * b.shape[0]
    for p in a:
        hit = -1
        for j in range(b.shape[0]):
            if not used[j] and np.max(np.abs(p - b[j])) <= tol:
                hit = j
                break
        if hit < 0:
            return False
        used[hit] = True
    return all(used)


def _membership_feasible(verts: np.ndarray, x: np.ndarray, tol: float = TAU_GEO) -> bool:
    k, d = verts.shape
    if k == 1:
        return bool(np.max(np.abs(verts[0] - x)) <= tol)
    A = np.vstack([verts.T, np.ones((1, k))])
    b = np.concatenate([x, [1.0]])
    prog = lp.LinearProgram(
        objective=np.zeros(k),
        constraint_matrix=A,
        relations=[lp.EQ] * (d + 1),
        rhs=b,
    )
    return lp.feasible(prog)


def _minimal_vertices(pts: np.ndarray) -> np.ndarray:
    keep = []
    for i in range(pts.shape[0]):
        others = np.delete(pts, i, axis=0)
        if not _membership_feasible(others, pts[i]):
            keep.append(i)
    if not keep:  # all points coincide within tolerance (already deduped)
        keep = [0]
    return pts[keep]


def convex_hull(points) -> Polytope:
    """Minimal V-representation of the convex hull of ``points``."""
    return Polytope(points)


def in_relative_interior(x, P: Polytope, eps: float = EPS_RI) -> bool:
    """True iff x = sum l_i v_i with all l_i >= eps (one max-min LP)."""
    x = as_point(x, P.ambient_dim)
    if P.n_vertices == 1:
        return bool(np.max(np.abs(P.vertices[0] - x)) <= TAU_GEO)
    k, d = P.vertices.shape
    # variables: l_1..l_k, s; maximise s subject to l_i - s >= 0
    A_eq = np.hstack([np.vstack([P.vertices.T, np.ones((1, k))]), np.zeros((d + 1, 1))])
    b_eq = np.concatenate([x, [1.0]])
    A_ge = np.hstack([np.eye(k), -np.ones((k, 1))])
    prog = lp.LinearProgram(
        objective=np.concatenate([np.zeros(k), [1.0]]),
        constraint_matrix=np.vstack([A_eq, A_ge]),
        relations=[lp.EQ] * (d + 1) + [lp.GEQ] * k,
        rhs=np.concatenate([b_eq, np.zeros(k)]),
        upper_bounds=[None] * k + [1.0],
    )
    res = lp.solve(prog)
    return res.is_optimal and res.objective_value >= eps


def minimal_face(x, P: Polytope) -> Polytope:
    """The unique face of P containing x in its relative interior.

    A vertex v belongs to the face iff x = t v + (1-t) z for some z in P
    and t in (0,1); per vertex this is one LP maximising t over the
    convex-combination representations of x.
    """
    x = as_point(x, P.ambient_dim)
    if not P.contains(x):
        raise PointOutsidePolytope(f"{x.tolist()} is not in the polytope")
    if P.n_vertices == 1:
        return Polytope(P.vertices, minimal=True)
    k, d = P.vertices.shape
    face = []
    for v_idx in range(k):
        # variables: t (weight on v), l_1..l_k (weights on all vertices)
        cols = np.hstack([P.vertices[v_idx].reshape(-1, 1), P.vertices.T])
        A = np.vstack([cols, np.ones((1, k + 1))])
        b = np.concatenate([x, [1.0]])
        prog = lp.LinearProgram(
            objective=np.concatenate([[1.0], np.zeros(k)]),
            constraint_matrix=A,
            relations=[lp.EQ] * (d + 1),
            rhs=b,
        )
        res = lp.solve(prog)
        if res.is_optimal and res.objective_value >= EPS_RI:
            face.append(v_idx)
    if not face:  # x coincides with a vertex up to tolerance
        dists = np.linalg.norm(P.vertices - x, axis=1)
        face = [int(np.argmin(dists))]
    return Polytope(P.vertices[face], minimal=True)


def relative_interiors_intersect(P: Polytope, Q: Polytope, eps: float = EPS_RI) -> bool:
    """True iff some point is in the relative interior of both polytopes."""
    if P.ambient_dim != Q.ambient_dim:
        raise DimensionMismatch("polytopes live in different ambient spaces")
    if P.n_vertices == 1:
        return in_relative_interior(P.vertices[0], Q, eps)
    if Q.n_vertices == 1:
        return in_relative_interior(Q.vertices[0], P, eps)
    k, d = P.vertices.shape
    r = Q.vertices.shape[0]
    # variables: l_1..l_k, m_1..m_r, s
    n = k + r + 1
    rows = []
    rels = []
    rhs = []
    match = np.zeros((d, n))
    match[:, :k] = P.vertices.T
    match[:, k : k + r] = -Q.vertices.T
    rows.append(match)
    rels += [lp.EQ] * d
    rhs += [0.0] * d
    sum_p = np.zeros(n)
    sum_p[:k] = 1.0
    sum_q = np.zeros(n)
    sum_q[k : k + r] = 1.0
    rows.append(sum_p.reshape(1, -1))
    rows.append(sum_q.reshape(1, -1))
    rels += [lp.EQ, lp.EQ]
    rhs += [1.0, 1.0]
    pos = np.hstack([np.eye(k + r), -np.ones((k + r, 1))])
    rows.append(pos)
    rels += [lp.GEQ] * (k + r)
    rhs += [0.0] * (k + r)
    prog = lp.LinearProgram(
        objective=np.concatenate([np.zeros(k + r), [1.0]]),
        constraint_matrix=np.vstack(rows),
        relations=rels,
        rhs=np.array(rhs),
        upper_bounds=[None] * (k + r) + [1.0],
    )
    res = lp.solve(prog)
    return res.is_optimal and res.objective_value >= eps


class HalfSpace(NamedTuple):
    """The set {y : normal . y + offset <= 0}."""

    normal: np.ndarray
    offset: float


def halfspaces(P: Polytope) -> list[HalfSpace]:
    """Facet inequalities of P inside its affine hull, lifted to ambient
    coordinates.  Points of aff(P) satisfy all of them iff they lie in P."""
    sub = affine_hull(P.vertices)
    if sub.dim == 0:
        return []
    coords = sub.project(P.vertices)
    out = []
    if sub.dim == 1:
        u = coords[:, 0]
        lo, hi = float(u.min()), float(u.max())
        g = sub.basis[0]
        base = float(g @ sub.base_point)
        out.append(HalfSpace(g, -(base + hi)))
        out.append(HalfSpace(-g, base + lo))
        return out
    from scipy.spatial import ConvexHull as QHull

    hull = QHull(coords)
    for eq in hull.equations:  # a . u + b <= 0 in subspace coordinates
        a, b = eq[:-1], eq[-1]
        normal = a @ sub.basis
        offset = b - float(a @ sub.basis @ sub.base_point)
        out.append(HalfSpace(normal, offset))
    return out


def intersect_halfspaces_with_polytope(
    constraints: list[HalfSpace], box: Polytope, tol: float = TAU_GEO
) -> Polytope | None:
    """Vertices of box ∩ {y : g.y + c <= 0 for all constraints}.

    Enumeration runs in the affine-hull coordinates of ``box``; returns
    None when the intersection is empty.
    """
    sub = affine_hull(box.vertices)
    if sub.dim == 0:
        p = box.vertices[0]
        if all(h.normal @ p + h.offset <= tol for h in constraints):
            return Polytope(box.vertices, minimal=True)
        return None
    # every constraint expressed in subspace coordinates u: y = p0 + B^T u
    ineqs = []
    for h in halfspaces(box):
        ineqs.append((sub.basis @ h.normal, float(h.normal @ sub.base_point) + h.offset))
    for h in constraints:
        ineqs.append((sub.basis @ h.normal, float(h.normal @ sub.base_point) + h.offset))
    m = sub.dim
    A = np.array([g for g, _ in ineqs])
    b = np.array([c for _, c in ineqs])
    candidates = []
    for idx in combinations(range(len(ineqs)), m):
        M = A[list(idx)]
        rhs = -b[list(idx)]
        try:
            u = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            continue
        if np.max(A @ u + b) <= 10 * tol:
            candidates.append(u)
    if not candidates:
        return None
    verts = sub.lift(np.array(candidates))
    return Polytope(verts)

"""Piecewise-linear convex functions as finite maxima of affine pieces.

Flat regions of such a function are exact polyhedra, which makes the
largest affine-behaviour component around a point computable as a
minimal face.  Unbounded flat regions are clipped by a caller-supplied
bounding box.  The limit notion for sequences of convex functions is
replaced by a tolerance-and-prefix surrogate whose testable contract is
convergence as the sequence grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AtomOutsideD,
    DimensionMismatch,
    EmptyList,
    InvalidInput,
    PointOutsideBox,
)
from .geometry import (
    EPS_RI,
    TAU_GEO,
    HalfSpace,
    Polytope,
    as_point,
    intersect_halfspaces_with_polytope,
    minimal_face,
)
from .measures import DiscreteMeasure, barycenter


@dataclass(frozen=True)
class AffineFunction:
    gradient: np.ndarray
    offset: float

    def __call__(self, y):
        return float(self.gradient @ np.asarray(y, dtype=float)) + self.offset


class PwlConvex:
    """phi(y) = max over pieces of <gradient, y> + offset."""

    def __init__(self, pieces):
        if not pieces:
            raise InvalidInput("a PWL convex function needs at least one piece")
        grads = []
        offs = []
        for g, c in pieces:
            g = np.atleast_1d(np.asarray(g, dtype=float))
            if not np.all(np.isfinite(g)) or not np.isfinite(c):
                raise InvalidInput("piece coefficients must be finite")
            grads.append(g)
            offs.append(float(c))
        self.gradients = np.array(grads)
        self.offsets = np.array(offs)
        self.dim = self.gradients.shape[1]

    @property
    def n_pieces(self) -> int:
        return self.gradients.shape[0]

    @property
    def lipschitz(self) -> float:
        return float(np.max(np.linalg.norm(self.gradients, axis=1)))

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if y.ndim == 1:
            return float(np.max(self.gradients @ y + self.offsets))
        return np.max(y @ self.gradients.T + self.offsets, axis=1)

    def active_pieces(self, x, tol: float = TAU_GEO) -> np.ndarray:
        """Indices of pieces achieving the maximum at x within tol."""
        x = as_point(x, self.dim)
        vals = self.gradients @ x + self.offsets
        return np.flatnonzero(vals >= vals.max() - tol)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "pieces": [
                {"gradient": g.tolist(), "offset": float(c)}
                for g, c in zip(self.gradients, self.offsets)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PwlConvex":
        try:
            dim = int(data["dim"])
            pieces = [(p["gradient"], p["offset"]) for p in data["pieces"]]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed PWL JSON: {exc}") from exc
        phi = cls(pieces)
        if phi.dim != dim:
            raise InvalidInput("piece gradients do not match declared dim")
        return phi


def supporting_affine(phi: PwlConvex, x) -> AffineFunction:
    """The piece achieving the maximum at x; ties broken by the
    lexicographically smallest gradient, then smallest offset, giving a
    deterministic subgradient selector."""
    x = as_point(x, phi.dim)
    active = phi.active_pieces(x)
    keys = sorted(
        active,
        key=lambda k: (tuple(phi.gradients[k]), phi.offsets[k]),
    )
    k = keys[0]
    return AffineFunction(phi.gradients[k].copy(), float(phi.offsets[k]))


def delta(phi: PwlConvex, x, y) -> float:
    """phi(y) - (phi(x) + <grad(x), y - x>), always >= 0."""
    x = as_point(x, phi.dim)
    y = as_point(y, phi.dim)
    b = supporting_affine(phi, x)
    return phi(y) - (phi(x) + float(b.gradient @ (y - x)))


def flat_region(phi: PwlConvex, x) -> list:
    """H-representation of {y : phi(y) = b(y)} for the tie-broken
    supporting piece b at x; possibly unbounded."""
    x = as_point(x, phi.dim)
    b = supporting_affine(phi, x)
    out = []
    for g, c in zip(phi.gradients, phi.offsets):
        normal = g - b.gradient
        off = c - b.offset
        if np.max(np.abs(normal)) <= TAU_GEO and abs(off) <= TAU_GEO:
            continue
        out.append(HalfSpace(normal, off))
    return out


def _require_in_box(x, box: Polytope):
    if x.shape[0] != box.ambient_dim:
        raise DimensionMismatch("point and box dimensions differ")
    if not box.contains(x):
        raise PointOutsideBox(f"{x.tolist()} is not in the bounding box")


def affine_component(phi: PwlConvex, x, bounding_box: Polytope) -> Polytope:
    """Minimal face at x of the flat region of phi clipped to the box;
    its relative interior is the affine-behaviour component of x."""
    x = as_point(x, phi.dim)
    _require_in_box(x, bounding_box)
    region = intersect_halfspaces_with_polytope(flat_region(phi, x), bounding_box)
    if region is None:  # cannot happen: x itself satisfies the constraints
        raise AssertionError("flat region excludes its own base point")
    return minimal_face(x, region)


def asymptotic_component(
    phis: list, x, bounding_box: Polytope, tol: float = 1e-9
) -> Polytope:
    """Desk-scale surrogate for the asymptotically-affine component of a
    sequence of PWL convex functions.

    For each element of the last half of the list, the near-flat set
    {y in box : phi(y) - b(y) <= tol for every piece b supporting phi at
    x} is a polytope; their intersection, reduced to its minimal face at
    x, is returned.  Convergence as the list grows is the contract, not
    equality with an abstract limit.
    """
    if not phis:
        raise EmptyList("need at least one function")
    x = as_point(x)
    dims = {phi.dim for phi in phis}
    if len(dims) != 1 or x.shape[0] not in dims:
        raise DimensionMismatch("all functions and x must share one dimension")
    _require_in_box(x, bounding_box)
    half = (len(phis) + 1) // 2
    constraints = []
    for phi in phis[-half:]:
        for k in phi.active_pieces(x):
            g_b, c_b = phi.gradients[k], phi.offsets[k]
            for g, c in zip(phi.gradients, phi.offsets):
                normal = g - g_b
                off = (c - c_b) - tol
                if np.max(np.abs(normal)) <= TAU_GEO and off <= TAU_GEO:
                    continue
                constraints.append(HalfSpace(normal, off))
    region = intersect_halfspaces_with_polytope(constraints, bounding_box)
    if region is None:
        raise AssertionError("near-flat region excludes its own base point")
    return minimal_face(x, region)


@dataclass
class FaceConcentrationReport:
    barycenter: np.ndarray
    face: Polytope
    outside_mass: float


def check_barycenter_face(alpha: DiscreteMeasure, D: Polytope) -> FaceConcentrationReport:
    """Mass of alpha outside the minimal face of D at alpha's barycenter
    (zero for any measure concentrated on D)."""
    for p in alpha.points:
        if not D.contains(p):
            raise AtomOutsideD(f"atom {p.tolist()} lies outside the polytope")
    b = barycenter(alpha.normalized())
    face = minimal_face(b, D)
    outside = 0.0
    for p, w in zip(alpha.points, alpha.weights):
        if not face.contains(p):
            outside += float(w)
    return FaceConcentrationReport(b, face, outside)

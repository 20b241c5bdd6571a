"""Convex paving of a discrete martingale-transport instance.

Each mu-atom starts with the convex hull of its reachable nu-atoms;
cells whose relative interiors intersect are merged (union-find over the
atoms, hulls replaced by the hull of the union) until no merge fires.
The resulting cells have pairwise disjoint relative interiors and every
coupling is confined to them row by row.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coupling import (
    EPS_POLAR,
    Coupling,
    _reachable_from_mask,
    nonpolar_mask,
)
from .errors import DimensionMismatch, NotInConvexOrder
from .geometry import (
    Polytope,
    as_point,
    convex_hull,
    in_relative_interior,
    relative_interiors_intersect,
)
from .measures import DiscreteMeasure, check_convex_order


@dataclass
class PavingCell:
    members: list  # indices of mu-atoms in the cell
    hull: Polytope  # closure of the cell
    affine_dim: int

    def is_singleton(self) -> bool:
        return self.hull.is_singleton()


@dataclass
class ConvexPaving:
    """Non-singleton cells plus the indices of mu-atoms whose cell is
    their own singleton; points outside every cell are singletons too."""

    cells: list  # non-singleton PavingCell
    singletons: list  # indices of mu-atoms left as singleton cells
    mu_points: np.ndarray

    def to_json(self) -> dict:
        return {
            "cells": [
                {
                    "members": list(c.members),
                    "hull_vertices": c.hull.vertices.tolist(),
                    "affine_dim": c.affine_dim,
                }
                for c in self.cells
            ],
            "singletons": list(self.singletons),
        }


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra


def compute_paving(mu: DiscreteMeasure, nu: DiscreteMeasure) -> ConvexPaving:
    """Fixpoint of the merge rule over the reachable-set hulls."""
    if not check_convex_order(mu, nu):
        raise NotInConvexOrder("measures are not in convex order")
    mask = nonpolar_mask(mu, nu)
    n = mu.n_atoms
    uf = _UnionFind(n)
    hulls = {i: convex_hull(_reachable_from_mask(mu, nu, mask, i)) for i in range(n)}

    # at most n - 1 merges can fire, so the loop terminates
    changed = True
    while changed:
        changed = False
        roots = sorted(hulls)
        for a_pos in range(len(roots)):
            for b_pos in range(a_pos + 1, len(roots)):
                a, b = roots[a_pos], roots[b_pos]
                if uf.find(a) != a or uf.find(b) != b:
                    continue
                if relative_interiors_intersect(hulls[a], hulls[b]):
                    root = uf.union(a, b)
                    other = b if root == a else a
                    merged = convex_hull(
                        np.vstack([hulls[a].vertices, hulls[b].vertices])
                    )
                    hulls[root] = merged
                    del hulls[other]
                    changed = True

    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    cells = []
    singles = []
    for root in sorted(groups):
        hull = hulls[root]
        if hull.is_singleton():
            singles.extend(groups[root])
        else:
            cells.append(PavingCell(groups[root], hull, hull.affine_dim))
    return ConvexPaving(cells, singles, mu.points.copy())


def domain(p: ConvexPaving) -> list:
    """The non-singleton cells (the paved part of space)."""
    return list(p.cells)


def locate(p: ConvexPaving, x) -> PavingCell:
    """The unique cell whose relative interior contains x; any other
    point gets its own singleton cell."""
    x = as_point(x, p.mu_points.shape[1])
    for cell in p.cells:
        if in_relative_interior(x, cell.hull):
            return cell
    return PavingCell([], Polytope([x], minimal=True), 0)


@dataclass
class ConfinementReport:
    """Pairs (i, j, mass) whose mass escapes the hull of i's cell."""

    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_against_coupling(p: ConvexPaving, c: Coupling) -> ConfinementReport:
    """Check that every positive coupling entry stays within the hull of
    its source atom's cell."""
    if c.mu_support.shape[1] != p.mu_points.shape[1]:
        raise DimensionMismatch("coupling and paving dimensions differ")
    hull_of = {}
    for cell in p.cells:
        for i in cell.members:
            hull_of[i] = cell.hull
    report = ConfinementReport()
    for i in range(c.mu_support.shape[0]):
        hull = hull_of.get(i)
        for j in range(c.nu_support.shape[0]):
            mass = c.matrix[i, j]
            if mass <= EPS_POLAR:
                continue
            target = c.nu_support[j]
            if hull is None:
                inside = bool(np.max(np.abs(target - c.mu_support[i])) <= 1e-9)
            else:
                inside = hull.contains(target)
            if not inside:
                report.violations.append((i, j, float(mass)))
    return report

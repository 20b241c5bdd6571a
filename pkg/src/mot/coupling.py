"""Martingale transports between discrete measures.

Couplings are nonnegative matrices on supp(mu) x supp(nu) with row and
column marginals fixed and the conditional barycenter of each row equal
to its source point.  Polar pairs are pairs of atoms that carry zero
mass under every martingale coupling; they are detected by maximising
single entries over the coupling polytope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .errors import InvalidInput, NotInConvexOrder
from .geometry import TAU_GEO
from .measures import DiscreteMeasure, _require_comparable, barycenter

EPS_POLAR = 1e-8


@dataclass
class Coupling:
    """theta_ij = mass moved from mu-atom i to nu-atom j."""

    mu_support: np.ndarray
    nu_support: np.ndarray
    matrix: np.ndarray

    def row_marginals(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    def col_marginals(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    def martingale_defect(self) -> float:
        """Largest component-wise violation of sum_j theta_ij (y_j - x_i) = 0."""
        worst = 0.0
        for i, x in enumerate(self.mu_support):
            drift = self.matrix[i] @ (self.nu_support - x)
            worst = max(worst, float(np.max(np.abs(drift))))
        return worst

    def to_json(self) -> dict:
        return {
            "mu_support": self.mu_support.tolist(),
            "nu_support": self.nu_support.tolist(),
            "matrix": self.matrix.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Coupling":
        try:
            mu_s = np.asarray(data["mu_support"], dtype=float)
            nu_s = np.asarray(data["nu_support"], dtype=float)
            mat = np.asarray(data["matrix"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed coupling JSON: {exc}") from exc
        if mat.shape != (mu_s.shape[0], nu_s.shape[0]):
            raise InvalidInput("coupling matrix shape does not match supports")
        return cls(mu_s, nu_s, mat)


@dataclass
class Kernel:
    """Disintegration gamma(x_i, .): one probability measure per mu-atom,
    each with barycenter x_i."""

    mu_support: np.ndarray
    conditionals: list  # list of DiscreteMeasure


def build_martingale_lp(
    mu: DiscreteMeasure,
    nu: DiscreteMeasure,
    objective: np.ndarray | None = None,
    martingale: bool = True,
) -> lp.LinearProgram:
    """LP over theta_ij >= 0 with marginal equalities and, when
    ``martingale`` is set, the d per-row barycenter equalities."""
    _require_comparable(mu, nu)
    n, m = mu.n_atoms, nu.n_atoms
    d = mu.ambient_dim
    n_vars = n * m
    n_rows = n + m + (d * n if martingale else 0)
    A = np.zeros((n_rows, n_vars))
    b = np.zeros(n_rows)
    for i in range(n):
        A[i, i * m : (i + 1) * m] = 1.0
        b[i] = mu.weights[i]
    for j in range(m):
        A[n + j, j::m] = 1.0
        b[n + j] = nu.weights[j]
    if martingale:
        diffs = nu.points[None, :, :] - mu.points[:, None, :]  # (n, m, d)
        for i in range(n):
            for c in range(d):
                A[n + m + i * d + c, i * m : (i + 1) * m] = diffs[i, :, c]
    if objective is None:
        objective = np.zeros(n_vars)
    return lp.LinearProgram(
        objective=objective,
        constraint_matrix=A,
        relations=[lp.EQ] * n_rows,
        rhs=b,
    )


def build_transport_lp(
    mu: DiscreteMeasure, nu: DiscreteMeasure, objective: np.ndarray | None = None
) -> lp.LinearProgram:
    """Marginal constraints only: the classical transport polytope."""
    return build_martingale_lp(mu, nu, objective, martingale=False)


def find_coupling(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    """Any feasible martingale coupling; raises NotInConvexOrder if none."""
    prog = build_martingale_lp(mu, nu)
    res = lp.solve(prog)
    if not res.is_optimal:
        raise NotInConvexOrder("no martingale coupling exists")
    matrix = res.solution.reshape(mu.n_atoms, nu.n_atoms)
    return Coupling(mu.points.copy(), nu.points.copy(), np.maximum(matrix, 0.0))


def _pair_objective(n, m, i, j, sign=1.0):
    obj = np.zeros(n * m)
    obj[i * m + j] = sign
    return obj


def _check_indices(mu, nu, i, j):
    if not (0 <= i < mu.n_atoms) or not (0 <= j < nu.n_atoms):
        raise InvalidInput(f"pair index ({i}, {j}) out of range")


def max_mass_on_pair(
    mu: DiscreteMeasure, nu: DiscreteMeasure, i: int, j: int, martingale: bool = True
) -> float:
    """max theta_ij over all (martingale) couplings; the pair is polar
    iff the value is <= EPS_POLAR."""
    _check_indices(mu, nu, i, j)
    prog = build_martingale_lp(
        mu, nu, _pair_objective(mu.n_atoms, nu.n_atoms, i, j), martingale
    )
    res = lp.solve(prog)
    if not res.is_optimal:
        raise NotInConvexOrder("no martingale coupling exists")
    return res.objective_value


def min_mass_on_pair(
    mu: DiscreteMeasure, nu: DiscreteMeasure, i: int, j: int, martingale: bool = True
) -> float:
    """min theta_ij over all (martingale) couplings."""
    _check_indices(mu, nu, i, j)
    prog = build_martingale_lp(
        mu, nu, _pair_objective(mu.n_atoms, nu.n_atoms, i, j, sign=-1.0), martingale
    )
    res = lp.solve(prog)
    if not res.is_optimal:
        raise NotInConvexOrder("no martingale coupling exists")
    return -res.objective_value


def polar_matrix(
    mu: DiscreteMeasure, nu: DiscreteMeasure, martingale: bool = True
) -> np.ndarray:
    """Matrix of max theta_ij over all pairs (one LP per pair)."""
    out = np.zeros((mu.n_atoms, nu.n_atoms))
    for i in range(mu.n_atoms):
        for j in range(nu.n_atoms):
            out[i, j] = max_mass_on_pair(mu, nu, i, j, martingale)
    return out


def nonpolar_mask(mu: DiscreteMeasure, nu: DiscreteMeasure) -> np.ndarray:
    """Boolean matrix marking the non-polar pairs.

    Any feasible coupling with theta_kl > EPS_POLAR certifies (k, l)
    non-polar, so the optimal solutions of the pair LPs are reused as
    certificates; only still-uncertified pairs get their own LP.  The
    result does not depend on the solve order.
    """
    n, m = mu.n_atoms, nu.n_atoms
    base = find_coupling(mu, nu)
    certified = base.matrix > EPS_POLAR
    undecided = ~certified
    while np.any(undecided):
        # max of the sum dominates each summand's individual maximum, so
        # a zero optimum proves every remaining pair polar at once
        prog = build_martingale_lp(mu, nu, undecided.astype(float).ravel())
        res = lp.solve(prog)
        if res.objective_value <= EPS_POLAR:
            break
        sol = res.solution.reshape(n, m)
        newly = undecided & (sol > EPS_POLAR)
        certified |= sol > EPS_POLAR
        if not np.any(newly):
            # mass spread too thin to certify: settle one pair exactly
            i, j = np.argwhere(undecided)[0]
            prog = build_martingale_lp(mu, nu, _pair_objective(n, m, i, j))
            res = lp.solve(prog)
            if res.objective_value > EPS_POLAR:
                certified |= res.solution.reshape(n, m) > EPS_POLAR
                certified[i, j] = True
            undecided[i, j] = False
        undecided &= ~certified
    return certified


def reachable_set(mu: DiscreteMeasure, nu: DiscreteMeasure, i: int) -> np.ndarray:
    """nu-atoms reachable from mu-atom i under some coupling, plus x_i
    itself (the barycenter constraint puts x_i in the hull anyway)."""
    if not (0 <= i < mu.n_atoms):
        raise InvalidInput(f"atom index {i} out of range")
    mask = nonpolar_mask(mu, nu)
    return _reachable_from_mask(mu, nu, mask, i)


def _reachable_from_mask(mu, nu, mask, i) -> np.ndarray:
    pts = [nu.points[j] for j in range(nu.n_atoms) if mask[i, j]]
    x = mu.points[i]
    if not any(np.max(np.abs(x - p)) <= TAU_GEO for p in pts):
        pts.append(x)
    return np.array(pts)


def disintegrate(c: Coupling) -> Kernel:
    """gamma(x_i, y_j) = theta_ij / mu_i over the positive entries."""
    conditionals = []
    for i in range(c.mu_support.shape[0]):
        row = c.matrix[i]
        total = row.sum()
        if total <= 0:
            raise InvalidInput(f"coupling row {i} carries no mass")
        keep = row > 0
        conditionals.append(
            DiscreteMeasure(c.nu_support[keep], row[keep] / total)
        )
    return Kernel(c.mu_support.copy(), conditionals)

"""Generators for the benchmark measure families used in tests and the CLI.

Families:

* ``discrete_k(k)``      -- k columns: mu on (i/(k-1), 0), nu split to (i/(k-1), +-1)
* ``continuous_grid(n)`` -- n-column discretisation of the uniform-on-a-segment pair
* ``mixed_k(k)``         -- discrete_k's mu averaged with a point mass at the center
* ``gaussian_grid(n)``   -- grid-discretised Gaussian dilated by a corner-spread kernel
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameter
from .measures import DiscreteMeasure, barycenter

FAMILIES = ("discrete_k", "continuous_grid", "mixed_k", "gaussian_grid")


def discrete_k(k: int):
    """mu^k with k atoms of weight 1/k on the segment, nu^k with 2k atoms
    of weight 1/(2k) on the top and bottom edges."""
    if k < 2:
        raise InvalidParameter("discrete_k requires k >= 2")
    xs = np.array([i / (k - 1) for i in range(k)])
    mu = DiscreteMeasure([[t, 0.0] for t in xs], [1.0 / k] * k)
    nu_pts = [[t, s] for t in xs for s in (1.0, -1.0)]
    nu = DiscreteMeasure(nu_pts, [1.0 / (2 * k)] * (2 * k))
    return mu, nu


def continuous_grid(n: int = 10):
    """Uniform on (0,1) x {0} vs uniform on (0,1) x {-1,1}, discretised
    to n equally weighted columns at the column midpoints."""
    if n < 1:
        raise InvalidParameter("continuous_grid requires n >= 1")
    xs = np.array([(i + 0.5) / n for i in range(n)])
    mu = DiscreteMeasure([[t, 0.0] for t in xs], [1.0 / n] * n)
    nu_pts = [[t, s] for t in xs for s in (1.0, -1.0)]
    nu = DiscreteMeasure(nu_pts, [1.0 / (2 * n)] * (2 * n))
    return mu, nu


def mixed_k(k: int):
    """(mu^k + delta_center) / 2 against nu^k; the center atom spreads its
    mass across the whole rectangle."""
    mu_k, nu = discrete_k(k)
    pts = np.vstack([mu_k.points, [[0.5, 0.0]]])
    weights = np.concatenate([mu_k.weights / 2.0, [0.5]])
    mu = DiscreteMeasure(pts, weights)  # odd k merges the two center atoms
    return mu, nu


def gaussian_grid(n: int = 5, step: float = 1.0, spread: float | None = None):
    """Standard-Gaussian weights on an n x n grid, recentered; nu is the
    image of mu under the corner-spread dilation kernel
    gamma(x, .) = 1/4 sum over (+-s, +-s) of delta_{x + (.,.)},
    which certifies both the convex order and full-dimensional spreading.
    """
    if n < 2 or n % 2 == 0:
        raise InvalidParameter("gaussian_grid requires an odd n >= 3")
    if spread is None:
        spread = step
    half = n // 2
    axis = np.arange(-half, half + 1) * step
    pts = np.array([[a, b] for a in axis for b in axis])
    w = np.exp(-0.5 * np.sum(pts**2, axis=1))
    w /= w.sum()
    mu = DiscreteMeasure(pts, w)
    center = barycenter(mu)
    mu = DiscreteMeasure(mu.points - center, mu.weights)
    corners = np.array([[s1 * spread, s2 * spread] for s1 in (-1, 1) for s2 in (-1, 1)])
    nu_pts = (mu.points[:, None, :] + corners[None, :, :]).reshape(-1, 2)
    nu_w = np.repeat(mu.weights / 4.0, 4)
    nu = DiscreteMeasure(nu_pts, nu_w)  # coincident corners merge
    return mu, nu


def make(name: str, **params):
    if name == "discrete_k":
        return discrete_k(int(params.get("k", 2)))
    if name == "continuous_grid":
        return continuous_grid(int(params.get("grid", 10)))
    if name == "mixed_k":
        return mixed_k(int(params.get("k", 3)))
    if name == "gaussian_grid":
        return gaussian_grid(
            int(params.get("grid", 5)),
            float(params.get("step", 1.0)),
            params.get("spread"),
        )
    raise InvalidParameter(f"unknown example family {name!r}; pick from {FAMILIES}")

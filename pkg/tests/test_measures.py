"""Discrete measures, convex order and one-dimensional potentials."""

import numpy as np
import pytest

from conftest import random_dilation_pair, random_pwl
from mot import DiscreteMeasure, barycenter, check_convex_order, pairing
from mot.errors import DimensionMismatch, InvalidInput, MassMismatch, NotInConvexOrder
from mot.fixtures import discrete_k
from mot.measures import potential, potential_domain
from mot.pwl import PwlConvex

TOL = 1e-9


def m1d(pts, w):
    return DiscreteMeasure([[p] for p in pts], w)


def test_barycenter_symmetric_pair():
    m = DiscreteMeasure([[0.0, -1.0], [0.0, 1.0]], [0.5, 0.5])
    assert np.allclose(barycenter(m), [0.0, 0.0])


def test_barycenter_point_mass():
    m = DiscreteMeasure([[3.0, 4.0]], [1.0])
    assert np.allclose(barycenter(m), [3.0, 4.0])


def test_barycenter_example_nu2():
    _, nu = discrete_k(2)
    assert np.allclose(barycenter(nu), [0.5, 0.0], atol=TOL)


def test_duplicate_atoms_merge():
    m = DiscreteMeasure([[1.0], [1.0], [2.0]], [0.25, 0.25, 0.5])
    assert m.n_atoms == 2
    assert m.equals(m1d([1.0, 2.0], [0.5, 0.5]))


def test_nonpositive_weights_rejected():
    with pytest.raises(InvalidInput):
        DiscreteMeasure([[0.0]], [0.0])
    with pytest.raises(InvalidInput):
        DiscreteMeasure([[0.0]], [-1.0])


def test_convex_order_split_atom():
    mu = m1d([0.0], [1.0])
    nu = m1d([-1.0, 1.0], [0.5, 0.5])
    assert check_convex_order(mu, nu)


def test_convex_order_reversed_pair():
    mu = m1d([-1.0, 1.0], [0.5, 0.5])
    nu = m1d([0.0], [1.0])
    assert not check_convex_order(mu, nu)


def test_convex_order_discrete_k2():
    mu, nu = discrete_k(2)
    assert check_convex_order(mu, nu)


def test_convex_order_errors():
    with pytest.raises(MassMismatch):
        check_convex_order(m1d([0.0], [1.0]), m1d([0.0], [2.0]))
    with pytest.raises(DimensionMismatch):
        check_convex_order(m1d([0.0], [1.0]), DiscreteMeasure([[0.0, 0.0]], [1.0]))


def test_potential_point_mass_is_abs():
    u = potential(m1d([0.0], [1.0]))
    for x in (-2.0, -0.5, 0.0, 0.3, 4.0):
        assert abs(u(x) - abs(x)) <= TOL


def test_potential_two_atoms():
    u = potential(m1d([-1.0, 1.0], [0.5, 0.5]))
    assert abs(u(0.0) - 1.0) <= TOL
    assert abs(u(1.0) - 1.0) <= TOL
    assert abs(u(-1.0) - 1.0) <= TOL
    assert abs(u(2.0) - 2.0) <= TOL
    assert abs(u(-2.0) - 2.0) <= TOL


def test_potential_homogeneous_in_mass():
    u = potential(m1d([0.0], [2.0]))
    for x in (-1.0, 0.5, 3.0):
        assert abs(u(x) - 2.0 * abs(x)) <= TOL


def test_potential_requires_dim_one():
    with pytest.raises(DimensionMismatch):
        potential(DiscreteMeasure([[0.0, 0.0]], [1.0]))


def test_potential_slopes_nondecreasing():
    rng = np.random.default_rng(31)
    for _ in range(20):
        n = int(rng.integers(1, 8))
        m = m1d(rng.uniform(-3, 3, size=n), rng.uniform(0.1, 1.0, size=n))
        slopes = potential(m).slopes
        assert np.all(np.diff(slopes) >= -TOL)
        assert abs(slopes[0] + m.total_mass) <= TOL
        assert abs(slopes[-1] - m.total_mass) <= TOL


def test_potential_domain_split_atom():
    mu = m1d([0.0], [1.0])
    nu = m1d([-1.0, 1.0], [0.5, 0.5])
    intervals = potential_domain(mu, nu)
    assert len(intervals) == 1
    a, b = intervals[0]
    assert abs(a + 1.0) <= TOL and abs(b - 1.0) <= TOL


def test_potential_domain_identical_measures():
    mu = m1d([0.0], [1.0])
    assert potential_domain(mu, mu) == []


def _grid_domain_oracle(mu, nu, lo=-5.0, hi=5.0, n=200001):
    """Brute-force oracle: sign of u_nu - u_mu on a fine grid."""
    xs = np.linspace(lo, hi, n)
    mu_y, mu_w = mu.points[:, 0], mu.weights
    nu_y, nu_w = nu.points[:, 0], nu.weights
    diff = np.abs(xs[:, None] - nu_y) @ nu_w - np.abs(xs[:, None] - mu_y) @ mu_w
    pos = diff > 1e-12
    intervals = []
    start = None
    for i, p in enumerate(pos):
        if p and start is None:
            start = xs[i]
        elif not p and start is not None:
            intervals.append((start, xs[i - 1]))
            start = None
    if start is not None:
        intervals.append((start, xs[-1]))
    return intervals


def test_potential_domain_two_components():
    mu = m1d([-2.0, 2.0], [0.5, 0.5])
    nu = m1d([-3.0, -1.0, 1.0, 3.0], [0.25, 0.25, 0.25, 0.25])
    intervals = potential_domain(mu, nu)
    assert len(intervals) == 2
    assert abs(intervals[0][0] + 3.0) <= TOL and abs(intervals[0][1] + 1.0) <= TOL
    assert abs(intervals[1][0] - 1.0) <= TOL and abs(intervals[1][1] - 3.0) <= TOL
    # grid oracle agrees up to the grid pitch
    oracle = _grid_domain_oracle(mu, nu)
    assert len(oracle) == 2
    pitch = 10.0 / 200000 * 2
    for got, exp in zip(intervals, oracle):
        assert abs(got[0] - exp[0]) <= pitch
        assert abs(got[1] - exp[1]) <= pitch


def test_potential_domain_rejects_unordered_pair():
    mu = m1d([-1.0, 1.0], [0.5, 0.5])
    nu = m1d([0.0], [1.0])
    with pytest.raises(NotInConvexOrder):
        potential_domain(mu, nu)


def test_pairing_identical_measures():
    rng = np.random.default_rng(1)
    m = m1d([0.0, 1.0], [0.5, 0.5])
    for _ in range(5):
        phi = random_pwl(rng, 1)
        assert abs(pairing(m, m, phi)) <= TOL


def test_pairing_abs_on_split():
    mu = m1d([0.0], [1.0])
    nu = m1d([-1.0, 1.0], [0.5, 0.5])
    phi = PwlConvex([([1.0], 0.0), ([-1.0], 0.0)])
    assert abs(pairing(mu, nu, phi) - 1.0) <= TOL


def test_pairing_affine_vanishes():
    rng = np.random.default_rng(6)
    for _ in range(10):
        mu, nu = random_dilation_pair(rng, dim=2)
        a = PwlConvex([(rng.uniform(-1, 1, size=2), float(rng.uniform(-1, 1)))])
        assert abs(pairing(mu, nu, a)) <= 1e-8


def test_pairing_nonnegative_under_convex_order():
    rng = np.random.default_rng(17)
    count = 0
    while count < 200:
        mu, nu = random_dilation_pair(rng, dim=int(rng.integers(1, 4)))
        assert check_convex_order(mu, nu)
        for _ in range(10):
            phi = random_pwl(rng, mu.ambient_dim)
            assert pairing(mu, nu, phi) >= -TOL
            count += 1


def test_one_dimensional_order_criterion():
    """check_convex_order agrees with the potential criterion: u_nu >=
    u_mu at every support point, for equal-mass equal-barycenter pairs."""
    rng = np.random.default_rng(23)
    for trial in range(40):
        if trial % 2 == 0:
            mu, nu = random_dilation_pair(rng, dim=1)
        else:
            # swapping a dilation pair usually breaks the order
            nu, mu = random_dilation_pair(rng, dim=1)
        u_mu, u_nu = potential(mu), potential(nu)
        pts = np.concatenate([mu.points[:, 0], nu.points[:, 0]])
        ok_oracle = bool(np.all(u_nu(pts) - u_mu(pts) >= -TOL))
        assert check_convex_order(mu, nu) == ok_oracle


def _quadratic_pwl(points):
    """Max of tangent planes of |y|^2 at the given points; exact there."""
    pieces = [(2.0 * p, -float(p @ p)) for p in points]
    return PwlConvex(pieces)


def test_strict_convexity_rigidity():
    rng = np.random.default_rng(29)
    for trial in range(20):
        mu, nu = random_dilation_pair(rng, dim=int(rng.integers(1, 3)))
        phi_q = _quadratic_pwl(np.vstack([mu.points, nu.points]))
        gap = pairing(mu, nu, phi_q)
        if gap <= TOL:
            assert mu.equals(nu)
        if mu.equals(nu):
            assert gap <= TOL


def test_json_round_trip():
    m = DiscreteMeasure([[0.1, -2.0], [1.0 / 3.0, 0.7]], [0.25, 0.75])
    again = DiscreteMeasure.from_json(m.to_json())
    assert np.array_equal(m.points, again.points)
    assert np.array_equal(m.weights, again.weights)

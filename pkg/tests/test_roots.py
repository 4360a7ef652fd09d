import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitmult.errors import DerivativeVanished, NoConvergence
from orbitmult.poly import CentPoly, DensePoly, compose_self_minus_id
from orbitmult.roots import all_roots, refine_root


def _match(found, expected, tol=1e-9):
    assert len(found) == len(expected)
    left = list(found)
    for e in expected:
        best = min(left, key=lambda z: abs(z - e))
        assert abs(best - e) < tol, (best, e)
        left.remove(best)


def test_quadratic():
    rs = all_roots(DensePoly((-1, 0, 1)))
    _match(rs.roots, [1, -1])
    assert rs.multiplicities == (1, 1)


def test_cubic_three_simple():
    rs = all_roots(DensePoly((0, -1, 0, 1)))
    _match(rs.roots, [0, 1, -1])


def test_double_root_clusters():
    rs = all_roots(DensePoly((4, -4, 1)))  # (z-2)^2
    assert rs.multiplicities == (2,)
    assert abs(rs.roots[0] - 2) < 1e-6
    assert rs.total_count == 2


def test_degree_one_and_validation():
    rs = all_roots(DensePoly((3, -1)))  # 3 - z
    assert rs.roots == (3 + 0j,)
    with pytest.raises(ValueError):
        all_roots(DensePoly((5,)))


def test_no_convergence_reports_residual():
    q = DensePoly(tuple(np.random.default_rng(0).normal(size=30)) + (1.0,))
    with pytest.raises(NoConvergence) as exc:
        all_roots(q, max_iter=1)
    assert exc.value.worst_residual is not None


def test_root_count_equals_degree_with_multiplicity():
    q = np.polynomial.polynomial.polyfromroots([1, 1, -2, -2, 0.5j])
    rs = all_roots(DensePoly(tuple(q)))
    assert rs.total_count == 5
    assert sorted(rs.multiplicities) == [1, 2, 2]
    # a triple root converges no closer than ~eps^(1/3); the default radius
    # keeps the approximations separate but the count is still exact
    q3 = np.polynomial.polynomial.polyfromroots([1, 1, 1, -2, -2])
    rs3 = all_roots(DensePoly(tuple(q3)))
    assert rs3.total_count == 5
    wide = all_roots(DensePoly(tuple(q3)), cluster_radius=1e-4)
    assert sorted(wide.multiplicities) == [2, 3]


def test_periodic_point_count_is_degree_power():
    p = CentPoly(3, (0.1 + 0.2j, -0.3))
    for m in (1, 2, 3):
        rs = all_roots(compose_self_minus_id(p, m))
        assert rs.total_count == 3**m


@pytest.mark.parametrize("seed", [1, 7, 23])
@pytest.mark.parametrize("degree", [10, 47, 100])
def test_vieta(seed, degree):
    rng = np.random.default_rng(seed)
    w = rng.uniform(0, 1, degree + 1) ** 0.5
    ang = rng.uniform(0, 2 * np.pi, degree + 1)
    coeffs = w * np.exp(1j * ang)
    coeffs[-1] = 1.0
    rs = all_roots(DensePoly(tuple(coeffs)))
    zs = np.array(rs.expanded())
    assert abs(zs.sum() - (-coeffs[-2])) < 1e-8 * max(1, abs(coeffs[-2]))
    prod = np.prod(zs)
    target = (-1) ** degree * coeffs[0]
    assert abs(prod - target) < 1e-8 * max(1, abs(target))


def test_residuals_below_bound():
    rng = np.random.default_rng(11)
    coeffs = tuple(rng.normal(size=20) + 1j * rng.normal(size=20)) + (1.0,)
    q = DensePoly(coeffs)
    rs = all_roots(q, tol=1e-12)
    scale = sum(abs(c) for c in q.coeffs)
    for r, resid in zip(rs.roots, rs.residuals):
        assert resid <= 1e-10 * scale * max(1.0, abs(r)) ** q.degree


def test_refine_known_root():
    z = refine_root(DensePoly((-2, 0, 1)), 1.4, tol=1e-14)
    assert abs(z - cmath.sqrt(2)) < 1e-14


def test_refine_lands_on_nearest_unity_grid():
    q = compose_self_minus_id(CentPoly(3, (0, 0)), 2)  # z^9 - z
    z = refine_root(q, 0.9 + 0.1j, tol=1e-13)
    grid = [cmath.exp(2j * cmath.pi * k / 8) for k in range(8)]
    nearest = min(grid, key=lambda g: abs(g - (0.9 + 0.1j)))
    assert abs(z - nearest) < 1e-10


def test_refine_multiple_root_stalls_or_flags():
    q = DensePoly((0, 0, 1))  # z^2, double root at 0
    try:
        z = refine_root(q, 0.1, tol=1e-40)
    except (DerivativeVanished, NoConvergence):
        return
    # stall exit: converged towards the double root at 0
    assert abs(z) < 1e-4


@settings(max_examples=40, deadline=None)
@given(
    roots=st.lists(
        st.builds(
            complex,
            st.floats(-2, 2, allow_nan=False),
            st.floats(-2, 2, allow_nan=False),
        ),
        min_size=1,
        max_size=6,
    )
)
def test_recovers_separated_random_roots(roots):
    # keep the roots pairwise separated so multiplicities are all 1
    kept = []
    for r in roots:
        if all(abs(r - s) > 0.2 for s in kept):
            kept.append(r)
    coeffs = np.polynomial.polynomial.polyfromroots(kept)
    rs = all_roots(DensePoly(tuple(coeffs)))
    _match(rs.roots, kept, tol=1e-7)

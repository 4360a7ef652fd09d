import cmath

import numpy as np
import pytest

from orbitmult.errors import (
    AmbiguousGrouping,
    InsufficientOrbits,
    MultipleOrbitOnly,
)
from orbitmult.poly import CentPoly
from orbitmult.orbits import (
    Config,
    PeriodicOrbit,
    _group_into_cycles,
    count_exact_period_points,
    divisors,
    exact_period,
    orbit_multiplier,
    orbits_of_exact_period,
    periodic_points,
    refine_periodic_point,
    sample_config,
)

Z3 = CentPoly(3, (0, 0))
Z2 = CentPoly(2, (0,))


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]


def test_periodic_points_z3_m1():
    rs = periodic_points(Z3, 1)
    assert rs.total_count == 3
    got = sorted(rs.roots, key=lambda z: z.real)
    assert abs(got[0] + 1) < 1e-12 and abs(got[1]) < 1e-12 and abs(got[2] - 1) < 1e-12


def test_periodic_points_z3_m2():
    rs = periodic_points(Z3, 2)
    assert rs.total_count == 9
    expected = [0, 1, -1] + [
        cmath.exp(2j * cmath.pi * k / 8) for k in (1, 2, 3, 5, 6, 7)
    ]
    for e in expected:
        assert min(abs(r - e) for r in rs.roots) < 1e-10


def test_periodic_points_z2_m2():
    rs = periodic_points(Z2, 2)
    assert rs.total_count == 4
    expected = [0, 1, cmath.exp(2j * cmath.pi / 3), cmath.exp(4j * cmath.pi / 3)]
    for e in expected:
        assert min(abs(r - e) for r in rs.roots) < 1e-10


@pytest.mark.parametrize("n,m", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 2)])
def test_count_invariant_random(n, m):
    rng = np.random.default_rng(n * 10 + m)
    coeffs = tuple(rng.uniform(-1, 1, n - 1) + 1j * rng.uniform(-1, 1, n - 1))
    rs = periodic_points(CentPoly(n, coeffs), m)
    assert rs.total_count == n**m


def test_orbits_z3_fixed():
    orbs = orbits_of_exact_period(Z3, 1)
    assert len(orbs) == 3
    assert sorted(round(abs(o.multiplier)) for o in orbs) == [0, 3, 3]
    assert not any(o.multiple_flag for o in orbs)


def test_orbits_z3_period2():
    orbs = orbits_of_exact_period(Z3, 2)
    assert len(orbs) == 3
    for o in orbs:
        assert o.exact_period == 2
        assert abs(o.multiplier - 9) < 1e-10
        assert abs(o.points[1] - o.points[0] ** 3) < 1e-10


def test_orbits_z2_period2():
    orbs = orbits_of_exact_period(Z2, 2)
    assert len(orbs) == 1
    assert abs(orbs[0].multiplier - 4) < 1e-12


def test_orbit_counts_match_mobius_formula():
    for n, m in [(2, 3), (2, 4), (3, 2), (3, 4)]:
        p = CentPoly(n, (0.1,) * (n - 1))
        orbs = orbits_of_exact_period(p, m)
        assert len(orbs) == count_exact_period_points(n, m) // m


def test_orbit_partition_class_sizes():
    rng = np.random.default_rng(5)
    for m in (1, 2, 3, 4):
        coeffs = tuple(rng.uniform(-0.8, 0.8, 2) + 1j * rng.uniform(-0.8, 0.8, 2))
        orbs = orbits_of_exact_period(CentPoly(3, coeffs), m)
        assert all(len(o.points) == m for o in orbs)
        # the orbits partition the exact-period points
        total = count_exact_period_points(3, m)
        if not any(o.multiple_flag for o in orbs):
            assert len(orbs) * m == total


def test_divisor_consistency():
    # every exact-period-1 point reappears among points of period dividing 2
    fixed = periodic_points(Z3, 1)
    period2 = periodic_points(Z3, 2)
    for z in fixed.roots:
        assert min(abs(z - w) for w in period2.roots) < 1e-10


def test_multiplier_rotation_invariance():
    rng = np.random.default_rng(17)
    coeffs = tuple(rng.uniform(-0.9, 0.9, 2) + 1j * rng.uniform(-0.9, 0.9, 2))
    p = CentPoly(3, coeffs)
    for o in orbits_of_exact_period(p, 3):
        for shift in range(1, 3):
            rotated = o.points[shift:] + o.points[:shift]
            lam = orbit_multiplier(p, rotated[0], 3)
            assert abs(lam - o.multiplier) < 1e-10 * max(1.0, abs(o.multiplier))


def test_exact_period_divisor_test():
    assert exact_period(Z3, 1.0, 2) == 1  # fixed point also returns after 2
    w = cmath.exp(2j * cmath.pi / 8)
    assert exact_period(Z3, w, 2) == 2
    assert exact_period(Z3, 0.5, 2) is None


def test_refine_periodic_point():
    z = refine_periodic_point(Z3, 1.0000001, 1)
    assert abs(z - 1) < 1e-13
    w = refine_periodic_point(Z3, cmath.exp(2j * cmath.pi / 8) * 1.001, 2)
    assert abs(w - cmath.exp(2j * cmath.pi / 8)) < 1e-12


def test_grouping_rejects_incomplete_root_set():
    # drop one period-2 point: its preimage's image has no near match
    rs = periodic_points(Z3, 2)
    broken = tuple(r for r in rs.roots if abs(r - 1j) > 1e-6)
    with pytest.raises(AmbiguousGrouping):
        _group_into_cycles(Z3, broken)


def test_sample_config_z3_fixed_pair():
    cfg = sample_config(Z3, (1, 1))
    assert cfg.periods == (1, 1)
    # deterministic rule: orbits ordered by canonical point (-1 < 0 < 1)
    assert cfg.reps == (-1 + 0j, 0j)


def test_sample_config_two_period2_orbits():
    cfg = sample_config(Z3, (2, 2))
    assert cfg.periods == (2, 2)
    pts0 = set(
        (round(z.real, 8), round(z.imag, 8))
        for z in (cfg.reps[0], cfg.reps[0] ** 3)
    )
    pts1 = set(
        (round(z.real, 8), round(z.imag, 8))
        for z in (cfg.reps[1], cfg.reps[1] ** 3)
    )
    assert not pts0 & pts1


def test_sample_config_mixed_periods():
    cfg = sample_config(Z3, (1, 4))
    assert cfg.periods == (1, 4)
    assert exact_period(Z3, cfg.reps[1], 4) == 4


def test_sample_config_wrong_arity():
    with pytest.raises(ValueError):
        sample_config(Z3, (1,))


def test_sample_config_insufficient():
    # p(z) - z = (z - 1/2)^2 (z + 1): one parabolic double fixed point and
    # only one simple fixed orbit, so (1, 1) cannot be filled
    a = 0.5
    p = CentPoly(3, (2 * a**3, 1 - 3 * a**2))
    with pytest.raises(InsufficientOrbits) as exc:
        sample_config(p, (1, 1))
    assert exc.value.period == 1


def test_sample_config_multiple_only():
    # p(z) = z^3 + z has p(z) - z = z^3: a single triple fixed point
    p = CentPoly(3, (0, 1))
    with pytest.raises(MultipleOrbitOnly):
        sample_config(p, (1, 1))


def test_config_validation():
    with pytest.raises(ValueError):
        Config(Z3, (1,), (1,))  # arity
    with pytest.raises(ValueError):
        Config(Z3, (0.5, 0.2), (1, 1))  # not periodic
    with pytest.raises(ValueError):
        Config(Z3, (1, 1), (1, 1))  # same orbit twice


def test_config_json_roundtrip():
    cfg = sample_config(Z3, (1, 2))
    cfg2 = Config.from_json(cfg.to_json())
    assert cfg2.poly == cfg.poly
    assert cfg2.reps == cfg.reps
    assert cfg2.periods == cfg.periods


def test_periodic_orbit_validation():
    with pytest.raises(ValueError):
        PeriodicOrbit((0j,), 2, 1 + 0j, False)

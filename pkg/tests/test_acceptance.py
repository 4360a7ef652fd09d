"""Acceptance suite: every criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass/fail line
per criterion.  Shared expensive artifacts (certificates, constructions)
are computed once in session fixtures and timed there, so the runtime
assertions cover the actual computation.
"""

import time

import numpy as np
import pytest

from orbitmult.errors import UnitMultiplier
from orbitmult.poly import CentPoly
from orbitmult.orbits import Config, orbits_of_exact_period, periodic_points, sample_config
from orbitmult.multmap import (
    fixed_point_residual,
    independence_certificate,
    lambda_jacobian,
    lambda_jacobian_fd,
    lambda_map,
)
from orbitmult.hypmodel import attracting_audit, mu_eval, mu_multiplier, mu_param_from_multiplier
from orbitmult.jsonio import dumps_canonical
from orbitmult.steer import construct_attracting, continue_path, seed_fixed_attracting

CERT_CASES = [
    (3, (1, 1), 50),
    (3, (1, 2), 50),
    (3, (2, 2), 50),
    (3, (2, 3), 50),
    (4, (1, 2, 3), 20),
    (4, (2, 2, 2), 20),
]
CERT_SEED = 7

CONSTRUCT_CASES = [
    (2, (3,)),
    (3, (2, 3)),
    (3, (2, 2)),
    (3, (1, 4)),
    (4, (1, 2, 3)),
]
CONSTRUCT_SEED = 1


def _report(num, name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"\nacceptance criterion {num} [{name}]: {tag}{suffix}")
    assert ok, f"criterion {num} ({name}) failed{suffix}"


@pytest.fixture(scope="session")
def certificates():
    t0 = time.perf_counter()
    reports = {
        (n, periods): independence_certificate(n, periods, trials, CERT_SEED)
        for n, periods, trials in CERT_CASES
    }
    return reports, time.perf_counter() - t0


@pytest.fixture(scope="session")
def constructions():
    results = {}
    for n, periods in CONSTRUCT_CASES:
        t0 = time.perf_counter()
        cfg, path = construct_attracting(n, periods, rng_seed=CONSTRUCT_SEED)
        audit = attracting_audit(cfg.poly, max(periods))
        results[(n, periods)] = (cfg, path, audit, time.perf_counter() - t0)
    return results


def test_criterion_1_orbit_census():
    t0 = time.perf_counter()
    p = CentPoly(3, (0, 0))
    fixed = orbits_of_exact_period(p, 1)
    lams = sorted(abs(o.multiplier) for o in fixed)
    ok = len(fixed) == 3
    ok = ok and abs(lams[0]) < 1e-10
    ok = ok and all(abs(x - 3) < 1e-10 for x in lams[1:])
    period2 = orbits_of_exact_period(p, 2)
    ok = ok and len(period2) == 3
    ok = ok and all(abs(o.multiplier - 9) < 1e-10 for o in period2)
    ok = ok and periodic_points(p, 2).total_count == 9
    elapsed = time.perf_counter() - t0
    _report(1, "orbit census for z^3", ok and elapsed < 1.0,
            f"{elapsed:.2f}s")


def test_criterion_2_fixed_point_relation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    ok = True
    tested = 0
    for n in (3, 4, 5):
        for _ in range(100):
            radii = np.sqrt(rng.uniform(0, 1, n - 1))
            angles = rng.uniform(0, 2 * np.pi, n - 1)
            p = CentPoly(n, tuple(radii * np.exp(1j * angles)))
            try:
                resid = fixed_point_residual(p, unit_tol=1e-6)
            except UnitMultiplier:
                continue
            tested += 1
            ok = ok and abs(resid) < 1e-9
    elapsed = time.perf_counter() - t0
    _report(2, "fixed-point multiplier relation", ok and tested >= 270
            and elapsed < 10.0, f"{tested} samples, {elapsed:.2f}s")


def test_criterion_3_jacobian_correctness():
    t0 = time.perf_counter()
    cfg0 = Config(CentPoly(3, (0, 0)), (1, -1), (1, 1))
    jac0 = lambda_jacobian(cfg0)
    expected = np.array([[-3, -2], [3, -2]], dtype=complex)
    ok = np.abs(jac0.matrix - expected).max() < 1e-9
    ok = ok and abs(np.linalg.det(jac0.matrix) - 12) < 1e-9

    rng = np.random.default_rng(99)
    pools = {3: [(1, 1), (1, 2), (2, 2), (2, 3), (1, 3)],
             4: [(1, 1, 2), (1, 2, 2), (1, 2, 3), (2, 2, 3)]}
    checked = 0
    worst = 0.0
    while checked < 50:
        n = 3 if checked % 2 == 0 else 4
        periods = pools[n][checked % len(pools[n])]
        radii = np.sqrt(rng.uniform(0, 1, n - 1))
        angles = rng.uniform(0, 2 * np.pi, n - 1)
        p = CentPoly(n, tuple(radii * np.exp(1j * angles)))
        try:
            cfg = sample_config(p, periods)
            if any(abs(w - 1) <= 0.1 for w in lambda_map(cfg)):
                continue
            an = lambda_jacobian(cfg).matrix
            fd = lambda_jacobian_fd(cfg, step=1e-6).matrix
        except Exception:
            continue
        rel = (np.abs(an - fd) / np.maximum(np.abs(an), 1e-3)).max()
        worst = max(worst, rel)
        checked += 1
    ok = ok and worst < 1e-6
    elapsed = time.perf_counter() - t0
    _report(3, "analytic Jacobian vs finite differences",
            ok and elapsed < 30.0,
            f"50 configs, worst rel {worst:.2e}, {elapsed:.2f}s")


def test_criterion_4_rank_certificates(certificates):
    reports, elapsed = certificates
    ok = True
    details = []
    for (n, periods, trials) in CERT_CASES:
        rep = reports[(n, periods)]
        successes = [t for t in rep.trials if t["status"] == "ok"]
        full = all(t["rank"] == n - 1 for t in successes)
        ok = ok and rep.passed and full and 2 * len(successes) >= trials
        details.append(f"n={n},m={periods}:{len(successes)}/{trials}")
    ok = ok and elapsed < 300.0
    _report(4, "rank certificates", ok,
            "; ".join(details) + f", {elapsed:.1f}s")


def test_criterion_5_disk_model_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    ok = True
    for _ in range(1000):
        a = np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        a = complex(a * 0.999999)
        lam = mu_multiplier(a)
        ok = ok and abs(abs(lam) - abs(a)) < 1e-12
        ok = ok and abs(mu_param_from_multiplier(lam).a - a) < 1e-12
    for a in (0.5, -0.3 + 0.4j, 0.9j):
        ok = ok and mu_eval(a, 0) == 0
    elapsed = time.perf_counter() - t0
    _report(5, "disk-model multiplier identities", ok and elapsed < 1.0,
            f"{elapsed:.2f}s")


def test_criterion_6_construction_pipeline(constructions):
    ok = True
    details = []
    for (n, periods), (cfg, path, audit, elapsed) in constructions.items():
        got = sorted(o.exact_period for o in audit.attracting)
        case_ok = got == sorted(periods)
        case_ok = case_ok and audit.bound_ok
        case_ok = case_ok and len(audit.attracting) <= n - 1
        case_ok = case_ok and all(
            abs(o.multiplier - 0.5) < 1e-10 for o in audit.attracting
        )
        orbs = list(audit.attracting)
        for i in range(len(orbs)):
            for j in range(i + 1, len(orbs)):
                sep = min(
                    abs(a - b)
                    for a in orbs[i].points
                    for b in orbs[j].points
                )
                case_ok = case_ok and sep > 1e-8
        case_ok = case_ok and elapsed < 300.0
        ok = ok and case_ok
        details.append(f"n={n},m={periods}:{'ok' if case_ok else 'FAIL'}"
                       f"({elapsed:.1f}s)")
    _report(6, "attracting-cycle construction", ok, "; ".join(details))


def test_criterion_7_newton_roundtrip():
    t0 = time.perf_counter()
    cfg = seed_fixed_attracting(3, (0.5, 0.5), rng_seed=77)
    rng = np.random.default_rng(4242)
    ok = True
    worst = 0.0
    for _ in range(20):
        target = tuple(
            complex(np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
            for _ in range(2)
        )
        path = continue_path(cfg, target)
        ok = ok and path.status == "converged"
        if path.status == "converged":
            err = max(
                abs(w - t) for w, t in zip(lambda_map(path.final), target)
            )
            worst = max(worst, err)
            ok = ok and err < 1e-10
    elapsed = time.perf_counter() - t0
    _report(7, "multiplier-map inversion round-trip",
            ok and elapsed < 120.0,
            f"20 targets, worst {worst:.2e}, {elapsed:.1f}s")


def test_criterion_8_determinism(certificates, constructions):
    reports, _ = certificates
    ok = True
    for (n, periods, trials) in CERT_CASES:
        again = independence_certificate(n, periods, trials, CERT_SEED)
        ok = ok and dumps_canonical(again.to_json()) == dumps_canonical(
            reports[(n, periods)].to_json()
        )
    for (n, periods) in CONSTRUCT_CASES:
        cfg, path, audit, _ = constructions[(n, periods)]
        cfg2, path2 = construct_attracting(n, periods, rng_seed=CONSTRUCT_SEED)
        audit2 = attracting_audit(cfg2.poly, max(periods))
        ok = ok and dumps_canonical(cfg2.to_json()) == dumps_canonical(cfg.to_json())
        ok = ok and dumps_canonical(path2.to_json()) == dumps_canonical(path.to_json())
        ok = ok and dumps_canonical(audit2.to_json()) == dumps_canonical(audit.to_json())
    _report(8, "byte-identical reports under fixed seeds", ok)

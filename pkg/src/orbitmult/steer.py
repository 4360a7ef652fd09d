"""Inverting the multiplier map and constructing prescribed attracting cycles.

newton_invert solves multiplier_map(cfg) = target by damped Newton on the
free coefficients, re-refining the marked periodic points at every iterate.
continue_path walks a straight segment in multiplier space with adaptive
steps and a guard disk around the parabolic value 1.  On top of these,
construct_attracting realizes any period vector: seed a polynomial whose
n-1 best fixed points are attracting, push one multiplier at a time close
to a root of unity, pick up the satellite cycle born there, nudge it
attracting by a local disk search, and steer every multiplier back to 0.5.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    MaxIterExceeded,
    NoConvergence,
    OrbitLost,
    OrbitmultError,
    ParabolicObstruction,
    PersistenceLost,
    SatelliteNotFound,
    SeedSearchFailed,
    SingularJacobian,
)
from .multmap import (
    PARABOLIC_TOL,
    lambda_jacobian,
    lambda_map,
    orbit_multiplier,
    orbit_multiplier_gradient,
    refine_periodic_point,
)
from .orbits import RETURN_RTOL, UNITY_TOL, Config, exact_period, orbits_of_exact_period
from .poly import CentPoly, DensePoly, derivative, eval_poly, iterate
from .roots import all_roots

# Continuation aborts when a tracked multiplier's planned sub-segment comes
# within this distance of 1 (or of a caller-supplied root of unity).
PARABOLIC_DISK = 1e-6

# Stopping distance from the target root of unity during a period upgrade.
UPGRADE_EPS = 1e-3


@dataclass(frozen=True)
class SteerOptions:
    newton_tol: float = 1e-12
    max_newton_iter: int = 50
    initial_step: float = 0.1
    min_step: float = 1e-6
    damping: float = 1.0

    def __post_init__(self):
        if min(self.newton_tol, self.initial_step, self.min_step) <= 0:
            raise ValueError("tolerances and steps must be positive")
        if self.max_newton_iter < 1:
            raise ValueError("max_newton_iter must be >= 1")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")
        if self.min_step > self.initial_step:
            raise ValueError("min_step must not exceed initial_step")


@dataclass(frozen=True)
class SteerStep:
    poly: CentPoly
    cfg: Config
    multipliers: tuple[complex, ...]
    step_size: float


@dataclass(frozen=True)
class SteerPath:
    """Accepted continuation states; step_size records the coefficient-space
    distance moved, so consecutive polynomials differ by at most twice it."""

    steps: tuple[SteerStep, ...]
    status: str  # converged | stalled | parabolic_hit

    @property
    def final(self) -> Config:
        return self.steps[-1].cfg

    def endpoints_only(self) -> "SteerPath":
        if len(self.steps) <= 2:
            return self
        return SteerPath((self.steps[0], self.steps[-1]), self.status)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "steps": [
                {
                    "poly": s.poly.to_json(),
                    "multipliers": [[w.real, w.imag] for w in s.multipliers],
                    "step_size": s.step_size,
                }
                for s in self.steps
            ],
        }


def _coeff_distance(a: CentPoly, b: CentPoly) -> float:
    return math.sqrt(
        sum(abs(x - y) ** 2 for x, y in zip(a.coeffs, b.coeffs))
    )


def _min_inter_orbit_gap(cfg: Config) -> float:
    orbits = [cfg.orbit_points(j) for j in range(len(cfg.reps))]
    gap = math.inf
    for i in range(len(orbits)):
        for j in range(i + 1, len(orbits)):
            gap = min(
                gap,
                min(abs(a - b) for a in orbits[i] for b in orbits[j]),
            )
    return gap


def _retrack(cfg: Config, coeffs: tuple[complex, ...]) -> Config:
    """Carry the marked points to a nearby polynomial, or raise OrbitLost."""
    p_new = CentPoly(cfg.poly.degree, coeffs)
    gap = _min_inter_orbit_gap(cfg)
    reps = []
    for z, m in zip(cfg.reps, cfg.periods):
        z_new = refine_periodic_point(p_new, z, m)
        if abs(z_new - z) > 0.5 * gap:
            raise OrbitLost(
                f"marked point moved {abs(z_new - z):.3e}, more than half "
                f"the minimal inter-orbit gap {gap:.3e}"
            )
        if exact_period(p_new, z_new, m) != m:
            raise OrbitLost(
                f"marked point {z_new!r} no longer has exact period {m}"
            )
        reps.append(z_new)
    try:
        return Config(p_new, tuple(reps), cfg.periods)
    except ValueError as err:
        raise OrbitLost(str(err)) from err


def newton_invert(
    cfg: Config, target: tuple[complex, ...], opts: SteerOptions | None = None
) -> Config:
    """Damped Newton on the coefficients until the multipliers hit target."""
    opts = opts or SteerOptions()
    n = cfg.poly.degree
    target_v = np.asarray(target, dtype=np.complex128)
    if target_v.shape != (n - 1,):
        raise ValueError(f"target must have {n - 1} entries")
    if np.any(np.abs(target_v - 1.0) < PARABOLIC_TOL):
        raise ParabolicObstruction(
            "a target multiplier equals 1 up to tolerance; the periodicity "
            "constraint cannot be differentiated there"
        )

    lam = np.asarray(lambda_map(cfg), dtype=np.complex128)
    resid = float(np.abs(lam - target_v).max())
    if resid < opts.newton_tol:
        return cfg

    for _ in range(opts.max_newton_iter):
        jac = lambda_jacobian(cfg)
        if jac.sigma_min <= 1e-10 * jac.sigma_max:
            raise SingularJacobian(
                f"sigma_min/sigma_max = {jac.sigma_min / jac.sigma_max:.3e}"
            )
        delta = np.linalg.solve(jac.matrix, target_v - lam)

        damping = opts.damping
        accepted = None
        while damping > 1e-8:
            trial = tuple(
                c + damping * d for c, d in zip(cfg.poly.coeffs, delta)
            )
            try:
                cfg_try = _retrack(cfg, trial)
            except (OrbitLost, ParabolicObstruction, NoConvergence):
                damping *= 0.5
                continue
            lam_try = np.asarray(lambda_map(cfg_try), dtype=np.complex128)
            resid_try = float(np.abs(lam_try - target_v).max())
            if resid_try < resid or resid_try < opts.newton_tol:
                accepted = (cfg_try, lam_try, resid_try)
                break
            damping *= 0.5
        if accepted is None:
            raise MaxIterExceeded(
                f"damping underflow at residual {resid:.3e}"
            )
        cfg, lam, resid = accepted
        if resid < opts.newton_tol:
            return cfg
    raise MaxIterExceeded(
        f"no convergence to {opts.newton_tol:g} within "
        f"{opts.max_newton_iter} iterations (residual {resid:.3e})"
    )


def _point_segment_distance(a: complex, z0: complex, z1: complex) -> float:
    """Distance from a to the segment [z0, z1] in the complex plane."""
    d = z1 - z0
    dd = (d.real**2 + d.imag**2) or 1.0
    t = ((a - z0).real * d.real + (a - z0).imag * d.imag) / dd
    t = min(1.0, max(0.0, t))
    return abs(a - (z0 + t * d))


def continue_path(
    cfg: Config,
    target: tuple[complex, ...],
    opts: SteerOptions | None = None,
    avoid: tuple[complex, ...] = (1 + 0j,),
    trace: bool = True,
) -> SteerPath:
    """Predictor-corrector walk along the straight multiplier-space segment.

    The step (a fraction of the segment) halves on Newton failure, grows
    1.5x after three consecutive successes, and is clamped to
    [min_step, initial_step]; the walk stops with status parabolic_hit
    before any tracked multiplier's planned sub-segment would enter the
    guard disk around an avoided value (default: 1).
    """
    opts = opts or SteerOptions()
    n = cfg.poly.degree
    target_v = np.asarray(target, dtype=np.complex128)
    if target_v.shape != (n - 1,):
        raise ValueError(f"target must have {n - 1} entries")

    lam0 = np.asarray(lambda_map(cfg), dtype=np.complex128)
    steps = [SteerStep(cfg.poly, cfg, tuple(lam0), 0.0)]
    seg = target_v - lam0
    if float(np.abs(seg).max()) < opts.newton_tol:
        return SteerPath(tuple(steps), "converged")

    t = 0.0
    step = opts.initial_step
    streak = 0
    status = "stalled"
    reached = np.array(lam0, copy=True)
    while t < 1.0:
        if step < opts.min_step:
            status = "stalled"
            break
        t_next = min(1.0, t + step)
        waypoint = lam0 + t_next * seg
        hit = any(
            _point_segment_distance(a, reached[j], waypoint[j]) < PARABOLIC_DISK
            for j in range(n - 1)
            for a in avoid
        )
        if hit:
            status = "parabolic_hit"
            break
        try:
            cfg_new = newton_invert(cfg, tuple(waypoint), opts)
        except (SingularJacobian, MaxIterExceeded, OrbitLost,
                ParabolicObstruction, NoConvergence):
            step *= 0.5
            streak = 0
            continue
        moved = _coeff_distance(cfg_new.poly, cfg.poly)
        cfg = cfg_new
        steps.append(SteerStep(cfg.poly, cfg, lambda_map(cfg), moved))
        reached = waypoint
        t = t_next
        streak += 1
        if streak >= 3:
            step = min(step * 1.5, opts.initial_step)
            streak = 0
    if t >= 1.0:
        status = "converged"
    path = SteerPath(tuple(steps), status)
    return path if trace else path.endpoints_only()


def _fixed_point_candidates(
    n: int, rng: np.random.Generator, budget: int, good_enough: float = 0.8,
    chunk: int = 500,
) -> list[tuple[float, int, CentPoly, tuple[complex, ...]]]:
    """Draw random polynomials and rank them by the worst multiplier among
    their n-1 most attracting fixed points (ascending score == better)."""
    ranked = []
    drawn = 0
    while drawn < budget:
        take = min(chunk, budget - drawn)
        radii = np.sqrt(rng.uniform(0, 1, (take, n - 1)))
        angles = rng.uniform(0, 2 * np.pi, (take, n - 1))
        batch = radii * np.exp(1j * angles)
        for row in range(take):
            idx = drawn + row
            p = CentPoly(n, tuple(batch[row]))
            coeffs = list(p.full_coeffs())
            coeffs[1] -= 1.0
            try:
                rs = all_roots(DensePoly(tuple(coeffs)))
            except OrbitmultError:
                continue
            if any(k > 1 for k in rs.multiplicities):
                continue
            dp = derivative(p)
            lams = [eval_poly(dp, z) for z in rs.roots]
            order = sorted(range(n), key=lambda i: abs(lams[i]))[: n - 1]
            if any(abs(lams[i] - 1) < UNITY_TOL for i in order):
                continue
            score = max(abs(lams[i]) for i in order)
            reps = tuple(
                sorted((rs.roots[i] for i in order), key=lambda z: (z.real, z.imag))
            )
            ranked.append((score, idx, p, reps))
        drawn += take
        if ranked and min(r[0] for r in ranked) < good_enough:
            break
    ranked.sort(key=lambda r: (r[0], r[1]))
    return ranked


def seed_fixed_attracting(
    n: int,
    targets: tuple[complex, ...],
    rng_seed: int,
    opts: SteerOptions | None = None,
    sample_budget: int = 10000,
    max_attempts: int = 32,
) -> Config:
    """Random multistart for a polynomial whose n-1 marked fixed points carry
    the prescribed attracting multipliers."""
    cfg, _ = _seed_with_path(
        n, targets, rng_seed, opts=opts, sample_budget=sample_budget,
        max_attempts=max_attempts,
    )
    return cfg


def _seed_with_path(
    n, targets, rng_seed, opts=None, sample_budget=10000, max_attempts=32
) -> tuple[Config, SteerPath]:
    targets = tuple(complex(w) for w in targets)
    if len(targets) != n - 1:
        raise ValueError(f"need {n - 1} target multipliers")
    if any(abs(w) >= 1 for w in targets):
        raise ValueError("all target multipliers must be attracting (|w| < 1)")
    rng = np.random.default_rng(rng_seed)
    ranked = _fixed_point_candidates(n, rng, sample_budget)
    if not ranked:
        raise SeedSearchFailed(
            f"no usable fixed-point sample among {sample_budget} draws"
        )
    failures = 0
    for score, _, p, reps in ranked[:max_attempts]:
        try:
            cfg = Config(p, reps, (1,) * (n - 1))
        except ValueError:
            continue
        path = continue_path(cfg, targets, opts, trace=True)
        if path.status == "converged":
            return path.final, path
        failures += 1
    raise SeedSearchFailed(
        f"continuation failed from the {failures} best of "
        f"{len(ranked)} ranked samples (best score {ranked[0][0]:.3f})"
    )


def _orbit_sets_min_distance(points_a, points_b) -> float:
    return min(abs(a - b) for a in points_a for b in points_b)


def _find_satellite(
    cfg: Config, k: int, m: int, degree_cap: int | None = None
):
    """Locate the exact-period-m cycle spawned near the k-th marked fixed
    point once its multiplier sits next to exp(2*pi*i/m)."""
    p = cfg.poly
    z0 = cfg.reps[k]
    root = cmath.exp(2j * cmath.pi / m)
    lam_k = orbit_multiplier(p, z0, 1)
    radius = 10.0 * abs(lam_k - root) ** (1.0 / m)
    others = [
        cfg.orbit_points(j) for j in range(len(cfg.reps)) if j != k
    ]
    orbs = orbits_of_exact_period(p, m, degree_cap=degree_cap)
    for _ in range(6):
        cands = []
        for o in orbs:
            if o.multiple_flag:
                continue
            spread = max(abs(w - z0) for w in o.points)
            if spread > radius:
                continue
            if any(
                _orbit_sets_min_distance(o.points, pts) <= RETURN_RTOL
                for pts in others
            ):
                continue
            cands.append((spread, o))
        if cands:
            cands.sort(key=lambda t: t[0])
            return cands[0][1]
        radius *= 2.0
    raise SatelliteNotFound(
        f"no exact-period-{m} cycle within radius {radius:.3e} of {z0!r}"
    )


def _track_periodic_point(
    p_from: CentPoly, p_to: CentPoly, z: complex, m: int, move_cap: float,
) -> complex:
    """Carry a periodic point along the straight segment between two nearby
    polynomials.

    Near-parabolic cycles move like 1/(multiplier - 1) per unit coefficient
    change, so a single Newton refine after a finite jump can hop onto a
    different cycle.  Substeps double until every per-substep motion stays
    below move_cap.
    """
    n = p_from.degree
    c0 = np.asarray(p_from.coeffs, dtype=np.complex128)
    c1 = np.asarray(p_to.coeffs, dtype=np.complex128)
    substeps = 1
    while substeps <= 256:
        z_cur = complex(z)
        try:
            for s in range(1, substeps + 1):
                frac = s / substeps
                p_s = CentPoly(n, tuple(c0 + frac * (c1 - c0)))
                z_new = refine_periodic_point(p_s, z_cur, m)
                if abs(z_new - z_cur) > move_cap:
                    raise OrbitLost(
                        f"point moved {abs(z_new - z_cur):.3e} in one substep"
                    )
                z_cur = z_new
            if exact_period(p_to, z_cur, m) != m:
                raise OrbitLost("tracked point changed exact period")
            return z_cur
        except (OrbitLost, NoConvergence, ParabolicObstruction):
            substeps *= 2
    raise OrbitLost(
        f"could not track the periodic point from {z!r} across the "
        f"coefficient segment"
    )


def _max_modulus_search(
    cfg: Config, k: int, satellite, m: int,
    base_radius: float = 1e-4, doublings: int = 12, directions: int = 64,
):
    """Perturb the most effective coefficient until the satellite turns
    attracting while every other marked orbit stays attracting.

    Returns (new poly, refined other reps, refined satellite cycle).
    """
    p = cfg.poly
    n = p.degree
    _, grad = orbit_multiplier_gradient(p, satellite.points[0], m)
    kstar = int(np.argmax(np.abs(grad)))
    # per-substep motion cap from the satellite's own geometry
    z0 = cfg.reps[k]
    scale = min(abs(w - z0) for w in satellite.points)
    saw_attracting = False
    for i in range(doublings + 1):
        r = base_radius * (2.0**i)
        for j in range(directions):
            dc = r * cmath.exp(2j * cmath.pi * j / directions)
            coeffs = list(p.coeffs)
            coeffs[kstar] += dc
            p_try = CentPoly(n, tuple(coeffs))
            try:
                z_sat = _track_periodic_point(
                    p, p_try, satellite.points[0], m, 0.3 * scale
                )
                lam_sat = orbit_multiplier(p_try, z_sat, m)
            except OrbitmultError:
                continue
            if abs(lam_sat) >= 1.0 - 1e-6:
                continue
            sat_cycle = tuple(iterate(p_try, z_sat, m - 1)) if m > 1 else (z_sat,)
            ok = True
            new_reps = []
            for idx, (z, mi) in enumerate(zip(cfg.reps, cfg.periods)):
                if idx == k:
                    new_reps.append(None)
                    continue
                try:
                    zi = refine_periodic_point(p_try, z, mi)
                    if exact_period(p_try, zi, mi) != mi:
                        ok = False
                        break
                    if abs(orbit_multiplier(p_try, zi, mi)) >= 1.0:
                        ok = False
                        break
                    cycle = tuple(iterate(p_try, zi, mi - 1)) if mi > 1 else (zi,)
                    if _orbit_sets_min_distance(cycle, sat_cycle) <= RETURN_RTOL:
                        ok = False
                        break
                except OrbitmultError:
                    ok = False
                    break
                new_reps.append(zi)
            if not ok:
                saw_attracting = True
                continue
            return p_try, new_reps, sat_cycle
    if saw_attracting:
        raise PersistenceLost(
            "every perturbation that made the satellite attracting lost "
            "another marked attracting orbit"
        )
    raise SatelliteNotFound(
        f"disk search up to radius {base_radius * 2.0**doublings:.3e} found "
        f"no attracting satellite"
    )


def _upgrade_period(
    cfg: Config, k: int, m: int, opts: SteerOptions,
    degree_cap: int | None = None,
) -> tuple[Config, list[SteerStep]]:
    """Trade the k-th marked fixed point for an attracting exact-period-m
    cycle, then re-pin every multiplier at 0.5."""
    n = cfg.poly.degree
    root = cmath.exp(2j * cmath.pi / m)
    collected: list[SteerStep] = []

    # push the k-th multiplier next to the root of unity, others pinned
    lam = list(lambda_map(cfg))
    lam[k] = (1.0 - UPGRADE_EPS) * root
    path = continue_path(cfg, tuple(lam), opts, trace=True)
    if path.status != "converged":
        raise NoConvergence(
            f"period-upgrade steering toward exp(2*pi*i/{m}) ended with "
            f"status {path.status}"
        )
    collected.extend(path.steps[1:])
    cfg = path.final

    satellite = _find_satellite(cfg, k, m, degree_cap=degree_cap)
    if abs(satellite.multiplier) >= 1.0 - 1e-6:
        p_new, other_reps, sat_cycle = _max_modulus_search(cfg, k, satellite, m)
    else:
        p_new = cfg.poly
        other_reps = [
            z if idx != k else None for idx, z in enumerate(cfg.reps)
        ]
        sat_cycle = satellite.points

    sat_rep = min(sat_cycle, key=lambda z: (z.real, z.imag))
    reps = tuple(
        sat_rep if idx == k else z for idx, z in enumerate(other_reps)
    )
    periods = tuple(
        m if idx == k else mi for idx, mi in enumerate(cfg.periods)
    )
    try:
        cfg = Config(p_new, reps, periods)
    except ValueError as err:
        raise OrbitLost(f"satellite swap produced an invalid config: {err}")
    collected.append(
        SteerStep(cfg.poly, cfg, lambda_map(cfg),
                  _coeff_distance(cfg.poly, path.final.poly))
    )

    # steer the fresh cycle (and any perturbation drift) back to 0.5
    path2 = continue_path(cfg, (0.5 + 0j,) * (n - 1), opts, trace=True)
    if path2.status != "converged":
        raise NoConvergence(
            f"post-upgrade re-pinning ended with status {path2.status}"
        )
    collected.extend(path2.steps[1:])
    return path2.final, collected


def construct_attracting(
    n: int,
    periods: tuple[int, ...],
    rng_seed: int,
    opts: SteerOptions | None = None,
    trace: bool = True,
    sample_budget: int = 10000,
    degree_cap: int | None = None,
) -> tuple[Config, SteerPath]:
    """Build a degree-n polynomial with n-1 attracting cycles of the given
    exact periods, every multiplier pinned at 0.5.

    Returns the final configuration together with the recorded continuation
    path (endpoints only when trace=False).
    """
    opts = opts or SteerOptions()
    periods = tuple(int(m) for m in periods)
    if len(periods) != n - 1:
        raise ValueError(f"period vector must have {n - 1} entries")
    if any(m < 1 for m in periods):
        raise ValueError("periods must be positive")

    targets0 = (0.5 + 0j,) * (n - 1)
    cfg, path0 = _seed_with_path(
        n, targets0, rng_seed, opts=opts, sample_budget=sample_budget
    )
    steps: list[SteerStep] = list(path0.steps)
    for k, m in enumerate(periods):
        if m == 1:
            continue
        cfg, upgrade_steps = _upgrade_period(
            cfg, k, m, opts, degree_cap=degree_cap
        )
        steps.extend(upgrade_steps)

    lam = lambda_map(cfg)
    worst = max(abs(w - 0.5) for w in lam)
    if worst > 10 * opts.newton_tol:
        raise NoConvergence(
            "final multipliers missed 0.5", worst_residual=worst
        )
    path = SteerPath(tuple(steps), "converged")
    return cfg, (path if trace else path.endpoints_only())

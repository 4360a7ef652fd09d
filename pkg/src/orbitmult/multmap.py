"""The multiplier map on configurations and its coefficient Jacobian.

The map sends a configuration (polynomial with n-1 marked orbits) to the
vector of orbit multipliers.  Its derivative with respect to the free
coefficients c_0..c_{n-2} is assembled analytically: implicit
differentiation of the periodicity constraint moves the marked point, and
the product rule propagates that motion into the multiplier.  A central
finite-difference variant serves as an independent cross-check, and the
rank certificate samples random polynomials to exhibit nondegeneracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllTrialsFailed,
    AmbiguousGrouping,
    DegreeCapExceeded,
    InsufficientOrbits,
    MultipleOrbitOnly,
    NoConvergence,
    OrbitmultError,
    ParabolicObstruction,
    UnitMultiplier,
)
from .orbits import (
    Config,
    orbit_multiplier,
    refine_periodic_point,
    sample_config,
)
from .poly import CentPoly, DensePoly, derivative, eval_poly, iterate
from .roots import all_roots

# Implicit differentiation divides by (multiplier - 1); below this the
# configuration counts as parabolic and the Jacobian is refused.
PARABOLIC_TOL = 1e-9

# Relative singular-value threshold for full rank.
RANK_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class MultJacobian:
    """(n-1)x(n-1) complex Jacobian d(multiplier_j)/d(c_k) with its SVD data.

    Rows follow cfg.reps order; columns follow coefficients c_0..c_{n-2}.
    """

    matrix: np.ndarray
    singular_values: np.ndarray
    method: str

    @property
    def sigma_min(self) -> float:
        return float(self.singular_values[-1])

    @property
    def sigma_max(self) -> float:
        return float(self.singular_values[0])

    def rank(self, rtol: float = RANK_RTOL) -> int:
        return int(np.sum(self.singular_values > rtol * self.sigma_max))


def lambda_map(cfg: Config) -> tuple[complex, ...]:
    """Vector of the n-1 marked-orbit multipliers."""
    return tuple(
        orbit_multiplier(cfg.poly, z, m)
        for z, m in zip(cfg.reps, cfg.periods)
    )


def orbit_multiplier_gradient(
    p: CentPoly, z: complex, m: int
) -> tuple[complex, np.ndarray]:
    """(multiplier, d multiplier / d coefficients) for one marked orbit.

    For each coefficient c_k: the orbit-propagated coefficient sensitivity
    u fixes the marked point's motion via the implicit function theorem,
    dz = -u/(lam - 1); point sensitivities v then feed the product rule
        d lam = sum_i (p''(w_i) v_i + k w_i^{k-1}) prod_{l != i} p'(w_l),
    with the partial products formed prefix/suffix so superattracting
    orbits (p'(w_i) = 0) need no division.
    """
    n = p.degree
    dp = derivative(p)
    d2p = derivative(dp)
    pts = iterate(p, z, m - 1) if m > 1 else [complex(z)]
    dvals = [eval_poly(dp, w) for w in pts]
    lam = 1 + 0j
    for dv in dvals:
        lam *= dv
    if abs(lam - 1) < PARABOLIC_TOL:
        raise ParabolicObstruction(
            f"multiplier {lam!r} within {PARABOLIC_TOL:g} of 1"
        )

    # prefix[i] = prod_{l<i} p'(w_l), suffix[i] = prod_{l>i} p'(w_l)
    prefix = [1 + 0j] * (m + 1)
    for i, dv in enumerate(dvals):
        prefix[i + 1] = prefix[i] * dv
    suffix = [1 + 0j] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] * dvals[i]

    grad = np.zeros(n - 1, dtype=np.complex128)
    for k in range(n - 1):
        u = 0j
        for i, w in enumerate(pts):
            u = dvals[i] * u + w**k
        dz = -u / (lam - 1)
        v = dz
        dlam = 0j
        for i, w in enumerate(pts):
            dpk = k * w ** (k - 1) if k >= 1 else 0j
            dlam += (eval_poly(d2p, w) * v + dpk) * prefix[i] * suffix[i + 1]
            v = dvals[i] * v + w**k
        grad[k] = dlam
    return lam, grad


def lambda_jacobian(cfg: Config) -> MultJacobian:
    """Analytic Jacobian of the multiplier map at cfg."""
    n = cfg.poly.degree
    rows = np.zeros((n - 1, n - 1), dtype=np.complex128)
    for j, (z, m) in enumerate(zip(cfg.reps, cfg.periods)):
        _, rows[j] = orbit_multiplier_gradient(cfg.poly, z, m)
    sv = np.linalg.svd(rows, compute_uv=False)
    return MultJacobian(rows, sv, "analytic")


def lambda_jacobian_fd(cfg: Config, step: float = 1e-6) -> MultJacobian:
    """Central finite-difference Jacobian; the marked points are re-solved
    at each perturbed polynomial by Newton from their unperturbed values."""
    n = cfg.poly.degree
    rows = np.zeros((n - 1, n - 1), dtype=np.complex128)
    for k in range(n - 1):
        lam_plus = _multipliers_at_shift(cfg, k, step)
        lam_minus = _multipliers_at_shift(cfg, k, -step)
        rows[:, k] = (lam_plus - lam_minus) / (2.0 * step)
    sv = np.linalg.svd(rows, compute_uv=False)
    return MultJacobian(rows, sv, "finite_difference")


def _multipliers_at_shift(cfg: Config, k: int, h: float) -> np.ndarray:
    coeffs = list(cfg.poly.coeffs)
    coeffs[k] += h
    p = CentPoly(cfg.poly.degree, tuple(coeffs))
    lams = []
    for z, m in zip(cfg.reps, cfg.periods):
        z_new = refine_periodic_point(p, z, m)
        lams.append(orbit_multiplier(p, z_new, m))
    return np.asarray(lams, dtype=np.complex128)


def fixed_point_residual(p: CentPoly, unit_tol: float = 1e-12) -> complex:
    """sum over all n fixed points of 1/(1 - multiplier); identically 0.

    Requires all fixed points simple with multiplier away from 1.
    """
    n = p.degree
    coeffs = list(p.full_coeffs())
    coeffs[1] -= 1.0
    rs = all_roots(DensePoly(tuple(coeffs)))
    if any(k > 1 for k in rs.multiplicities):
        raise UnitMultiplier("a multiple fixed point has multiplier 1")
    dp = derivative(p)
    total = 0j
    for z in rs.roots:
        lam = eval_poly(dp, z)
        if abs(lam - 1) < unit_tol:
            raise UnitMultiplier(
                f"fixed point {z!r} has multiplier within {unit_tol:g} of 1"
            )
        total += 1.0 / (1.0 - lam)
    return total


_FAILURE_TAGS = {
    InsufficientOrbits: "insufficient_orbits",
    MultipleOrbitOnly: "multiple_orbit_only",
    ParabolicObstruction: "parabolic_obstruction",
    NoConvergence: "no_convergence",
    AmbiguousGrouping: "ambiguous_grouping",
    DegreeCapExceeded: "degree_cap_exceeded",
}


@dataclass(frozen=True)
class CertificateReport:
    """Per-trial rank evidence that the multiplier map is nondegenerate."""

    n: int
    periods: tuple[int, ...]
    trials: tuple[dict, ...]
    passed: bool
    worst_condition: float | None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "periods": list(self.periods),
            "trials": [dict(t) for t in self.trials],
            "pass": self.passed,
            "worst_condition": self.worst_condition,
        }


def independence_certificate(
    n: int,
    periods: tuple[int, ...],
    trials: int,
    rng_seed: int,
    degree_cap: int | None = None,
) -> CertificateReport:
    """Sample random polynomials and certify full rank of the Jacobian.

    Coefficients are drawn uniformly from the unit disk (NumPy PCG64 stream
    seeded with rng_seed), so reports are replayable.  The certificate
    passes when at least half the trials produce a Jacobian and every one
    of those has sigma_min > 1e-8 * sigma_max.
    """
    if n < 3:
        raise ValueError("certificate needs n >= 3")
    periods = tuple(int(m) for m in periods)
    if len(periods) != n - 1:
        raise ValueError(f"period vector must have {n - 1} entries")

    rng = np.random.default_rng(rng_seed)
    records = []
    successes = 0
    all_full_rank = True
    worst_cond = None
    taxonomy: dict[str, int] = {}
    for idx in range(trials):
        radii = np.sqrt(rng.uniform(0, 1, n - 1))
        angles = rng.uniform(0, 2 * np.pi, n - 1)
        coeffs = tuple(radii * np.exp(1j * angles))
        p = CentPoly(n, coeffs)
        try:
            cfg = sample_config(p, periods, degree_cap=degree_cap)
            jac = lambda_jacobian(cfg)
        except OrbitmultError as err:
            tag = _FAILURE_TAGS.get(type(err), "error")
            taxonomy[tag] = taxonomy.get(tag, 0) + 1
            records.append(
                {"seed_index": idx, "sigma_min": None, "rank": None,
                 "status": tag}
            )
            continue
        successes += 1
        full = jac.sigma_min > RANK_RTOL * jac.sigma_max
        all_full_rank = all_full_rank and full
        cond = jac.sigma_max / jac.sigma_min if jac.sigma_min > 0 else float("inf")
        worst_cond = cond if worst_cond is None else max(worst_cond, cond)
        records.append(
            {"seed_index": idx, "sigma_min": jac.sigma_min,
             "rank": jac.rank(), "status": "ok"}
        )
    if successes == 0:
        raise AllTrialsFailed(taxonomy)
    passed = all_full_rank and successes * 2 >= trials
    return CertificateReport(n, periods, tuple(records), passed, worst_cond)

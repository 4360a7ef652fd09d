"""All complex roots of a dense polynomial.

Simultaneous Aberth-Ehrlich iteration from a scaled circular start,
followed by a Newton polish and radius-based multiplicity clustering.
No randomized restarts: identical inputs and options always produce
identical output, and failures surface as NoConvergence so callers can
perturb inputs explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DerivativeVanished, NoConvergence
from .poly import DensePoly

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicity counts and residuals |q(root)|."""

    roots: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    residuals: tuple[float, ...]
    cluster_radius: float

    @property
    def total_count(self) -> int:
        return sum(self.multiplicities)

    def expanded(self) -> list[complex]:
        """Roots repeated according to multiplicity."""
        out: list[complex] = []
        for z, k in zip(self.roots, self.multiplicities):
            out.extend([z] * k)
        return out


def _horner_vec(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full_like(z, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def _backward_scale(abs_coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """sum_k |a_k| |z|^k, the natural error scale of Horner at z."""
    az = np.abs(z)
    acc = np.full_like(az, abs_coeffs[-1])
    for c in abs_coeffs[-2::-1]:
        acc = acc * az + c
    return acc


def all_roots(
    q: DensePoly, max_iter: int = 120, tol: float = 1e-12,
    cluster_radius: float | None = None,
) -> RootSet:
    """Find all degree-many roots of q, clustered by multiplicity.

    Convergence is declared when every approximation has backward error
    |q(z)| <= tol * sum|a_k||z|^k, i.e. z is an exact root of a relatively
    tol-close polynomial.
    """
    coeffs = np.asarray(q.coeffs, dtype=np.complex128)
    d = len(coeffs) - 1
    if d < 1 or coeffs[-1] == 0:
        raise ValueError("need degree >= 1 with nonzero leading coefficient")

    monic = coeffs / coeffs[-1]
    if d == 1:
        z = np.array([-monic[0]])
    else:
        z = _aberth(monic, max_iter, tol)
    z = _newton_polish(monic, z)

    abs_monic = np.abs(monic)
    resid = np.abs(_horner_vec(monic, z))
    bound = tol * np.maximum(_backward_scale(abs_monic, z), 1.0)
    if np.any(resid > bound):
        raise NoConvergence(
            f"root solve did not reach backward error {tol:g} "
            f"within {max_iter} iterations",
            worst_residual=float(resid.max()),
        )

    radius = (
        1e-6 * (1.0 + float(np.abs(z).max()))
        if cluster_radius is None
        else cluster_radius
    )
    roots, mults = _cluster(z, radius)
    residuals = tuple(float(abs(q(r))) for r in roots)
    return RootSet(roots, mults, residuals, radius)


def _aberth(monic: np.ndarray, max_iter: int, tol: float) -> np.ndarray:
    d = len(monic) - 1
    dcoeffs = monic[1:] * np.arange(1, d + 1)
    abs_monic = np.abs(monic)

    # Both the Cauchy bound 1 + max|a_k| and the Fujiwara bound
    # 2 max_k |a_k|^(1/(d-k)) enclose every root, so their minimum does too;
    # the Fujiwara one keeps the start circle small enough that evaluating a
    # high-degree polynomial there cannot overflow.
    cauchy = 1.0 + float(abs_monic[:-1].max())
    with np.errstate(divide="ignore"):
        fujiwara = 2.0 * float(
            np.max(abs_monic[:-1] ** (1.0 / np.arange(d, 0, -1)))
        )
    radius = max(min(cauchy, fujiwara), 1e-12)
    # Fixed angular offset breaks the symmetry of e.g. z^d - c.
    angles = 2.0 * np.pi * np.arange(d) / d + 0.4
    z = radius * np.exp(1j * angles)

    for _ in range(max_iter):
        p = _horner_vec(monic, z)
        bound = tol * np.maximum(_backward_scale(abs_monic, z), 1.0)
        if np.all(np.abs(p) <= bound):
            break
        dp = _horner_vec(dcoeffs, z)
        dp = np.where(dp == 0, _EPS, dp)
        newton = p / dp

        # sum_{j != i} 1/(z_i - z_j), blocked to bound memory at high degree
        s = np.empty_like(z)
        block = 256
        for lo in range(0, d, block):
            hi = min(lo + block, d)
            diff = z[lo:hi, None] - z[None, :]
            np.fill_diagonal(diff[:, lo:hi], np.inf)
            # collided approximations would divide by zero; nudge them apart
            diff[diff == 0] = _EPS
            s[lo:hi] = (1.0 / diff).sum(axis=1)

        denom = 1.0 - newton * s
        denom = np.where(denom == 0, _EPS, denom)
        z = z - newton / denom
    return z


def _newton_polish(monic: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    d = len(monic) - 1
    dcoeffs = monic[1:] * np.arange(1, d + 1)
    z = z.copy()
    for _ in range(steps):
        p = _horner_vec(monic, z)
        dp = _horner_vec(dcoeffs, z)
        ok = np.abs(dp) > 0
        step = np.where(ok, p / np.where(ok, dp, 1.0), 0.0)
        z_new = z - step
        # keep the polish monotone in |q|
        better = np.abs(_horner_vec(monic, z_new)) <= np.abs(p)
        z = np.where(better, z_new, z)
    return z


def _cluster(z: np.ndarray, radius: float) -> tuple[tuple, tuple]:
    """Greedy union of approximations within `radius`; clusters average."""
    order = np.lexsort((z.imag, z.real))
    zs = z[order]
    n = len(zs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(zs[i] - zs[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(complex(zs[i]))
    reps = [
        (sum(g) / len(g), len(g))
        for g in (groups[k] for k in sorted(groups))
    ]
    reps.sort(key=lambda t: (t[0].real, t[0].imag))
    roots = tuple(r for r, _ in reps)
    mults = tuple(m for _, m in reps)
    return roots, mults


def refine_root(q: DensePoly, z0: complex, tol: float = 1e-12,
                max_iter: int = 200) -> complex:
    """Newton from z0 until |q(z)| < tol or the step falls below eps scale."""
    dq = q.derivative()
    z = complex(z0)
    for _ in range(max_iter):
        fz = q(z)
        if abs(fz) < tol:
            return z
        dfz = dq(z)
        if abs(dfz) < 1e-280:
            raise DerivativeVanished(
                f"|q'({z!r})| = {abs(dfz):.3e}; Newton step undefined"
            )
        step = fz / dfz
        z -= step
        if abs(step) <= 4.0 * _EPS * (1.0 + abs(z)):
            return z
    raise NoConvergence(
        f"Newton did not reach |q| < {tol:g} in {max_iter} iterations",
        worst_residual=float(abs(q(z))),
    )

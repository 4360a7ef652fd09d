"""Periodic orbits of exact period m and marked-orbit configurations.

Points of period dividing m are the roots of p^(m)(z) - z.  They are
grouped into cycles by following p with nearest-root matching, filtered
down to exact period m by a divisor return test, and flagged as multiple
when the root finder clustered them or the multiplier sits at 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from .errors import (
    AmbiguousGrouping,
    InsufficientOrbits,
    MultipleOrbitOnly,
    NoConvergence,
    OrbitmultError,
    ParabolicObstruction,
)
from .poly import CentPoly, compose_self_minus_id, derivative, eval_poly, iterate
from .roots import RootSet, all_roots

# Dynamic return test |p^d(z) - z| < RETURN_RTOL * (1 + |z|).
RETURN_RTOL = 1e-8

# |multiplier - 1| below this marks a (near-)parabolic, hence multiple, cycle.
UNITY_TOL = 1e-6


@dataclass(frozen=True)
class PeriodicOrbit:
    """An ordered cycle, p(points[i]) = points[(i+1) % m], of exact period m."""

    points: tuple[complex, ...]
    exact_period: int
    multiplier: complex
    multiple_flag: bool

    def __post_init__(self):
        if len(self.points) != self.exact_period:
            raise ValueError("points length must equal exact_period")

    def min_distance_to(self, other: "PeriodicOrbit") -> float:
        return min(
            abs(a - b) for a in self.points for b in other.points
        )


@dataclass(frozen=True)
class Config:
    """A polynomial with n-1 marked periodic points on distinct orbits."""

    poly: CentPoly
    reps: tuple[complex, ...]
    periods: tuple[int, ...]

    def __post_init__(self):
        n = self.poly.degree
        reps = tuple(complex(z) for z in self.reps)
        periods = tuple(int(m) for m in self.periods)
        if len(reps) != n - 1 or len(periods) != n - 1:
            raise ValueError(
                f"need {n - 1} marked points and periods for degree {n}"
            )
        if any(m < 1 for m in periods):
            raise ValueError("periods must be positive")
        object.__setattr__(self, "reps", reps)
        object.__setattr__(self, "periods", periods)

        orbits = []
        for z, m in zip(reps, periods):
            orb = iterate(self.poly, z, m)
            if abs(orb[m] - z) > RETURN_RTOL * (1.0 + abs(z)):
                raise ValueError(
                    f"marked point {z!r} does not return after {m} steps "
                    f"(residual {abs(orb[m] - z):.3e})"
                )
            orbits.append(orb[:m])
        for i in range(len(orbits)):
            for j in range(i + 1, len(orbits)):
                sep = min(
                    abs(a - b) for a in orbits[i] for b in orbits[j]
                )
                if sep <= RETURN_RTOL:
                    raise ValueError(
                        f"marked orbits {i} and {j} are not disjoint "
                        f"(separation {sep:.3e})"
                    )

    def orbit_points(self, j: int) -> tuple[complex, ...]:
        """The full cycle generated by rep j."""
        return tuple(iterate(self.poly, self.reps[j], self.periods[j] - 1)) \
            if self.periods[j] > 1 else (self.reps[j],)

    def to_json(self) -> dict:
        return {
            "poly": self.poly.to_json(),
            "reps": [[z.real, z.imag] for z in self.reps],
            "periods": list(self.periods),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Config":
        return cls(
            CentPoly.from_json(obj["poly"]),
            tuple(complex(re, im) for re, im in obj["reps"]),
            tuple(int(m) for m in obj["periods"]),
        )


def divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def orbit_multiplier(p: CentPoly, z: complex, m: int) -> complex:
    """Product of p' along the length-m orbit of z."""
    dp = derivative(p)
    pts = iterate(p, z, m - 1) if m > 1 else [complex(z)]
    lam = 1 + 0j
    for w in pts:
        lam *= eval_poly(dp, w)
    return lam


def refine_periodic_point(
    p: CentPoly, z0: complex, m: int, tol: float = 1e-13, max_iter: int = 60
) -> complex:
    """Newton for p^(m)(z) = z starting at z0, via orbit propagation.

    Working with the iterated map directly stays accurate where the
    expanded coefficients of p^(m)(z) - z would be hopelessly
    ill-conditioned.
    """
    z = complex(z0)
    f = None
    for _ in range(max_iter):
        pts = iterate(p, z, m)
        f = pts[m] - z
        if abs(f) < tol * (1.0 + abs(z)):
            return z
        lam = orbit_multiplier(p, z, m)
        denom = lam - 1.0
        if abs(denom) < 1e-14:
            raise ParabolicObstruction(
                f"(p^m)'(z) - 1 = {denom!r} while refining a periodic point"
            )
        step = f / denom
        z -= step
        if abs(step) < 1e-16 * (1.0 + abs(z)):
            # outside the Julia set (p^m)' dwarfs the residual, so a tiny
            # step alone does not certify a root
            if abs(f) < RETURN_RTOL * (1.0 + abs(z)):
                return z
            break
    raise NoConvergence(
        "periodic-point refinement stalled",
        worst_residual=float(abs(f)) if f is not None else None,
    )


def periodic_points(
    p: CentPoly, m: int, degree_cap: int | None = None
) -> RootSet:
    """All n^m roots (with multiplicity) of p^(m)(z) - z.

    The expanded polynomial can be so ill-conditioned in the monomial basis
    (coefficients of size 1e10 and beyond) that the dense root solve places
    some roots wrong by more than their separation.  Every simple root is
    therefore polished by Newton on the iterated map, whose forward accuracy
    does not degrade with coefficient growth; polished duplicates are merged
    and missing cycle members recovered by closing the point set under
    application of p.
    """
    q = compose_self_minus_id(p, m, degree_cap=degree_cap)
    expected = p.degree**m
    out = None
    for max_iter, tol in ((120, 1e-12), (400, 1e-15)):
        try:
            rs = all_roots(q, max_iter=max_iter, tol=tol)
        except NoConvergence:
            continue
        out = _polish_and_close(p, m, q, rs, expected)
        if out is not None:
            return out
    raise NoConvergence(
        f"could not resolve all {expected} points of period dividing {m}"
    )


def _polish_and_close(
    p: CentPoly, m: int, q, rs: RootSet, expected: int
) -> RootSet | None:
    radius = rs.cluster_radius
    points: list[complex] = []
    mults: list[int] = []
    for z, mult in zip(rs.roots, rs.multiplicities):
        if mult == 1:
            try:
                z = refine_periodic_point(p, z, m)
            except ParabolicObstruction:
                pass  # near-parabolic: position is as good as it gets
            except NoConvergence:
                continue  # garbage approximation; closure recovers the root
            except OrbitmultError:
                pass
        # merge polished duplicates of the same simple root
        hit = next(
            (i for i, w in enumerate(points) if abs(w - z) <= radius), None
        )
        if hit is None:
            points.append(z)
            mults.append(mult)
        elif mult > 1 or mults[hit] > 1:
            return None  # a cluster overlapping another root is unresolvable
    # recover lost roots: the set must be closed under application of p
    for _ in range(50):
        if sum(mults) >= expected:
            break
        added = False
        for z in list(points):
            w = eval_poly(p, z)
            if any(abs(w - v) <= radius for v in points):
                continue
            try:
                w = refine_periodic_point(p, w, m)
            except OrbitmultError:
                continue
            if any(abs(w - v) <= radius for v in points):
                continue
            points.append(w)
            mults.append(1)
            added = True
        if not added:
            break
    if sum(mults) != expected:
        return None
    order = sorted(range(len(points)), key=lambda i: (points[i].real, points[i].imag))
    points = [points[i] for i in order]
    mults = [mults[i] for i in order]
    residuals = tuple(float(abs(q(z))) for z in points)
    return RootSet(tuple(points), tuple(mults), residuals, radius)


def exact_period(p: CentPoly, z: complex, m: int) -> int | None:
    """Smallest divisor d of m with |p^d(z) - z| < tol, or None."""
    orb = iterate(p, z, m)
    for d in divisors(m):
        if abs(orb[d] - z) < RETURN_RTOL * (1.0 + abs(z)):
            return d
    return None


def _group_into_cycles(p: CentPoly, roots: tuple[complex, ...]) -> list[list[int]]:
    """Partition root indices into p-cycles by nearest-root matching."""
    k = len(roots)
    if k == 1:
        return [[0]]
    min_sep = min(
        abs(roots[i] - roots[j]) for i in range(k) for j in range(i + 1, k)
    )
    visited = [False] * k
    cycles = []
    for start in range(k):
        if visited[start]:
            continue
        cycle = [start]
        visited[start] = True
        cur = start
        while True:
            w = eval_poly(p, roots[cur])
            nxt = min(range(k), key=lambda i: abs(roots[i] - w))
            dist = abs(roots[nxt] - w)
            if dist > 0.5 * min_sep:
                raise AmbiguousGrouping(
                    f"image of root {roots[cur]!r} is {dist:.3e} from the "
                    f"nearest root; half the minimal separation is "
                    f"{0.5 * min_sep:.3e}"
                )
            if nxt == start:
                break
            if visited[nxt]:
                raise AmbiguousGrouping(
                    f"cycle through {roots[start]!r} re-entered a foreign cycle"
                )
            cycle.append(nxt)
            visited[nxt] = True
            cur = nxt
        cycles.append(cycle)
    return cycles


def orbits_of_exact_period(
    p: CentPoly, m: int, degree_cap: int | None = None
) -> list[PeriodicOrbit]:
    """Cycles of exact period m, with multipliers and multiplicity flags.

    Grouping runs over the clustered roots of p^(m)(z) - z; a cycle is kept
    when the smallest divisor d of m with |p^d(z) - z| below tolerance is m
    itself.
    """
    rs = periodic_points(p, m, degree_cap=degree_cap)
    dp = derivative(p)
    cycles = _group_into_cycles(p, rs.roots)
    out = []
    for cycle in cycles:
        z0 = rs.roots[cycle[0]]
        d = exact_period(p, z0, m)
        if d != m:
            continue
        # canonical starting point: smallest (re, im)
        pts = [rs.roots[i] for i in cycle]
        start = min(range(len(pts)), key=lambda i: (pts[i].real, pts[i].imag))
        pts = pts[start:] + pts[:start]
        lam = 1 + 0j
        for w in pts:
            lam *= eval_poly(dp, w)
        clustered = any(rs.multiplicities[i] > 1 for i in cycle)
        multiple = clustered or abs(lam - 1) < UNITY_TOL
        out.append(PeriodicOrbit(tuple(pts), m, lam, multiple))
    out.sort(key=lambda o: (o.points[0].real, o.points[0].imag))
    return out


def sample_config(
    p: CentPoly, periods: tuple[int, ...], degree_cap: int | None = None
) -> Config:
    """Deterministically mark one orbit per period entry.

    Orbits of each exact period are taken in order of their canonical
    starting point (smallest real part, then imaginary part); the first
    unused non-multiple orbit serves each entry of `periods`.
    """
    n = p.degree
    periods = tuple(int(m) for m in periods)
    if len(periods) != n - 1:
        raise ValueError(f"period vector must have {n - 1} entries")

    by_period: dict[int, list[PeriodicOrbit]] = {}
    for m in sorted(set(periods)):
        orbs = orbits_of_exact_period(p, m, degree_cap=degree_cap)
        usable = [o for o in orbs if not o.multiple_flag]
        need = periods.count(m)
        if len(usable) < need:
            if not usable and orbs:
                raise MultipleOrbitOnly(m)
            raise InsufficientOrbits(m, need, len(usable))
        by_period[m] = usable

    used: dict[int, int] = {m: 0 for m in by_period}
    reps = []
    for m in periods:
        orb = by_period[m][used[m]]
        used[m] += 1
        reps.append(orb.points[0])
    return Config(p, tuple(reps), periods)


def count_exact_period_points(n: int, m: int) -> int:
    """Number of exact-period-m points of a generic degree-n map (inclusion-
    exclusion over divisors)."""

    def mobius(k: int) -> int:
        result, q, kk = 1, 2, k
        while q * q <= kk:
            if kk % q == 0:
                kk //= q
                if kk % q == 0:
                    return 0
                result = -result
            q += 1
        if kk > 1:
            result = -result
        return result

    return sum(mobius(m // d) * n**d for d in divisors(m))

"""Degree-2 Blaschke self-maps of the unit disk and the attracting audit.

The one-parameter family fixes 0, has a second zero at the parameter a,
and realizes every attracting multiplier value: the derivative at 0 has
modulus |a| and the relation between parameter and derivative inverts in
closed form.  The audit enumerates attracting cycles of a polynomial by
exhaustive orbit enumeration and checks the n-1 bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PoleProximity
from .orbits import PeriodicOrbit, orbits_of_exact_period
from .poly import CentPoly


@dataclass(frozen=True)
class BlaschkeParam:
    """Parameter a of the disk model; must satisfy |a| < 1."""

    a: complex

    def __post_init__(self):
        a = complex(self.a)
        if abs(a) >= 1:
            raise ValueError(f"|a| must be < 1, got |{a!r}| = {abs(a):.6g}")
        object.__setattr__(self, "a", a)


def mu_eval(a: BlaschkeParam | complex, z: complex) -> complex:
    """((1 - conj(a))/(1 - a)) * (z^2 - a z)/(1 - conj(a) z)."""
    a = a.a if isinstance(a, BlaschkeParam) else complex(BlaschkeParam(a).a)
    z = complex(z)
    denom = 1.0 - a.conjugate() * z
    if abs(denom) < 1e-14:
        raise PoleProximity(f"z = {z!r} is within 1e-14 of the pole of mu_a")
    if a == 0:
        return z * z
    unit = (1.0 - a.conjugate()) / (1.0 - a)
    return unit * (z * z - a * z) / denom


def mu_multiplier(a: BlaschkeParam | complex) -> complex:
    """Derivative of mu_a at its fixed point 0: (|a|^2 - a)/(1 - a)."""
    a = a.a if isinstance(a, BlaschkeParam) else complex(BlaschkeParam(a).a)
    return (abs(a) ** 2 - a) / (1.0 - a)


def mu_param_from_multiplier(lam: complex) -> BlaschkeParam:
    """Inverse of mu_multiplier on the open disk: a = (|lam|^2 - lam)/(1 - lam)."""
    lam = complex(lam)
    if abs(lam) >= 1:
        raise ValueError(f"|multiplier| must be < 1, got {abs(lam):.6g}")
    return BlaschkeParam((abs(lam) ** 2 - lam) / (1.0 - lam))


@dataclass(frozen=True)
class AttractingAudit:
    """All attracting cycles up to a period bound, plus the n-1 bound check."""

    attracting: tuple[PeriodicOrbit, ...]
    bound_ok: bool

    def periods(self) -> tuple[int, ...]:
        return tuple(sorted(o.exact_period for o in self.attracting))

    def to_json(self) -> dict:
        return {
            "attracting": [
                {
                    "period": o.exact_period,
                    "multiplier": [o.multiplier.real, o.multiplier.imag],
                }
                for o in self.attracting
            ],
            "bound_ok": self.bound_ok,
        }


def attracting_audit(
    p: CentPoly, max_period: int, degree_cap: int | None = None
) -> AttractingAudit:
    """Collect every orbit of exact period <= max_period with |multiplier| < 1.

    bound_ok reports whether the count respects the n-1 limit on attracting
    cycles of a degree-n polynomial.
    """
    found: list[PeriodicOrbit] = []
    for m in range(1, max_period + 1):
        for orb in orbits_of_exact_period(p, m, degree_cap=degree_cap):
            if abs(orb.multiplier) < 1:
                found.append(orb)
    found.sort(key=lambda o: (o.exact_period, o.points[0].real, o.points[0].imag))
    return AttractingAudit(tuple(found), len(found) <= p.degree - 1)

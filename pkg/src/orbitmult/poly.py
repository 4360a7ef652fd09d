"""Centered monic polynomials and dense complex polynomials.

A centered monic polynomial of degree n stores only its n-1 free
coefficients c_0..c_{n-2}; the z^n coefficient is 1 and the z^{n-1}
coefficient is 0 by construction, so those invariants cannot be broken.
Dense polynomials hold arbitrary ascending coefficient lists and house
expanded iterates like p(p(z)) - z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeCapExceeded, OrbitEscape

# Degree guard for iterated composition (n**m); overridable per call.
DEFAULT_DEGREE_CAP = 20000

# |z| beyond this is treated as escaped; keeps z**n finite for desk-scale n.
ESCAPE_RADIUS = 1e40


@dataclass(frozen=True)
class CentPoly:
    """p(z) = z^n + c_{n-2} z^{n-2} + ... + c_1 z + c_0, with n >= 2."""

    degree: int
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError(f"degree must be >= 2, got {self.degree}")
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) != self.degree - 1:
            raise ValueError(
                f"need {self.degree - 1} coefficients for degree "
                f"{self.degree}, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    def full_coeffs(self) -> tuple[complex, ...]:
        """All degree+1 coefficients ascending, including the 0 and 1."""
        return self.coeffs + (0j, 1 + 0j)

    def __call__(self, z: complex) -> complex:
        return eval_poly(self, z)

    def derivative(self) -> "DensePoly":
        return derivative(self)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CentPoly":
        coeffs = tuple(complex(re, im) for re, im in obj["coeffs"])
        return cls(int(obj["degree"]), coeffs)


@dataclass(frozen=True)
class DensePoly:
    """Dense polynomial with ascending coefficients, trailing zeros trimmed.

    The zero polynomial is represented as coeffs == (0j,).
    """

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        k = len(coeffs)
        while k > 1 and coeffs[k - 1] == 0:
            k -= 1
        coeffs = coeffs[:k] if k > 0 else (0j,)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0j,)

    def __call__(self, z: complex) -> complex:
        return eval_poly(self, z)

    def derivative(self) -> "DensePoly":
        return derivative(self)

    @classmethod
    def from_cent(cls, p: CentPoly) -> "DensePoly":
        return cls(p.full_coeffs())


def _ascending_coeffs(p: CentPoly | DensePoly) -> tuple[complex, ...]:
    if isinstance(p, CentPoly):
        return p.full_coeffs()
    return p.coeffs


def eval_poly(p: CentPoly | DensePoly, z: complex) -> complex:
    """Evaluate p at z by the Horner recurrence."""
    coeffs = _ascending_coeffs(p)
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def derivative(p: CentPoly | DensePoly) -> DensePoly:
    """Formal coefficient-wise derivative."""
    coeffs = _ascending_coeffs(p)
    if len(coeffs) == 1:
        return DensePoly((0j,))
    return DensePoly(tuple(k * coeffs[k] for k in range(1, len(coeffs))))


def add(p: DensePoly, q: DensePoly) -> DensePoly:
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, c in enumerate(b):
        out[k] += c
    return DensePoly(tuple(out))


def iterate(p: CentPoly, z: complex, m: int) -> list[complex]:
    """Forward orbit [z, p(z), ..., p^m(z)].

    Raises OrbitEscape (carrying the finite prefix) once an iterate leaves
    the escape radius, rather than overflowing to inf/nan.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    z = complex(z)
    orbit = [z]
    for _ in range(m):
        if abs(z) > ESCAPE_RADIUS or not (
            math.isfinite(z.real) and math.isfinite(z.imag)
        ):
            raise OrbitEscape(orbit)
        z = eval_poly(p, z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise OrbitEscape(orbit)
        orbit.append(z)
    return orbit


def compose_self_minus_id(
    p: CentPoly, m: int, degree_cap: int | None = None
) -> DensePoly:
    """Expanded coefficients of p^(m)(z) - z, degree exactly n^m.

    Built by repeated polynomial multiplication (Horner in the polynomial
    ring), no truncation; `degree_cap` guards memory.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    cap = DEFAULT_DEGREE_CAP if degree_cap is None else degree_cap
    total_degree = p.degree**m
    if total_degree > cap:
        raise DegreeCapExceeded(total_degree, cap)

    pc = np.asarray(p.full_coeffs(), dtype=np.complex128)
    comp = pc  # p composed with itself once
    for _ in range(m - 1):
        comp = _compose(pc, comp)
    out = comp.copy()
    out[1] -= 1.0
    return DensePoly(tuple(out))


def _compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Coefficients of outer(inner(z)), both ascending numpy arrays."""
    acc = np.array([outer[-1]], dtype=np.complex128)
    for c in outer[-2::-1]:
        acc = np.convolve(acc, inner)
        acc[0] += c
    return acc

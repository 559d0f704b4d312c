"""
qslkit Qubit Core Service
Exact 2x2 complex linear algebra and qubit-state primitives.

All values are immutable; every function here is a pure function of its inputs.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from qslkit.models import BlochVector

# Round-off slack for Hermiticity, trace and positivity checks
STATE_SLACK = 1e-12


@dataclass(frozen=True)
class Operator2:
    """Generic 2x2 complex operator; entries must be finite."""
    m00: complex
    m01: complex
    m10: complex
    m11: complex

    def __post_init__(self):
        for name in ("m00", "m01", "m10", "m11"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise ValueError(f"Operator entry {name} is not finite: {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, array) -> "Operator2":
        a = np.asarray(array, dtype=complex)
        if a.shape != (2, 2):
            raise ValueError(f"Expected a 2x2 array, got shape {a.shape}")
        return cls(a[0, 0], a[0, 1], a[1, 0], a[1, 1])

    @classmethod
    def zero(cls) -> "Operator2":
        return cls(0, 0, 0, 0)

    @classmethod
    def identity(cls) -> "Operator2":
        return cls(1, 0, 0, 1)

    def as_array(self) -> np.ndarray:
        return np.array([[self.m00, self.m01], [self.m10, self.m11]], dtype=complex)

    def entries(self) -> Tuple[complex, complex, complex, complex]:
        return self.m00, self.m01, self.m10, self.m11

    def dagger(self) -> "Operator2":
        return Operator2(
            self.m00.conjugate(), self.m10.conjugate(),
            self.m01.conjugate(), self.m11.conjugate(),
        )

    def trace(self) -> complex:
        return self.m00 + self.m11

    def det(self) -> complex:
        return self.m00 * self.m11 - self.m01 * self.m10

    def __add__(self, other: "Operator2") -> "Operator2":
        return Operator2(*(x + y for x, y in zip(self.entries(), other.entries())))

    def __sub__(self, other: "Operator2") -> "Operator2":
        return Operator2(*(x - y for x, y in zip(self.entries(), other.entries())))

    def __matmul__(self, other: "Operator2") -> "Operator2":
        return Operator2(
            self.m00 * other.m00 + self.m01 * other.m10,
            self.m00 * other.m01 + self.m01 * other.m11,
            self.m10 * other.m00 + self.m11 * other.m10,
            self.m10 * other.m01 + self.m11 * other.m11,
        )


@dataclass(frozen=True)
class DensityMatrix2(Operator2):
    """Hermitian, unit-trace, positive-semidefinite qubit state."""

    def __post_init__(self):
        super().__post_init__()
        if abs(self.m10 - self.m01.conjugate()) > STATE_SLACK:
            raise ValueError("Density matrix is not Hermitian")
        if abs(self.m00.imag) > STATE_SLACK or abs(self.m11.imag) > STATE_SLACK:
            raise ValueError("Density matrix diagonal is not real")
        if abs(self.trace() - 1.0) > STATE_SLACK:
            raise ValueError(f"Density matrix trace is {self.trace().real:.15g}, expected 1")
        low, _ = hermitian_eigenvalues(self)
        if low < -STATE_SLACK:
            raise ValueError(f"Density matrix has negative eigenvalue {low:.3e}")


def hermitian_eigenvalues(m: Operator2) -> Tuple[float, float]:
    """Ascending eigenvalues of the Hermitian part of a 2x2 operator."""
    a = m.m00.real
    d = m.m11.real
    b = 0.5 * (m.m01 + m.m10.conjugate())
    half_gap = math.hypot(0.5 * (a - d), abs(b))
    mean = 0.5 * (a + d)
    return mean - half_gap, mean + half_gap


def from_bloch(v: BlochVector) -> DensityMatrix2:
    """(I + v_x sx + v_y sy + v_z sz) / 2."""
    off = complex(v.v_x, -v.v_y) / 2
    return DensityMatrix2(
        (1 + v.v_z) / 2, off,
        off.conjugate(), (1 - v.v_z) / 2,
    )


def to_bloch(rho: DensityMatrix2) -> BlochVector:
    return BlochVector(
        v_x=2 * rho.m01.real,
        v_y=-2 * rho.m01.imag,
        v_z=(rho.m00 - rho.m11).real,
    )


def trace_product(a: Operator2, b: Operator2) -> complex:
    """tr(AB) without forming the product."""
    return a.m00 * b.m00 + a.m01 * b.m10 + a.m10 * b.m01 + a.m11 * b.m11


def purity(rho: DensityMatrix2) -> float:
    return trace_product(rho, rho).real


def relative_purity(rho_ref: DensityMatrix2, rho_now: DensityMatrix2) -> float:
    """tr(rho_now rho_ref) / tr(rho_ref^2); 1 when the states coincide."""
    return trace_product(rho_now, rho_ref).real / purity(rho_ref)


def coherence(v: BlochVector) -> float:
    """C = v_x^2 + v_y^2."""
    return v.v_x ** 2 + v.v_y ** 2


def singular_values(m: Operator2) -> Tuple[float, float]:
    """
    Descending singular values from the trace/determinant closed form.

    sigma^2 = (T +- sqrt(T^2 - 4 Delta)) / 2 with T = tr(M'M), Delta = |det M|^2.
    The radicand is evaluated as (h00 - h11)^2 + 4|h01|^2 for H = M'M, which
    equals T^2 - 4 Delta identically and is never negative; the small value is
    taken as |det M| / sigma_1.
    """
    a, b, c, d = m.entries()
    h00 = abs(a) ** 2 + abs(c) ** 2
    h11 = abs(b) ** 2 + abs(d) ** 2
    h01 = a.conjugate() * b + c.conjugate() * d
    total = h00 + h11
    radicand = (h00 - h11) ** 2 + 4 * abs(h01) ** 2
    sigma1 = math.sqrt(0.5 * (total + math.sqrt(radicand)))
    if sigma1 == 0.0:
        return 0.0, 0.0
    sigma2 = min(abs(m.det()) / sigma1, sigma1)
    return sigma1, sigma2


def trace_norm(m: Operator2) -> float:
    s1, s2 = singular_values(m)
    return s1 + s2


def hs_norm(m: Operator2) -> float:
    s1, s2 = singular_values(m)
    return math.hypot(s1, s2)

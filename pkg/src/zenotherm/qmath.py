"""2x2 complex linear algebra, density-matrix validation and the computational basis.

All matrices are ``(2, 2)`` complex128 numpy arrays written in the pointer
basis ``{|e0>, |e1>}``. Arrays handed out by this module are read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    HermiticityViolation,
    NegativeEigenvalue,
    NonHermitianInput,
    RangeError,
    TraceViolation,
    check_range,
)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_matrix(x) -> np.ndarray:
    """Coerce ``x`` to a finite, read-only 2x2 complex matrix."""
    m = np.array(x, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return _frozen(m)


def identity() -> np.ndarray:
    return _frozen(np.eye(2, dtype=np.complex128))


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _frozen(np.asarray(a) @ np.asarray(b))


def adjoint(a: np.ndarray) -> np.ndarray:
    return _frozen(np.conj(np.asarray(a)).T.copy())


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _frozen(np.asarray(a) + np.asarray(b))


def scale(c: complex, a: np.ndarray) -> np.ndarray:
    return _frozen(c * np.asarray(a))


def trace(a: np.ndarray) -> complex:
    return complex(a[0, 0] + a[1, 1])


def determinant(a: np.ndarray) -> complex:
    return complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])


def max_norm(a: np.ndarray) -> float:
    """Largest entry modulus."""
    return float(np.max(np.abs(a)))


def outer(ket: np.ndarray, bra: np.ndarray | None = None) -> np.ndarray:
    """``|ket><bra|``; ``bra`` defaults to ``ket``."""
    ket = np.asarray(ket, dtype=np.complex128)
    bra = ket if bra is None else np.asarray(bra, dtype=np.complex128)
    return _frozen(np.outer(ket, np.conj(bra)))


def hermiticity_defect(m: np.ndarray) -> float:
    return max_norm(np.asarray(m) - np.conj(np.asarray(m)).T)


def eigenvalues_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[float, float]:
    """Both eigenvalues of a Hermitian 2x2 matrix, ascending.

    Closed form: ``tr/2 -+ sqrt((tr/2)^2 - det)`` with the discriminant written
    as ``((m00 - m11)/2)^2 + |m01|^2`` so it can never go negative.
    """
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NonHermitianInput(f"matrix is not Hermitian (defect {defect:.3e})")
    d0 = m[0, 0].real
    d1 = m[1, 1].real
    off = 0.5 * (m[0, 1] + np.conj(m[1, 0]))
    half_tr = 0.5 * (d0 + d1)
    radius = math.hypot(0.5 * (d0 - d1), abs(off))
    return (half_tr - radius, half_tr + radius)


@dataclass(frozen=True)
class DensityMatrix:
    """A validated qubit state. Build it through :func:`check_density`."""

    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", as_matrix(self.m))

    def population(self, ket: np.ndarray) -> float:
        """``<ket|rho|ket>`` (real part; the imaginary part is rounding noise)."""
        ket = np.asarray(ket)
        return float(np.real(np.conj(ket) @ self.m @ ket))

    def coherence(self, bra: np.ndarray, ket: np.ndarray) -> complex:
        return complex(np.conj(np.asarray(bra)) @ self.m @ np.asarray(ket))


def check_density(m) -> DensityMatrix:
    """Validate ``m`` as a density matrix.

    Checks run in order Hermiticity, trace, positivity; the first failure is
    raised with its measured defect.
    """
    m = as_matrix(m)
    herm = hermiticity_defect(m)
    if herm > HERMITIAN_TOL:
        raise HermiticityViolation(herm)
    tr_defect = trace(m) - 1.0
    if abs(tr_defect) > TRACE_TOL:
        raise TraceViolation(abs(tr_defect))
    lo, _ = eigenvalues_hermitian(m)
    if lo < -PSD_TOL:
        raise NegativeEigenvalue(lo)
    return DensityMatrix(m)


def pure_state(ket: np.ndarray) -> DensityMatrix:
    return check_density(outer(ket))


@dataclass(frozen=True)
class ComputationalBasis:
    """Measurement/storage basis rotated from the pointer basis by (theta, phi)."""

    theta: float
    phi: float
    ket0: np.ndarray = field(repr=False, compare=False)
    ket1: np.ndarray = field(repr=False, compare=False)

    def ket(self, j: int) -> np.ndarray:
        if j not in (0, 1):
            raise RangeError(f"basis label must be 0 or 1, got {j!r}")
        return self.ket0 if j == 0 else self.ket1

    def projector(self, j: int) -> np.ndarray:
        return outer(self.ket(j))


def make_basis(theta: float, phi: float = 0.0) -> ComputationalBasis:
    """Build ``|0> = cos(theta)|e0> + e^{i phi} sin(theta)|e1>`` and
    ``|1> = sin(theta)|e0> - e^{i phi} cos(theta)|e1>``.

    Angles outside ``theta in [0, pi/2]``, ``phi in [0, 2 pi)`` are rejected.
    """
    theta = check_range("theta", theta, 0.0, math.pi / 2)
    phi = check_range("phi", phi, 0.0, 2 * math.pi, hi_open=True)
    c, s = math.cos(theta), math.sin(theta)
    phase = complex(math.cos(phi), math.sin(phi))
    ket0 = _frozen(np.array([c, phase * s], dtype=np.complex128))
    ket1 = _frozen(np.array([s, -phase * c], dtype=np.complex128))
    return ComputationalBasis(theta, phi, ket0, ket1)


POINTER_BASIS = make_basis(0.0, 0.0)

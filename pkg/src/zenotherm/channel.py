"""Generalized amplitude damping as a Markovian semigroup.

The decay parameter is ``gamma(t) = 1 - exp(-t/tau)``, the only form compatible
with ``E_{t+t'} = E_{t'} E_t``. States are propagated two independent ways:
the four-operator Kraus sum (:func:`apply`) and the explicit matrix of the
propagated state (:func:`apply_closed_form`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmath
from .errors import check_range
from .qmath import DensityMatrix

COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Thermal ground-state population ``p`` and relaxation time ``tau``."""

    p: float
    tau: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "p", check_range("p", self.p, 0.5, 1.0))
        object.__setattr__(self, "tau", check_range("tau", self.tau, 0.0, math.inf, lo_open=True, hi_open=True))

    @classmethod
    def from_temperature(cls, energy_over_kb: float, temperature: float, tau: float = 1.0) -> "ChannelParams":
        """Thermal population of a two-level system with gap ``E``.

        ``energy_over_kb`` is ``E/k_B`` in the same units as ``temperature``;
        ``temperature == 0`` gives ``p = 1``.
        """
        e = check_range("energy_over_kb", energy_over_kb, 0.0, math.inf, lo_open=True, hi_open=True)
        temp = check_range("temperature", temperature, 0.0, math.inf)
        if temp == math.inf:
            return cls(0.5, tau)
        if temp == 0.0:
            return cls(1.0, tau)
        return cls(1.0 / (1.0 + math.exp(-e / temp)), tau)


def gamma(t: float, tau: float = 1.0) -> float:
    """Decay probability after time ``t``: ``1 - exp(-t/tau)``."""
    t = check_range("t", t, 0.0, math.inf)
    tau = check_range("tau", tau, 0.0, math.inf, lo_open=True, hi_open=True)
    return -math.expm1(-t / tau)


@dataclass(frozen=True)
class KrausSet:
    k: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]

    def completeness_defect(self) -> float:
        total = sum(qmath.adjoint(ki) @ ki for ki in self.k)
        return qmath.max_norm(total - np.eye(2))

    def __iter__(self):
        return iter(self.k)


def kraus_set(p: float, gamma: float) -> KrausSet:
    """The four Kraus operators of the generalized amplitude damping channel."""
    p = check_range("p", p, 0.5, 1.0)
    g = check_range("gamma", gamma, 0.0, 1.0)
    return _kraus(p, g, math.sqrt(1.0 - g))


def kraus_set_at(params: ChannelParams, t: float) -> KrausSet:
    """Kraus operators after time ``t``.

    ``sqrt(1 - gamma)`` is taken as ``exp(-t/2tau)`` rather than from ``gamma``:
    for ``t >> tau`` the subtraction ``1 - gamma`` would round to zero.
    """
    g = gamma(t, params.tau)
    return _kraus(params.p, g, math.exp(-0.5 * t / params.tau))


def _kraus(p: float, g: float, keep: float) -> KrausSet:
    sp, sq = math.sqrt(p), math.sqrt(1.0 - p)
    sg = math.sqrt(g)
    k0 = qmath.as_matrix([[sp, 0.0], [0.0, sp * keep]])
    k1 = qmath.as_matrix([[0.0, sp * sg], [0.0, 0.0]])
    k2 = qmath.as_matrix([[sq * keep, 0.0], [0.0, sq]])
    k3 = qmath.as_matrix([[0.0, 0.0], [sq * sg, 0.0]])
    return KrausSet((k0, k1, k2, k3))


def _raw_kraus_apply(m: np.ndarray, ks: KrausSet) -> np.ndarray:
    out = np.zeros((2, 2), dtype=np.complex128)
    for k in ks:
        out += k @ m @ np.conj(k).T
    return out


def apply(rho: DensityMatrix, params: ChannelParams, t: float) -> DensityMatrix:
    """Propagate ``rho`` for time ``t`` with the Kraus sum."""
    ks = kraus_set_at(params, t)
    return qmath.check_density(_raw_kraus_apply(rho.m, ks))


def apply_closed_form(rho: DensityMatrix, params: ChannelParams, t: float) -> DensityMatrix:
    """Propagate ``rho`` for time ``t`` by writing the output matrix directly.

    With ``rho = [[a, b], [b*, 1-a]]`` and ``f = exp(-t/tau)`` the result is
    ``[[p - f(p-a), b sqrt(f)], [b* sqrt(f), 1 - p + f(p-a)]]``.
    """
    t = check_range("t", t, 0.0, math.inf)
    p = params.p
    f = math.exp(-t / params.tau)
    a = rho.m[0, 0].real
    b = rho.m[0, 1]
    root = math.exp(-0.5 * t / params.tau)
    out = np.array(
        [[p - f * (p - a), b * root],
         [np.conj(b) * root, (1.0 - p) + f * (p - a)]],
        dtype=np.complex128,
    )
    return qmath.check_density(out)


def thermal_state(params: ChannelParams) -> DensityMatrix:
    """Fixed point ``diag(p, 1-p)``."""
    return qmath.check_density(np.diag([params.p, 1.0 - params.p]))


def random_density(rng: np.random.Generator) -> DensityMatrix:
    """Density matrix drawn uniformly from the Bloch ball."""
    while True:
        r = rng.uniform(-1.0, 1.0, size=3)
        if r @ r <= 1.0:
            break
    x, y, z = r
    m = 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])
    return qmath.check_density(m)


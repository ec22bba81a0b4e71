"""Measurement-interleaved dynamics.

:func:`run` is the brute-force simulator: it propagates the full density
matrix through the channel for ``delta`` and then dephases it in the
computational basis, ``steps`` times. Everything in :mod:`zenotherm.analytic`
is checked against it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from . import channel, qmath
from .channel import ChannelParams
from .errors import RangeError, check_range
from .qmath import ComputationalBasis, DensityMatrix


@dataclass(frozen=True)
class ProtocolConfig:
    channel: ChannelParams
    basis: ComputationalBasis
    delta: float
    steps: int
    initial_bit: int = 0

    def __post_init__(self):
        object.__setattr__(self, "delta", check_range("delta", self.delta, 0.0, math.inf, lo_open=True, hi_open=True))
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 1:
            raise RangeError(f"steps must be a positive integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))
        if self.initial_bit not in (0, 1):
            raise RangeError(f"initial_bit must be 0 or 1, got {self.initial_bit!r}")

    @property
    def total_time(self) -> float:
        return self.steps * self.delta


@dataclass(frozen=True)
class PopulationSeries:
    times: np.ndarray
    a: np.ndarray
    final_state: DensityMatrix
    # states right before each measurement; filled only when run(probe=True)
    pre_measurement: tuple[DensityMatrix, ...] = field(default=(), repr=False)


class TransitionProbs(NamedTuple):
    """``p01``: 1 -> 0 within one interval; ``p10``: 0 -> 1."""

    p01: float
    p10: float

    @property
    def p00(self) -> float:
        return 1.0 - self.p10

    @property
    def p11(self) -> float:
        return 1.0 - self.p01


def measure_nonselective(rho: DensityMatrix, basis: ComputationalBasis) -> DensityMatrix:
    """``sum_j P_j rho P_j`` with ``P_j = |j><j|``: drop coherences, keep populations."""
    out = np.zeros((2, 2), dtype=np.complex128)
    for j in (0, 1):
        proj = basis.projector(j)
        out += proj @ rho.m @ proj
    return qmath.check_density(out)


def run(config: ProtocolConfig, probe: bool = False) -> PopulationSeries:
    """Simulate ``steps`` rounds of (evolve for delta, measure).

    ``a[k]`` is ``<0|rho|0>`` right after the k-th measurement, at ``t = k delta``.
    """
    basis = config.basis
    ket0 = basis.ket0
    rho = qmath.pure_state(basis.ket(config.initial_bit))
    a = np.empty(config.steps + 1)
    a[0] = 1.0 - config.initial_bit
    probes = []
    for k in range(1, config.steps + 1):
        rho = channel.apply(rho, config.channel, config.delta)
        if probe:
            probes.append(rho)
        rho = measure_nonselective(rho, basis)
        a[k] = rho.population(ket0)
    times = config.delta * np.arange(config.steps + 1)
    return PopulationSeries(times, a, rho, tuple(probes))


def run_many(configs: Iterable[ProtocolConfig], workers: int | None = None) -> list[PopulationSeries]:
    """Run independent configs, results in input order."""
    configs = list(configs)
    if workers is None or workers <= 1:
        return [run(c) for c in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, configs))


def transition_probs(delta: float, params: ChannelParams, theta: float) -> TransitionProbs:
    """Closed-form one-interval transition probabilities between |0> and |1>."""
    delta = check_range("delta", delta, 0.0, math.inf)
    theta = check_range("theta", theta, 0.0, math.pi / 2)
    x = delta / params.tau
    # 1 - e^{-x/2} and 1 - e^{-x}
    g_half = -math.expm1(-0.5 * x)
    g_full = -math.expm1(-x)
    c2 = math.cos(2 * theta)
    c4 = math.cos(4 * theta)
    bias = 2 * (2 * params.p - 1) * c2
    p01 = 0.25 * ((1 - c4) * g_half + (1 + bias + c4) * g_full)
    p10 = 0.25 * ((1 - c4) * g_half + (1 - bias + c4) * g_full)
    return TransitionProbs(p01, p10)


def stay_probs(delta: float, params: ChannelParams, theta: float) -> tuple[float, float]:
    """``(P_0|0, P_1|1)`` written directly in terms of gamma, cos(2 theta), cos(4 theta)."""
    theta = check_range("theta", theta, 0.0, math.pi / 2)
    g = channel.gamma(delta, params.tau)
    keep = math.sqrt(1 - g)
    c2 = math.cos(2 * theta)
    c4 = math.cos(4 * theta)
    common = 3 - g + keep + (1 - g - keep) * c4
    bias = 2 * g * (2 * params.p - 1) * c2
    return 0.25 * (common + bias), 0.25 * (common - bias)


def transition_probs_oracle(delta: float, params: ChannelParams, basis: ComputationalBasis) -> TransitionProbs:
    """Transition probabilities by propagating ``|j><j|`` through the channel and projecting."""
    out = {}
    for j in (0, 1):
        rho = channel.apply(qmath.pure_state(basis.ket(j)), params, delta)
        out[j] = rho.population(basis.ket(1 - j))
    return TransitionProbs(p01=out[1], p10=out[0])


class RecurrenceSolution(NamedTuple):
    iterated: np.ndarray
    closed: np.ndarray
    # True when p01 + p10 == 0: no evolution, a_n = a0
    frozen: bool


def recurrence_solve(p01: float, p10: float, a0: float, n: int) -> RecurrenceSolution:
    """Populations ``a_0..a_n`` of ``a_{k+1} = p01 + a_k (1 - p01 - p10)``.

    Returned both by direct iteration and by the geometric-series closed form
    ``a_n = a_inf - (a_inf - a0) beta^n``.
    """
    p01 = check_range("p01", p01, 0.0, 1.0)
    p10 = check_range("p10", p10, 0.0, 1.0)
    if p01 + p10 > 1.0 + 1e-15:
        raise RangeError(f"p01 + p10 = {p01 + p10!r} exceeds 1")
    if a0 not in (0, 1):
        raise RangeError(f"a0 must be 0 or 1, got {a0!r}")
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise RangeError(f"n must be a non-negative integer, got {n!r}")
    n = int(n)
    beta = 1.0 - (p01 + p10)

    iterated = np.empty(n + 1)
    iterated[0] = a0
    for k in range(n):
        iterated[k + 1] = p01 + beta * iterated[k]

    total = p01 + p10
    if total == 0.0:
        return RecurrenceSolution(iterated, np.full(n + 1, float(a0)), True)
    a_inf = p01 / total
    closed = a_inf - (a_inf - a0) * beta ** np.arange(n + 1)
    return RecurrenceSolution(iterated, closed, False)

"""Closed-form populations and success probabilities.

Notation: ``theta`` is the angle between pointer and computational basis,
``p`` the thermal ground population, ``tau`` the relaxation time, ``delta``
the interval between measurements and ``a0`` the initial population of
``|0>`` (1 when bit 0 is stored, 0 for bit 1). Everything is evaluated in
units of ``tau``: ``x = t/tau`` and ``d = delta/tau``.

Exact finite-interval results hold only at ``t = n * delta``;
:func:`a_general` and :func:`p_suc_general` refuse other times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonCommensurateTime, RangeError, check_range

COMMENSURATE_RTOL = 1e-9
BOUND_SLACK = 1e-12


def _theta(theta: float) -> float:
    return check_range("theta", theta, 0.0, math.pi / 2)


def _p(p: float) -> float:
    return check_range("p", p, 0.5, 1.0)


def _tau(tau: float) -> float:
    return check_range("tau", tau, 0.0, math.inf, lo_open=True, hi_open=True)


def _delta(delta: float) -> float:
    return check_range("delta", delta, 0.0, math.inf, lo_open=True, hi_open=True)


def _a0(a0) -> int:
    if a0 not in (0, 1):
        raise RangeError(f"a0 must be 0 or 1, got {a0!r}")
    return int(a0)


def _t(t):
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0):
        raise RangeError("t must be finite and non-negative")
    return t


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def commensurate_steps(t: float, delta: float) -> int:
    """Return ``n`` with ``t = n * delta`` (relative tolerance 1e-9) or raise."""
    t = float(t)
    delta = _delta(delta)
    if not math.isfinite(t) or t < 0:
        raise RangeError(f"t must be finite and non-negative, got {t!r}")
    ratio = t / delta
    n = round(ratio)
    if abs(ratio - n) > COMMENSURATE_RTOL * max(1.0, ratio):
        raise NonCommensurateTime(t, delta)
    return int(n)


def _trig(theta: float) -> tuple[float, float]:
    """``(sin^2(2 theta), cos(2 theta))``."""
    return math.sin(2 * theta) ** 2, math.cos(2 * theta)


def _log_base(d: float, theta: float) -> float:
    """``log(sin^2(2th) e^{-d/2} + cos^2(2th) e^{-d})``, accurate for small ``d``."""
    s2, c = _trig(theta)
    return math.log1p(s2 * math.expm1(-0.5 * d) + c * c * math.expm1(-d))


def transition_base(delta: float, theta: float, tau: float = 1.0) -> float:
    """Per-interval contraction ``1 - (P_0|1 + P_1|0)``."""
    return math.exp(_log_base(_delta(delta) / _tau(tau), _theta(theta)))


def a_inf(delta: float, theta: float, p: float, tau: float = 1.0) -> float:
    """Long-time population of ``|0>`` for measurement interval ``delta``.

    The ratio ``(1 - e^{-d/2}) / (1 - e^{-d})`` is evaluated as
    ``1 / (1 + e^{-d/2})``, which has no cancellation as ``d -> 0``.
    """
    d = _delta(delta) / _tau(tau)
    s2, c = _trig(_theta(theta))
    ratio = 1.0 / (1.0 + math.exp(-0.5 * d))
    return 0.5 * (1.0 + (2 * _p(p) - 1) * c / (c * c + s2 * ratio))


def a_inf_zeno(theta: float, p: float) -> float:
    c = math.cos(2 * _theta(theta))
    return 0.5 + (2 * _p(p) - 1) * c / (1 + c * c)


def a_inf_free(theta: float, p: float) -> float:
    return 0.5 * (1 + (2 * _p(p) - 1) * math.cos(2 * _theta(theta)))


def tau_eff(theta: float, tau: float = 1.0) -> float:
    """Effective relaxation time under infinitely frequent measurement.

    Written as ``2 tau / (1 + cos^2(2 theta))``, equal to
    ``4 tau / (3 + cos(4 theta))``.
    """
    c = math.cos(2 * _theta(theta))
    return 2 * _tau(tau) / (1 + c * c)


def a_general(t: float, delta: float, theta: float, p: float, tau: float = 1.0, a0: int = 1) -> float:
    """Exact population of ``|0>`` at ``t = n * delta``."""
    n = commensurate_steps(t, delta)
    a0 = _a0(a0)
    d = delta / _tau(tau)
    ainf = a_inf(delta, theta, p, tau)
    return ainf - (ainf - a0) * math.exp(n * _log_base(d, _theta(theta)))


def a_zeno(t, theta: float, p: float, tau: float = 1.0, a0: int = 1):
    """Population in the limit of continuous measurement; valid for any ``t``."""
    t = _t(t)
    ainf = a_inf_zeno(theta, p)
    return _out(ainf - np.exp(-t / tau_eff(theta, tau)) * (ainf - _a0(a0)))


def c_inf_1(theta: float, p: float) -> float:
    """First-order (in ``delta/tau``) shift of the long-time population."""
    theta = _theta(theta)
    return -(2 * _p(p) - 1) * math.cos(2 * theta) * math.sin(2 * theta) ** 2 / (3 + math.cos(4 * theta)) ** 2


def _linear_rate(theta: float) -> float:
    # sin^2(4 theta) / 32
    return math.sin(4 * theta) ** 2 / 32


def first_order(t, delta: float, theta: float, p: float, tau: float = 1.0, a0: int = 1):
    """Population to first order in ``d = delta/tau``.

    ``a ~ A - e^{-t/tau_eff} [(A - a0) + d (a_inf0 - a0)(t/tau) sin^2(4 theta)/32]``
    with ``A = a_inf0 + d c_inf_1``. The residual against :func:`a_general` is
    ``O(d^2)`` for fixed ``t``.
    """
    t = _t(t)
    tau = _tau(tau)
    d = check_range("delta", delta, 0.0, math.inf, hi_open=True) / tau
    a0 = _a0(a0)
    zero = a_inf_zeno(theta, p)
    big_a = zero + d * c_inf_1(theta, p)
    decay = np.exp(-t / tau_eff(theta, tau))
    drift = d * (zero - a0) * (t / tau) * _linear_rate(theta)
    return _out(big_a - decay * ((big_a - a0) + drift))


def first_order_correction(t, theta: float, p: float, tau: float = 1.0, a0: int = 1):
    """Coefficient of ``d`` in :func:`first_order`."""
    t = _t(t)
    tau = _tau(tau)
    a0 = _a0(a0)
    zero = a_inf_zeno(theta, p)
    c1 = c_inf_1(theta, p)
    decay = np.exp(-t / tau_eff(theta, tau))
    return _out(c1 - decay * (c1 + (zero - a0) * (t / tau) * _linear_rate(theta)))


def first_order_published(t, delta: float, theta: float, p: float, tau: float = 1.0, a0: int = 1):
    """First-order form with the linear-in-t initial-state term proportional to ``a0``.

    Kept for comparison with :func:`first_order`, which it exceeds by
    ``d e^{-t/tau_eff} a_inf0 (t/tau) sin^2(4 theta)/32``, so its residual
    against :func:`a_general` is only ``O(d)`` unless ``sin(4 theta) = 0``.
    The success probability built from it agrees with :func:`p_suc_first`.
    """
    t = _t(t)
    tau = _tau(tau)
    d = check_range("delta", delta, 0.0, math.inf, hi_open=True) / tau
    a0 = _a0(a0)
    big_a = a_inf_zeno(theta, p) + d * c_inf_1(theta, p)
    start = a0 * (1 + d * _linear_rate(theta) * (t / tau))
    return _out(big_a - np.exp(-t / tau_eff(theta, tau)) * (big_a - start))


def _free_contraction(t, theta, tau):
    s2, c = _trig(theta)
    return s2 * np.exp(-0.5 * t / tau) + c * c * np.exp(-t / tau)


def a_free(t, theta: float, p: float, tau: float = 1.0, a0: int = 1):
    """Population after free evolution for ``t`` and a single final measurement.

    Identical to :func:`a_general` with ``delta = t``; the equilibrium value is
    therefore ``a_inf(delta=t)``, which only reaches :func:`a_inf_free` as
    ``t -> inf``. Defined for ``t = 0`` as ``a0``.
    """
    t = _t(t)
    tau = _tau(tau)
    theta = _theta(theta)
    a0 = _a0(a0)
    s2, c = _trig(theta)
    ratio = 1.0 / (1.0 + np.exp(-0.5 * t / tau))
    ainf = 0.5 * (1.0 + (2 * _p(p) - 1) * c / (c * c + s2 * ratio))
    return _out(ainf - (ainf - a0) * _free_contraction(t, theta, tau))


def a_free_published(t, theta: float, p: float, tau: float = 1.0, a0: int = 1):
    """Two-exponential free-limit form relaxing toward :func:`a_inf_free`.

    Equals :func:`a_free` minus
    ``(2p-1) cos(2th) sin^2(2th) (e^{-t/2tau} - e^{-t/tau}) / 2`` for either
    ``a0``, so it is exact only at ``theta`` in ``{0, pi/4, pi/2}``, at
    ``p = 1/2`` and as ``t -> inf``. The offset cancels in the success
    probability, which equals :func:`p_suc_free`.
    """
    t = _t(t)
    tau = _tau(tau)
    theta = _theta(theta)
    ainf = a_inf_free(theta, p)
    return _out(ainf - (ainf - _a0(a0)) * _free_contraction(t, theta, tau))


def p_suc_general(t: float, delta: float, theta: float, tau: float = 1.0) -> float:
    """Success probability of storing one bit with measurements every ``delta``."""
    n = commensurate_steps(t, delta)
    return 0.5 * (1 + math.exp(n * _log_base(delta / _tau(tau), _theta(theta))))


def p_suc_zeno(t, theta: float, tau: float = 1.0):
    return _out(0.5 * (1 + np.exp(-_t(t) / tau_eff(theta, tau))))


def p_suc_first(t, delta: float, theta: float, tau: float = 1.0):
    t = _t(t)
    tau = _tau(tau)
    d = check_range("delta", delta, 0.0, math.inf, hi_open=True) / tau
    corr = 1 + d * _linear_rate(_theta(theta)) * t / tau
    return _out(0.5 * (1 + np.exp(-t / tau_eff(theta, tau)) * corr))


def p_suc_free(t, theta: float, tau: float = 1.0):
    t = _t(t)
    tau = _tau(tau)
    s2, c = _trig(_theta(theta))
    return _out(0.5 * (1 + s2 * np.exp(-0.5 * t / tau) + c * c * np.exp(-t / tau)))


@dataclass(frozen=True)
class BoundRow:
    delta: float
    steps: int
    p_suc: float
    lower_violation: float  # p_zeno - p_suc, positive means below the lower bound
    upper_violation: float  # p_suc - p_free


@dataclass(frozen=True)
class BoundReport:
    t: float
    theta: float
    p_suc_zeno: float
    p_suc_free: float
    rows: tuple[BoundRow, ...]
    max_violation: float
    delta_at_min: float | None
    delta_at_max: float | None
    # empirical: p_suc non-decreasing as delta grows
    monotone_in_delta: bool

    @property
    def ok(self) -> bool:
        return self.max_violation <= BOUND_SLACK


def bound_check(t: float, delta_list, theta: float, tau: float = 1.0) -> BoundReport:
    """Check ``p_suc_zeno <= p_suc_general(delta) <= p_suc_free`` for each delta.

    Violations are reported, never raised.
    """
    zeno = p_suc_zeno(t, theta, tau)
    free = p_suc_free(t, theta, tau)
    rows = []
    for delta in delta_list:
        ps = p_suc_general(t, delta, theta, tau)
        rows.append(BoundRow(float(delta), commensurate_steps(t, delta), ps, zeno - ps, ps - free))
    worst = max((max(r.lower_violation, r.upper_violation) for r in rows), default=-math.inf)
    lo = min(rows, key=lambda r: r.p_suc, default=None)
    hi = max(rows, key=lambda r: r.p_suc, default=None)
    by_delta = sorted(rows, key=lambda r: r.delta)
    monotone = all(b.p_suc >= a.p_suc - BOUND_SLACK for a, b in zip(by_delta, by_delta[1:]))
    return BoundReport(
        t=float(t),
        theta=float(theta),
        p_suc_zeno=zeno,
        p_suc_free=free,
        rows=tuple(rows),
        max_violation=max(worst, 0.0) if rows else 0.0,
        delta_at_min=lo.delta if lo else None,
        delta_at_max=hi.delta if hi else None,
        monotone_in_delta=monotone,
    )

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zenotherm import channel, qmath
from zenotherm.channel import ChannelParams
from zenotherm.errors import RangeError


@st.composite
def densities(draw):
    r = draw(st.floats(0.0, 1.0))
    polar = draw(st.floats(0.0, math.pi))
    az = draw(st.floats(0.0, 2 * math.pi))
    x, y, z = r * math.sin(polar) * math.cos(az), r * math.sin(polar) * math.sin(az), r * math.cos(polar)
    return qmath.check_density(0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]]))


params_st = st.builds(ChannelParams, st.floats(0.5, 1.0), st.floats(0.1, 10.0))
times = st.floats(0.0, 50.0)


def test_gamma_values():
    assert channel.gamma(0.0, 1.0) == 0.0
    assert channel.gamma(1.0, 1.0) == pytest.approx(0.6321205588285577, abs=1e-15)
    assert channel.gamma(1e3, 1.0) == 1.0


@pytest.mark.parametrize("t,tau", [(-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
def test_gamma_range_errors(t, tau):
    with pytest.raises(RangeError):
        channel.gamma(t, tau)


@given(st.floats(0.0, 10.0), st.floats(1e-3, 5.0))
def test_gamma_strictly_increasing(t, dt):
    assert channel.gamma(t + dt) > channel.gamma(t)


@given(st.floats(0.0, 100.0), st.floats(0.0, 5.0))
def test_gamma_never_decreases(t, dt):
    # past ~37 tau gamma rounds to 1.0; strictness is not resolvable there
    assert channel.gamma(t + dt) >= channel.gamma(t)


def test_params_validation():
    with pytest.raises(RangeError):
        ChannelParams(0.4)
    with pytest.raises(RangeError):
        ChannelParams(1.01)
    with pytest.raises(RangeError):
        ChannelParams(0.9, 0.0)


def test_params_from_temperature():
    assert ChannelParams.from_temperature(1.0, 0.0).p == 1.0
    assert ChannelParams.from_temperature(1.0, math.inf).p == 0.5
    assert ChannelParams.from_temperature(2.0, 1.0).p == pytest.approx(1 / (1 + math.exp(-2)))


def test_kraus_identity_channel():
    p = 0.8
    k0, k1, k2, k3 = channel.kraus_set(p, 0.0)
    assert qmath.max_norm(k1) == 0 and qmath.max_norm(k3) == 0
    np.testing.assert_allclose(k0, math.sqrt(p) * np.eye(2))
    np.testing.assert_allclose(k2, math.sqrt(1 - p) * np.eye(2))


def test_kraus_zero_temperature_full_decay():
    k0, k1, k2, k3 = channel.kraus_set(1.0, 1.0)
    np.testing.assert_array_equal(k0, [[1, 0], [0, 0]])
    np.testing.assert_array_equal(k1, [[0, 1], [0, 0]])
    assert qmath.max_norm(k2) == 0 and qmath.max_norm(k3) == 0


def test_kraus_completeness_example():
    assert channel.kraus_set(0.9, 0.5).completeness_defect() <= 1e-15


@pytest.mark.parametrize("p,g", [(0.49, 0.5), (0.9, -0.1), (0.9, 1.1)])
def test_kraus_range_errors(p, g):
    with pytest.raises(RangeError):
        channel.kraus_set(p, g)


@given(st.floats(0.5, 1.0), st.floats(0.0, 1.0))
def test_kraus_completeness(p, g):
    assert channel.kraus_set(p, g).completeness_defect() <= 1e-12


@given(densities(), params_st)
def test_apply_zero_time_is_identity(rho, params):
    assert qmath.max_norm(channel.apply(rho, params, 0.0).m - rho.m) <= 1e-15


@given(densities(), st.floats(0.5, 1.0))
def test_apply_full_decay_gives_thermal_state(rho, p):
    params = ChannelParams(p)
    out = channel.apply(rho, params, 800.0)
    assert qmath.max_norm(out.m - np.diag([p, 1 - p])) <= 1e-15


def _kraus_by_hand(rho, p, g):
    # term-by-term products of the four operators, written out entry by entry
    a, b = rho[0, 0], rho[0, 1]
    k0 = p * np.array([[a, b * math.sqrt(1 - g)], [np.conj(b) * math.sqrt(1 - g), (1 - a) * (1 - g)]])
    k1 = p * g * np.array([[1 - a, 0], [0, 0]])
    k2 = (1 - p) * np.array([[a * (1 - g), b * math.sqrt(1 - g)], [np.conj(b) * math.sqrt(1 - g), 1 - a]])
    k3 = (1 - p) * g * np.array([[0, 0], [0, a]])
    return k0 + k1 + k2 + k3


@given(densities(), st.floats(0.5, 1.0), st.floats(0.0, 1.0))
def test_apply_matches_hand_expansion(rho, p, g):
    t = -math.log1p(-g) if g < 1 else 800.0
    out = channel.apply(rho, ChannelParams(p), t).m
    assert qmath.max_norm(out - _kraus_by_hand(rho.m, p, g)) <= 1e-12


def test_closed_form_examples():
    params = ChannelParams(0.9)
    t_half = math.log(2.0)  # gamma = 1/2
    out = channel.apply_closed_form(qmath.check_density(np.diag([1.0, 0.0])), params, t_half)
    np.testing.assert_allclose(out.m, np.diag([0.95, 0.05]), atol=1e-15)

    plus = qmath.check_density(np.full((2, 2), 0.5))
    out = channel.apply_closed_form(plus, params, math.log(4.0))  # gamma = 3/4
    assert out.m[0, 1] == pytest.approx(0.25, abs=1e-15)


def test_closed_form_matches_kraus_on_random_samples():
    rng = np.random.default_rng(1234)
    worst = 0.0
    for _ in range(1000):
        rho = channel.random_density(rng)
        params = ChannelParams(rng.uniform(0.5, 1.0), rng.uniform(0.1, 5.0))
        t = rng.exponential(2.0)
        worst = max(worst, qmath.max_norm(channel.apply(rho, params, t).m - channel.apply_closed_form(rho, params, t).m))
    assert worst <= 1e-14


@settings(max_examples=200)
@given(densities(), params_st, times)
def test_outputs_are_density_matrices(rho, params, t):
    out = channel.apply(rho, params, t).m
    lo, _ = qmath.eigenvalues_hermitian(out)
    assert qmath.hermiticity_defect(out) <= 1e-12
    assert abs(qmath.trace(out) - 1) <= 1e-12
    assert lo >= -1e-12


@settings(max_examples=200)
@given(densities(), params_st, st.floats(0.0, 10.0), st.floats(0.0, 10.0))
def test_semigroup(rho, params, t1, t2):
    twice = channel.apply(channel.apply(rho, params, t1), params, t2)
    assert qmath.max_norm(twice.m - channel.apply(rho, params, t1 + t2).m) <= 1e-12


@given(params_st, times)
def test_thermal_fixed_point(params, t):
    th = channel.thermal_state(params)
    assert qmath.max_norm(channel.apply(th, params, t).m - th.m) <= 1e-12


@given(densities(), params_st, times)
def test_coherence_decay(rho, params, t):
    out = channel.apply(rho, params, t)
    assert abs(abs(out.m[0, 1]) - abs(rho.m[0, 1]) * math.exp(-t / (2 * params.tau))) <= 1e-12


def test_non_exponential_decay_breaks_semigroup():
    # sanity check of the composition test itself: a linear gamma(t) is not a semigroup
    p, rho = 0.9, qmath.check_density(np.full((2, 2), 0.5))

    def step(r, g):
        ks = channel.kraus_set(p, g)
        return sum(k @ r @ k.conj().T for k in ks)

    twice = step(step(rho.m, 0.2), 0.2)
    once = step(rho.m, 0.4)
    assert qmath.max_norm(twice - once) > 1e-3

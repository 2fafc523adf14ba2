"""Discrete-time evolution: both routes, conservation laws, scaled laws."""

import math

import numpy as np
import pytest

from coinwalk import (
    DiscreteLaw,
    MomentumGrid,
    ValidationError,
    WalkRun,
    WaveFunction,
    empirical_scaled_law,
    evolve,
    fourier_evolve,
    hadamard_switched,
    ks_distance,
    normalize_phase,
    position_distribution,
    step,
)
from coinwalk.walk import distribution_difference, iter_evolution, sup_norm_difference

from conftest import figure_state, seeded_coins


def test_one_step_amplitudes(hadamard, origin_right):
    psi = step(origin_right, hadamard)
    s = 1.0 / math.sqrt(2.0)
    assert np.allclose(psi.amplitude(-1), [-s, 0.0], atol=1e-15)
    assert np.allclose(psi.amplitude(1), [0.0, s], atol=1e-15)


def test_two_step_amplitudes_and_distribution(hadamard, origin_right):
    # hand evaluation: psi_2(-2) = (-1/2, 0), psi_2(0) = (-1/2, -1/2), psi_2(2) = (0, 1/2)
    psi = evolve(WalkRun(hadamard, origin_right, 2))
    assert np.allclose(psi.amplitude(-2), [-0.5, 0.0], atol=1e-15)
    assert np.allclose(psi.amplitude(0), [-0.5, -0.5], atol=1e-15)
    assert np.allclose(psi.amplitude(2), [0.0, 0.5], atol=1e-15)
    p = position_distribution(psi)
    assert p == pytest.approx([0.25, 0.0, 0.5, 0.0, 0.25])
    # cross-check against the momentum-space route
    assert sup_norm_difference(psi, fourier_evolve(origin_right, hadamard, 2)) < 1e-12


def test_identity_coin_is_a_pure_shift():
    coin = normalize_phase(np.eye(2))
    psi = WaveFunction.from_sites([(0, (0.6, 0.8))])
    out = step(psi, coin)
    assert np.allclose(out.amplitude(-1), [0.6, 0.0])
    assert np.allclose(out.amplitude(1), [0.0, 0.8])


def test_zero_steps_returns_initial(hadamard, origin_right):
    assert sup_norm_difference(evolve(WalkRun(hadamard, origin_right, 0)), origin_right) == 0.0


def test_walkrun_validation(hadamard):
    with pytest.raises(ValidationError):
        WalkRun(hadamard, WaveFunction.qubit(1.0, 1.0), 5)  # not normalised
    with pytest.raises(ValidationError):
        WalkRun(hadamard, WaveFunction.qubit(1.0, 0.0), -1)


def test_norm_conservation(hadamard, origin_right):
    worst = 0.0
    psi = origin_right
    for _, psi in iter_evolution(WalkRun(hadamard, origin_right, 400)):
        worst = max(worst, abs(psi.norm() - 1.0))
    assert worst < 1e-12


def test_light_cone_and_parity():
    coin = seeded_coins(1, seed=3)[0]
    start = 5
    n = 33
    psi = evolve(WalkRun(coin, WaveFunction.qubit(0.8, 0.6j, site=start), n))
    assert psi.x_min >= start - n and psi.x_max <= start + n
    p = position_distribution(psi)
    odd_class = p[(psi.sites + start + n) % 2 == 1]
    assert np.all(odd_class == 0.0)


def test_fourier_route_matches_position_route(origin_right):
    coins = [hadamard_switched()] + seeded_coins(4, seed=1)
    for coin in coins:
        direct = evolve(WalkRun(coin, origin_right, 50))
        spectral_route = fourier_evolve(origin_right, coin, 50)
        assert sup_norm_difference(direct, spectral_route) < 1e-9


def test_fourier_route_accepts_explicit_grid(origin_right, hadamard):
    grid = MomentumGrid(128)
    a = fourier_evolve(origin_right, hadamard, 20, grid)
    b = evolve(WalkRun(hadamard, origin_right, 20))
    assert sup_norm_difference(a, b) < 1e-10


def test_fourier_route_zero_steps_is_identity(origin_right, hadamard):
    assert sup_norm_difference(fourier_evolve(origin_right, hadamard, 0), origin_right) < 1e-12


def test_ballistic_coin_exact_shift_formula():
    coin = normalize_phase(np.diag([np.exp(0.3j), np.exp(-0.3j)]))
    assert coin.is_degenerate
    psi0 = WaveFunction.from_sites([(-1, (0.6, 0.0)), (2, (0.0, 0.8))])
    n = 9
    out = fourier_evolve(psi0, coin, n)
    expected_left = coin.l1**n * 0.6
    expected_right = coin.r2**n * 0.8
    assert np.allclose(out.amplitude(-1 - n), [expected_left, 0.0], atol=1e-14)
    assert np.allclose(out.amplitude(2 + n), [0.0, expected_right], atol=1e-14)
    assert sup_norm_difference(out, evolve(WalkRun(coin, psi0, n))) < 1e-14


def test_empirical_scaled_law_one_step(hadamard, origin_right):
    law = empirical_scaled_law(WalkRun(hadamard, origin_right, 1))
    assert law.atoms == pytest.approx([-1.0, 1.0])
    assert law.weights == pytest.approx([0.5, 0.5])


def test_empirical_scaled_law_ballistic():
    coin = normalize_phase(np.eye(2))
    psi0 = WaveFunction.qubit(0.6, 0.8)
    for n in (1, 7, 40):
        law = empirical_scaled_law(WalkRun(coin, psi0, n))
        assert law.atoms == pytest.approx([-1.0, 1.0])
        assert law.weights == pytest.approx([0.36, 0.64])


def test_empirical_scaled_law_flip_coin_even_steps():
    # l1 = 0: after an even number of steps the walk repeats its start
    coin = normalize_phase(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    law = empirical_scaled_law(WalkRun(coin, WaveFunction.qubit(0.6, 0.8), 10))
    assert law.atoms == pytest.approx([0.0])
    assert law.weights == pytest.approx([1.0])


def test_empirical_law_requires_steps(hadamard, origin_right):
    with pytest.raises(ValidationError):
        empirical_scaled_law(WalkRun(hadamard, origin_right, 0))


def test_ks_distance_basics():
    delta_minus = DiscreteLaw(np.array([-1.0]), np.array([1.0]))
    delta_plus = DiscreteLaw(np.array([1.0]), np.array([1.0]))
    assert ks_distance(delta_minus, delta_minus) == 0.0
    assert ks_distance(delta_minus, delta_plus) == 1.0
    assert ks_distance(delta_minus, delta_plus) == ks_distance(delta_plus, delta_minus)
    half = DiscreteLaw(np.array([-1.0, 1.0]), np.array([0.5, 0.5]))
    assert ks_distance(delta_minus, half) == pytest.approx(0.5)


def test_superposition_differs_from_mixture(hadamard):
    n = 300
    finals = {
        name: evolve(WalkRun(hadamard, figure_state(name), n))
        for name in ("fig3.1", "fig3.2", "fig3.3", "fig3.4")
    }
    lo = min(f.x_min for f in finals.values())
    hi = max(f.x_max for f in finals.values())

    def dist(psi):
        full = np.zeros(hi - lo + 1)
        full[psi.x_min - lo : psi.x_max - lo + 1] = position_distribution(psi)
        return full

    mixture = 0.5 * (dist(finals["fig3.1"]) + dist(finals["fig3.2"]))
    assert np.abs(dist(finals["fig3.3"]) - mixture).max() > 1e-3
    assert np.abs(dist(finals["fig3.3"]) - dist(finals["fig3.4"])).max() > 1e-3


def test_distribution_difference_helper(hadamard, origin_right):
    a = evolve(WalkRun(hadamard, origin_right, 4))
    assert distribution_difference(a, a) == 0.0
    b = evolve(WalkRun(hadamard, origin_right, 6))
    assert distribution_difference(a, b) > 0.0

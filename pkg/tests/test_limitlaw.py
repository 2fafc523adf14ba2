"""The scaling limit: stationary amplitudes, densities, point masses, moments."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from coinwalk import (
    DegenerateCoinError,
    DomainError,
    ValidationError,
    WalkRun,
    WaveFunction,
    asymmetry_coefficient,
    cdf_and_moments,
    density,
    density_localized,
    empirical_scaled_law,
    g_function,
    gamma,
    hadamard_switched,
    ks_distance,
    lm_values,
    lm_values_numeric,
    momentum_state,
    normalize_phase,
    point_mass_law,
    stationary_points,
    weak_limit_law,
)

from conftest import seeded_coins

S2 = 1.0 / math.sqrt(2.0)


def spread_state():
    return WaveFunction.from_sites([(-3, (0.5, 0.2j)), (2, (0.1, math.sqrt(0.7)))])


# --------------------------------------------------------------------------
# stationary points
# --------------------------------------------------------------------------


def test_stationary_points_at_zero(hadamard):
    pts = stationary_points(0.0, hadamard)
    assert pts.c1 == 0.0
    assert pts.c2 == pytest.approx(math.pi)


def test_stationary_point_hadamard_half(hadamard):
    pts = stationary_points(0.5, hadamard)
    assert pts.c1 == pytest.approx(math.asin(1.0 / math.sqrt(3.0)))
    assert pts.c2 == pytest.approx(math.pi - pts.c1)


@settings(max_examples=40, deadline=None)
@given(frac=st.floats(-0.99, 0.99), seed=st.integers(0, 30))
def test_stationary_identities(frac, seed):
    coin = seeded_coins(1, seed=seed)[0]
    y = frac * coin.abs_l1
    pts = stationary_points(y, coin)
    a1 = coin.abs_l1
    g1 = gamma(pts.c1, coin)
    assert a1 * math.sin(pts.c1) == pytest.approx(y * math.sin(g1), abs=1e-12)
    assert math.sin(g1) ** 2 == pytest.approx((1 - a1**2) / (1 - y**2), abs=1e-12)
    assert math.cos(g1) ** 2 == pytest.approx((a1**2 - y**2) / (1 - y**2), abs=1e-12)
    # the stationary condition itself: gamma'(c1) = y
    slope = a1 * math.sin(pts.c1) / math.sin(g1)
    assert slope == pytest.approx(y, abs=1e-12)


def test_stationary_points_domain(hadamard):
    with pytest.raises(DomainError):
        stationary_points(hadamard.abs_l1, hadamard)
    with pytest.raises(DegenerateCoinError):
        stationary_points(0.1, normalize_phase(np.eye(2)))


# --------------------------------------------------------------------------
# the eight stationary amplitudes
# --------------------------------------------------------------------------


def test_lm_closed_forms_match_eigenvector_route():
    coins = [hadamard_switched()] + seeded_coins(3, seed=17)
    states = [WaveFunction.qubit(0.0, 1.0), spread_state()]
    for coin in coins:
        for psi0 in states:
            for frac in (-0.9, -0.35, 0.0, 0.2, 0.85):
                y = frac * coin.abs_l1
                closed = np.asarray(lm_values(y, coin, psi0))
                numeric = np.asarray(lm_values_numeric(y, coin, psi0))
                assert np.abs(closed - numeric).max() < 1e-10


def test_lm_coincidences_at_zero_velocity(hadamard):
    # constant momentum data: the mirrored partner of l+(c1) is l-(-c2)
    vals = lm_values(0.0, hadamard, WaveFunction.qubit(0.6, 0.8))
    assert vals.l_plus_c1 == pytest.approx(vals.l_minus_neg_c2, abs=1e-14)
    assert vals.l_plus_c2 == pytest.approx(vals.l_minus_neg_c1, abs=1e-14)


def test_lm_domain_errors(hadamard):
    psi0 = WaveFunction.qubit(1.0, 0.0)
    with pytest.raises(DomainError):
        lm_values(hadamard.abs_l1, hadamard, psi0)
    with pytest.raises(DegenerateCoinError):
        lm_values(0.0, normalize_phase(np.eye(2)), psi0)


def test_g_function_nonnegative(hadamard):
    hat = momentum_state(spread_state())
    ys = np.linspace(-0.95, 0.95, 41) * hadamard.abs_l1
    assert np.all(g_function(ys, hadamard, hat) >= 0.0)


# --------------------------------------------------------------------------
# densities
# --------------------------------------------------------------------------


def test_localized_closed_form_matches_general_route():
    coins = [hadamard_switched()] + seeded_coins(4, seed=23)
    qubits = [(1.0, 0.0), (0.0, 1.0), (S2, 1j * S2), (0.6, 0.8j), (S2, -S2)]
    for coin in coins:
        ys = np.linspace(-0.98, 0.98, 200) * coin.abs_l1
        for a, b in qubits:
            hat = momentum_state(WaveFunction.qubit(a, b))
            assert np.abs(
                density(ys, coin, hat) - density_localized(ys, coin, a, b)
            ).max() < 1e-10


def test_asymmetry_coefficient_reference_values(hadamard):
    assert asymmetry_coefficient(hadamard, 1.0, 0.0) == pytest.approx(1.0)
    assert asymmetry_coefficient(hadamard, 0.0, 1.0) == pytest.approx(-1.0)
    # the cross terms are purely imaginary for this qubit and cancel
    assert asymmetry_coefficient(hadamard, S2, 1j * S2) == pytest.approx(0.0, abs=1e-15)


def test_beta_one_density_shape(hadamard):
    # beta = 1 gives rho proportional to (1 - y) over the prefactor
    ys = np.linspace(-0.6, 0.6, 13)
    rho = density_localized(ys, hadamard, 1.0, 0.0)
    base = math.sqrt(0.5) / (math.pi * (1 - ys**2) * np.sqrt(0.5 - ys**2))
    assert np.allclose(rho, base * (1 - ys), atol=1e-14)


def test_density_zero_outside_support_and_endpoint_guard(hadamard):
    hat = momentum_state(WaveFunction.qubit(1.0, 0.0))
    assert density(0.9, hadamard, hat) == 0.0
    assert density(-0.95, hadamard, hat) == 0.0
    with pytest.raises(DomainError):
        density(hadamard.abs_l1, hadamard, hat)
    with pytest.raises(DomainError):
        density_localized(-hadamard.abs_l1, hadamard, 1.0, 0.0)


def test_density_localized_validates_qubit(hadamard):
    with pytest.raises(ValidationError):
        density_localized(0.0, hadamard, 1.0, 1.0)


def test_beta_zero_density_symmetric(hadamard):
    hat = momentum_state(WaveFunction.qubit(S2, 1j * S2))
    ys = np.linspace(0.0, 0.95, 40) * hadamard.abs_l1
    assert np.abs(density(ys, hadamard, hat) - density(-ys, hadamard, hat)).max() < 1e-12


def test_density_mass_against_scipy_quad():
    # independent quadrature oracle for the package's Gauss-Legendre panels
    for coin in [hadamard_switched(), seeded_coins(1, seed=31)[0]]:
        a1 = coin.abs_l1
        for psi0 in (WaveFunction.qubit(0.0, 1.0), spread_state()):
            law = weak_limit_law(coin, psi0)
            hat = momentum_state(psi0)
            mass, err = quad(
                lambda u: float(density(a1 * math.sin(u), coin, hat)) * a1 * math.cos(u),
                -math.pi / 2,
                math.pi / 2,
                limit=200,
            )
            assert mass == pytest.approx(1.0, abs=1e-6)
            assert law.mass() == pytest.approx(mass, abs=1e-9)


def test_cdf_against_scipy_quad(hadamard):
    psi0 = WaveFunction.qubit(1.0, 0.0)
    law = weak_limit_law(hadamard, psi0)
    hat = momentum_state(psi0)
    a1 = hadamard.abs_l1
    for target in (-0.5, -0.1, 0.0, 0.33, 0.64):
        expected, _ = quad(
            lambda u: float(density(a1 * math.sin(u), hadamard, hat)) * a1 * math.cos(u),
            -math.pi / 2,
            math.asin(target / a1),
            limit=200,
        )
        assert law.cdf(target) == pytest.approx(expected, abs=1e-9)
    assert law.cdf(-1.0) == 0.0
    assert law.cdf(1.0) == pytest.approx(1.0, abs=1e-9)


# --------------------------------------------------------------------------
# point masses and routing
# --------------------------------------------------------------------------


def test_point_mass_ballistic_qubit():
    coin = normalize_phase(np.eye(2))
    law = point_mass_law(coin, WaveFunction.qubit(0.6, 0.8))
    assert law.atoms.atoms == pytest.approx([-1.0, 1.0])
    assert law.atoms.weights == pytest.approx([0.36, 0.64])


def test_point_mass_ballistic_spread_state():
    coin = normalize_phase(np.eye(2))
    psi0 = WaveFunction.from_sites(
        [(-2, (math.sqrt(1 / 3), 0.0)), (5, (0.0, math.sqrt(2 / 3)))]
    )
    law = point_mass_law(coin, psi0)
    assert law.atoms.weights == pytest.approx([1 / 3, 2 / 3])


def test_point_mass_flip_coin():
    coin = normalize_phase(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    law = point_mass_law(coin, WaveFunction.qubit(0.6, 0.8))
    assert law.atoms.atoms == pytest.approx([0.0])
    assert law.atoms.weights == pytest.approx([1.0])


def test_point_mass_rejects_generic_coin(hadamard):
    with pytest.raises(ValueError):
        point_mass_law(hadamard, WaveFunction.qubit(1.0, 0.0))


def test_weak_limit_law_routing(hadamard):
    assert weak_limit_law(hadamard, WaveFunction.qubit(1.0, 0.0)).kind == "density"
    assert (
        weak_limit_law(normalize_phase(np.eye(2)), WaveFunction.qubit(1.0, 0.0)).kind
        == "point_mass"
    )
    law = weak_limit_law(hadamard, WaveFunction.qubit(1.0, 0.0))
    assert law.beta == pytest.approx(1.0)
    assert weak_limit_law(hadamard, spread_state()).beta is None


# --------------------------------------------------------------------------
# distribution functions and moments
# --------------------------------------------------------------------------


def test_point_mass_cdf_step():
    coin = normalize_phase(np.eye(2))
    law = point_mass_law(coin, WaveFunction.qubit(math.sqrt(0.3), math.sqrt(0.7)))
    cdf, mean, second = cdf_and_moments(law)
    assert cdf(-1.5) == 0.0
    assert cdf(-1.0) == pytest.approx(0.3)
    assert cdf(0.0) == pytest.approx(0.3)
    assert cdf(1.0) == pytest.approx(1.0)
    assert law.atoms.cdf_left(-1.0) == 0.0
    assert mean == pytest.approx(0.4)
    assert second == pytest.approx(1.0)


def test_symmetric_law_has_zero_mean(hadamard):
    law = weak_limit_law(hadamard, WaveFunction.qubit(S2, 1j * S2))
    _, mean, second = cdf_and_moments(law)
    assert abs(mean) < 1e-12
    assert second == pytest.approx(1.0 - math.sqrt(1.0 - hadamard.abs_l1**2), abs=1e-10)


def test_mean_matches_empirical_walk(hadamard):
    psi0 = WaveFunction.qubit(1.0, 0.0)
    law = weak_limit_law(hadamard, psi0)
    emp = empirical_scaled_law(WalkRun(hadamard, psi0, 2000))
    assert law.mean() == pytest.approx(emp.mean(), abs=0.01)


def test_empirical_law_converges_for_spread_state(hadamard):
    psi0 = spread_state()
    law = weak_limit_law(hadamard, psi0)
    d_small = ks_distance(empirical_scaled_law(WalkRun(hadamard, psi0, 200)), law)
    d_large = ks_distance(empirical_scaled_law(WalkRun(hadamard, psi0, 800)), law)
    assert d_large < d_small
    assert d_large < 0.05

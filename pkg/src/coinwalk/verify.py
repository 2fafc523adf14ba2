"""
Runnable verification suite: every module invariant at fixed seeds.

Each check computes a residual against a pinned tolerance and reports one
:class:`CheckResult`.  Two checks are deliberate fault injections (a wrong
normaliser inside the generator axis, and an undersized momentum grid); they
pass when the fault is *detected*.  The CLI ``verify`` subcommand runs this
suite and exits nonzero on any failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import continuous, limitlaw, semigroup, spectral, walk
from .core import (
    AliasingError,
    Coin,
    MomentumGrid,
    WaveFunction,
    fourier_transform,
    hadamard_switched,
    inverse_fourier,
    momentum_state,
    normalize_phase,
    pauli_compose,
    pauli_decompose,
    position_distribution,
    random_coin,
)

__all__ = ["CheckResult", "run_verification", "REFERENCE_STATES"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "detail": self.detail,
        }


def _result(name, residual, tolerance, detail="", larger_is_better=False) -> CheckResult:
    residual = float(residual)
    passed = residual > tolerance if larger_is_better else residual <= tolerance
    return CheckResult(name, passed, residual, float(tolerance), detail)


def _figure_state(which: str) -> WaveFunction:
    s = 1.0 / math.sqrt(2.0)
    if which == "fig3.1":
        return WaveFunction.qubit(0.0, 1.0, site=10)
    if which == "fig3.2":
        return WaveFunction.qubit(1.0, 0.0, site=-10)
    if which == "fig3.3":
        return WaveFunction.from_sites([(10, (0.0, s)), (-10, (s, 0.0))])
    if which == "fig3.4":
        return WaveFunction.qubit(s, s, site=0)
    raise ValueError(which)


REFERENCE_STATES = ("fig3.1", "fig3.2", "fig3.3", "fig3.4")


# --------------------------------------------------------------------------
# core
# --------------------------------------------------------------------------


def _check_coin_relations(rng) -> CheckResult:
    worst = 0.0
    for _ in range(25):
        c = random_coin(rng)
        det = c.l1 * c.r2 - c.l2 * c.r1
        worst = max(
            worst,
            abs(c.r1 + c.l2.conjugate()),
            abs(c.r2 - c.l1.conjugate()),
            abs(det - 1.0),
        )
    return _result("coin_row_relations", worst, 1e-12, "r1=-conj(l2), r2=conj(l1), det=1")


def _check_phase_invariance(rng) -> CheckResult:
    worst = 0.0
    base = hadamard_switched()
    psi0 = WaveFunction.qubit(0.6, 0.8j)
    for _ in range(5):
        phase = np.exp(1j * rng.uniform(-math.pi, math.pi))
        rotated = normalize_phase(phase * base.matrix)
        a = walk.evolve(walk.WalkRun(base, psi0, 40))
        b = walk.evolve(walk.WalkRun(rotated, psi0, 40))
        worst = max(worst, walk.distribution_difference(a, b))
    return _result("coin_phase_invariance", worst, 1e-12, "distribution unchanged by e^{i phi} U")


def _check_fourier_round_trip(rng) -> CheckResult:
    worst = 0.0
    for _ in range(5):
        width = int(rng.integers(1, 12))
        amps = rng.normal(size=(width, 2)) + 1j * rng.normal(size=(width, 2))
        amps /= np.sqrt(np.sum(np.abs(amps) ** 2))
        psi = WaveFunction(int(rng.integers(-7, 7)), amps)
        grid = MomentumGrid(width + int(rng.integers(1, 30)))
        hat = fourier_transform(psi, grid)
        back = inverse_fourier(hat, grid, (psi.x_min, psi.x_max))
        worst = max(worst, walk.sup_norm_difference(psi, back))
        parseval = abs(grid.spacing * np.sum(np.abs(hat) ** 2) - psi.norm() ** 2)
        worst = max(worst, parseval)
    return _result("fourier_round_trip", worst, 1e-10, "inverse o forward = id; Parseval")


def _check_pauli_round_trip(rng) -> CheckResult:
    worst = 0.0
    for _ in range(25):
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        worst = max(worst, np.abs(pauli_compose(pauli_decompose(A)) - A).max())
    return _result("pauli_round_trip", worst, 1e-14)


# --------------------------------------------------------------------------
# discrete walk
# --------------------------------------------------------------------------


def _check_norm_conservation(quick: bool) -> CheckResult:
    n = 500 if quick else 10_000
    coin = hadamard_switched()
    worst = 0.0
    psi = WaveFunction.qubit(1.0, 0.0)
    for _ in range(n):
        psi = walk.step(psi, coin)
        worst = max(worst, abs(psi.norm() - 1.0))
    return _result("norm_conservation", worst, 1e-10, f"max |norm-1| over n<={n}")


def _check_oracle_equivalence(rng) -> CheckResult:
    coins = [hadamard_switched()] + [random_coin(rng) for _ in range(10)]
    psi0 = WaveFunction.qubit(0.0, 1.0)
    worst = 0.0
    for coin in coins:
        a = walk.evolve(walk.WalkRun(coin, psi0, 200))
        b = walk.fourier_evolve(psi0, coin, 200)
        worst = max(worst, walk.sup_norm_difference(a, b))
    return _result("discrete_oracle_equivalence", worst, 1e-9, "position vs momentum route, n=200")


def _check_light_cone_and_parity(rng) -> CheckResult:
    coin = random_coin(rng)
    psi0 = WaveFunction.qubit(0.6, -0.8j, site=3)
    n = 41
    psi = walk.evolve(walk.WalkRun(coin, psi0, n))
    p = position_distribution(psi)
    cone = 0.0 if psi.x_min >= 3 - n and psi.x_max <= 3 + n else 1.0
    wrong_parity = p[(psi.sites + 3 + n) % 2 == 1]
    residual = max(cone, float(wrong_parity.max(initial=0.0)))
    return _result("light_cone_and_parity", residual, 0.0, "support within cone; odd class empty")


def _check_superposition(quick: bool) -> CheckResult:
    n = 200 if quick else 1000
    coin = hadamard_switched()
    finals = {
        name: walk.evolve(walk.WalkRun(coin, _figure_state(name), n))
        for name in REFERENCE_STATES
    }
    lo = min(f.x_min for f in finals.values())
    hi = max(f.x_max for f in finals.values())

    def dist(psi):
        full = np.zeros(hi - lo + 1)
        full[psi.x_min - lo : psi.x_max - lo + 1] = position_distribution(psi)
        return full

    mixture = 0.5 * (dist(finals["fig3.1"]) + dist(finals["fig3.2"]))
    gap_mix = np.abs(dist(finals["fig3.3"]) - mixture).max()
    gap_34 = np.abs(dist(finals["fig3.3"]) - dist(finals["fig3.4"])).max()
    return _result(
        "superposition_not_mixture",
        min(gap_mix, gap_34),
        1e-3,
        f"n={n}: |fig3.3-mean(3.1,3.2)|={gap_mix:.4g}, |fig3.3-fig3.4|={gap_34:.4g}",
        larger_is_better=True,
    )


# --------------------------------------------------------------------------
# spectral
# --------------------------------------------------------------------------


def _check_spectral_identities(rng) -> CheckResult:
    coins = [hadamard_switched()] + [random_coin(rng) for _ in range(3)]
    grid = MomentumGrid(1024)
    worst = 0.0
    details = []
    for coin in coins:
        nodes = grid.nodes
        g, h = spectral.dispersion(nodes, coin)
        unit_defect = np.abs(np.linalg.norm(h, axis=-1) - 1.0).max()
        bank = spectral.propagator_bank(nodes, 1.0, coin)
        u_defect = 0.0
        herm_defect = 0.0
        pauli_vs_spectral = 0.0
        for i in (0, 257, 513, 1023):
            k = nodes[i]
            U = spectral.build_U_of_k(k, coin)
            H, _, _ = spectral.hamiltonian(k, coin)
            w, V = np.linalg.eigh(H)
            exp_h = V @ np.diag(np.exp(1j * w)) @ V.conj().T
            u_defect = max(u_defect, np.abs(exp_h - U).max(), np.abs(bank[i] - U).max())
            herm_defect = max(herm_defect, np.abs(H - H.conj().T).max())
            S = spectral.unitary_S(k - coin.theta1, coin)
            gk = spectral.gamma(k - coin.theta1, coin)
            conj_form = S @ np.diag([gk, -gk]) @ S.conj().T
            pauli_vs_spectral = max(pauli_vs_spectral, np.abs(conj_form - H).max())
        bound = math.pi - math.acos(coin.abs_l1) + 1e-12
        range_defect = max(0.0, g.max() - bound, (math.acos(coin.abs_l1) - 1e-12) - g.min())
        worst = max(worst, unit_defect, u_defect, herm_defect, pauli_vs_spectral, range_defect)
        details.append(f"|h|-1<={unit_defect:.1e}")
    return _result("spectral_identities", worst, 1e-11, "; ".join(details[:2]))


def _check_s_inverse_closed_form(rng) -> CheckResult:
    worst = 0.0
    coins = [hadamard_switched(), random_coin(rng), random_coin(rng)]
    for coin in coins:
        a1 = coin.abs_l1
        for frac in (-0.9, -0.5, 0.0, 0.5, 0.9):
            inv = spectral.s_inverse_closed_form(frac * a1, coin)
            pts = limitlaw.stationary_points(frac * a1, coin)
            for M, arg in (
                (inv.at_c1, pts.c1),
                (inv.at_c2, pts.c2),
                (inv.at_neg_c1, -pts.c1),
                (inv.at_neg_c2, -pts.c2),
            ):
                numeric = np.linalg.inv(spectral.eigenvector_matrix(arg, coin))
                worst = max(worst, np.abs(M - numeric).max())
    return _result("s_inverse_closed_form", worst, 1e-10, "four stationary points, y<0 included")


def _check_axis_fault_injection() -> CheckResult:
    coin = hadamard_switched()
    kappas = MomentumGrid(256).nodes
    bad = spectral.pauli_axis(kappas, coin, h2_denominator="cos")
    defect = np.abs(np.linalg.norm(bad, axis=-1) - 1.0).max()
    return _result(
        "fault_wrong_axis_normaliser",
        defect,
        1e-3,
        "cos-denominator variant must break |h|=1",
        larger_is_better=True,
    )


def _check_aliasing_guard() -> CheckResult:
    psi = WaveFunction(0, np.full((21, 2), 0.1 + 0.1j))
    try:
        fourier_transform(psi, MomentumGrid(10))
    except AliasingError:
        return _result("fault_undersized_grid", 0.0, 0.5, "AliasingError raised as required")
    return CheckResult("fault_undersized_grid", False, 1.0, 0.5, "no error raised")


# --------------------------------------------------------------------------
# continuous time
# --------------------------------------------------------------------------


def _check_integer_time_consistency(quick: bool) -> CheckResult:
    coin = hadamard_switched()
    steps = (1, 10) if quick else (1, 10, 100)
    worst = 0.0
    for psi0 in (WaveFunction.qubit(0.0, 1.0), _figure_state("fig3.3")):
        for n in steps:
            a = continuous.evolve_continuous(psi0, float(n), coin)
            b = walk.evolve(walk.WalkRun(coin, psi0, n))
            worst = max(worst, walk.sup_norm_difference(a, b))
    return _result("integer_time_consistency", worst, 1e-9, f"t=n for n in {steps}")


def _check_group_law(rng) -> CheckResult:
    coin = random_coin(rng)
    psi0 = WaveFunction.qubit(1.0, 0.0)
    grid = MomentumGrid.for_walk(psi0, 6, pad=8)
    a = continuous.evolve_continuous(
        continuous.evolve_continuous(psi0, 0.7, coin, grid), 1.6, coin, grid
    )
    b = continuous.evolve_continuous(psi0, 2.3, coin, grid)
    return _result("continuous_group_law", walk.sup_norm_difference(a, b), 1e-9)


def _check_continuous_norm_drift(quick: bool) -> CheckResult:
    coin = hadamard_switched()
    psi0 = _figure_state("fig3.4")
    t = 50.0 if quick else 1000.0
    psi_t = continuous.evolve_continuous(psi0, t, coin)
    return _result(
        "continuous_norm_drift", abs(psi_t.norm() - 1.0), 1e-9, f"|norm-1| at t={t:g}"
    )


def _check_schrodinger_residual() -> CheckResult:
    coin = hadamard_switched()
    psi0 = WaveFunction.qubit(0.6, 0.8j)
    grid = MomentumGrid.for_walk(psi0, 3, pad=8)

    def residual(delta: float) -> float:
        times = [2.0 - delta, 2.0, 2.0 + delta]
        series = [(t, continuous.evolve_continuous(psi0, t, coin, grid)) for t in times]
        return continuous.schrodinger_residual(series, coin, grid)

    r1, r2 = residual(1e-3), residual(5e-4)
    ratio = r1 / r2 if r2 > 0 else float("inf")
    order_ok = 0.0 if 3.0 < ratio < 5.0 else 1.0
    residual_ok = 0.0 if r1 < 1e-5 else r1
    return _result(
        "schrodinger_residual",
        max(order_ok, residual_ok),
        1e-5,
        f"residual(1e-3)={r1:.3e}, halving ratio={ratio:.2f}",
    )


# --------------------------------------------------------------------------
# limit law
# --------------------------------------------------------------------------


def _limit_test_states() -> list[WaveFunction]:
    s = 1.0 / math.sqrt(2.0)
    return [
        WaveFunction.qubit(1.0, 0.0),
        WaveFunction.qubit(0.0, 1.0),
        WaveFunction.qubit(s, 1j * s),
        WaveFunction.from_sites([(-3, (0.5, 0.2j)), (2, (0.1, math.sqrt(0.7)))]),
    ]


def _check_two_route_agreement(rng) -> CheckResult:
    coins = [hadamard_switched(), random_coin(rng), random_coin(rng)]
    worst = 0.0
    for coin in coins:
        for psi0 in _limit_test_states():
            for frac in (-0.8, -0.3, 0.0, 0.45, 0.9):
                y = frac * coin.abs_l1
                closed = np.asarray(limitlaw.lm_values(y, coin, psi0))
                numeric = np.asarray(limitlaw.lm_values_numeric(y, coin, psi0))
                worst = max(worst, np.abs(closed - numeric).max())
    return _result("lm_two_route_agreement", worst, 1e-10, "closed forms vs eigenvector route")


def _check_prop_localized_consistency(rng) -> CheckResult:
    coins = [hadamard_switched()] + [random_coin(rng) for _ in range(4)]
    s = 1.0 / math.sqrt(2.0)
    qubits = [(1, 0), (0, 1), (s, 1j * s), (0.6, 0.8j), (s, -s)]
    worst = 0.0
    for coin in coins:
        ys = np.linspace(-0.98, 0.98, 200) * coin.abs_l1
        for a, b in qubits:
            general = limitlaw.density(ys, coin, momentum_state(WaveFunction.qubit(a, b)))
            closed = limitlaw.density_localized(ys, coin, a, b)
            worst = max(worst, np.abs(general - closed).max())
    return _result("localized_closed_form", worst, 1e-10, "5 coins x 5 qubits, 200 samples")


def _check_normalization(rng) -> CheckResult:
    coins = [hadamard_switched(), random_coin(rng)]
    worst = 0.0
    for coin in coins:
        for psi0 in _limit_test_states():
            law = limitlaw.weak_limit_law(coin, psi0)
            worst = max(worst, abs(law.mass() - 1.0))
    return _result("density_mass", worst, 1e-6, "every computed density integrates to 1")


def _check_point_mass_laws() -> CheckResult:
    worst = 0.0
    shift = Coin(1.0, 0.0, 0.0, 1.0)
    psi0 = WaveFunction.from_sites(
        [(-2, (math.sqrt(1 / 3), 0.0)), (5, (0.0, math.sqrt(2 / 3)))]
    )
    law = limitlaw.point_mass_law(shift, psi0)
    worst = max(worst, abs(law.atoms.weights[0] - 1 / 3), abs(law.atoms.weights[1] - 2 / 3))
    final = walk.evolve(walk.WalkRun(shift, psi0, 1000))
    p = position_distribution(final)
    left_mass = float(p[final.sites < 0].sum())
    worst = max(worst, abs(left_mass - 1 / 3))

    flip = normalize_phase(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    law0 = limitlaw.point_mass_law(flip, WaveFunction.qubit(0.6, 0.8))
    worst = max(worst, abs(law0.atoms.atoms[0]), abs(law0.atoms.weights[0] - 1.0))
    final0 = walk.evolve(walk.WalkRun(flip, WaveFunction.qubit(0.6, 0.8), 1000))
    spread = float(np.abs(final0.sites[position_distribution(final0) > 1e-30]).max()) / 1000.0
    worst = max(worst, 0.0 if spread <= 1e-3 else spread)
    return _result("point_mass_laws", worst, 1e-12, "ballistic atoms and the frozen law")


def _check_ks_convergence(quick: bool) -> CheckResult:
    coin = hadamard_switched()
    s = 1.0 / math.sqrt(2.0)
    qubits = [(1.0, 0.0), (0.0, 1.0), (s, 1j * s)]
    # the 0.05 bound is pinned at n=2000; quick mode stops at n=250 where the
    # distance is naturally larger, so only monotonicity is held to a bound
    ns, bound = ((100, 250), 0.15) if quick else ((250, 500, 1000, 2000), 0.05)
    worst_final = 0.0
    monotone = True
    details = []
    for a, b in qubits:
        psi0 = WaveFunction.qubit(a, b)
        law = limitlaw.weak_limit_law(coin, psi0)
        values = [
            walk.ks_distance(walk.empirical_scaled_law(walk.WalkRun(coin, psi0, n)), law)
            for n in ns
        ]
        monotone &= all(u > v for u, v in zip(values, values[1:]))
        worst_final = max(worst_final, values[-1])
        details.append("->".join(f"{v:.4f}" for v in values))
    residual = worst_final if monotone else 1.0
    return _result("ks_convergence", residual, bound, "; ".join(details))


def _check_symmetry_beta0() -> CheckResult:
    coin = hadamard_switched()
    s = 1.0 / math.sqrt(2.0)
    hat = momentum_state(WaveFunction.qubit(s, 1j * s))
    ys = np.linspace(0.0, 0.95, 50) * coin.abs_l1
    gap = np.abs(
        limitlaw.density(ys, coin, hat) - limitlaw.density(-ys, coin, hat)
    ).max()
    return _result("beta0_symmetry", gap, 1e-12, "rho(y) = rho(-y) when beta = 0")


# --------------------------------------------------------------------------
# semigroup
# --------------------------------------------------------------------------


def _check_flow_vs_conjugation(rng) -> CheckResult:
    coin = hadamard_switched()
    grid = MomentumGrid(256)
    obs = semigroup.random_hermitian_observable(grid, rng)
    mats = obs.matrices()
    nodes = grid.nodes
    worst = 0.0
    for t in (0.1, 1.0, 7.3):
        evolved = semigroup.heisenberg_evolve(obs, t, coin).matrices()
        for i in range(0, grid.size, 16):
            expected = semigroup.conjugate_evolve(nodes[i], t, mats[i], coin)
            worst = max(worst, float(np.abs(expected - evolved[i]).max()))
    return _result("flow_vs_conjugation", worst, 1e-11, "t in {0.1, 1, 7.3}, 256-node grid")


def _check_identity_fixed_point() -> CheckResult:
    coin = hadamard_switched()
    grid = MomentumGrid(64)
    ident = semigroup.DirectIntegralObservable.constant(grid, np.eye(2))
    evolved = semigroup.heisenberg_evolve(ident, 3.7, coin)
    residual = np.abs(evolved.coefficients - ident.coefficients).max()
    return _result("identity_fixed_point", residual, 0.0, "V_t(I) = I at coefficient level")


def _check_semigroup_law(rng) -> CheckResult:
    coin = random_coin(rng)
    worst = 0.0
    for k in MomentumGrid(16).nodes:
        r_s = semigroup.pauli_flow(k, 0.6, coin).rotation
        r_t = semigroup.pauli_flow(k, 1.9, coin).rotation
        r_st = semigroup.pauli_flow(k, 2.5, coin).rotation
        worst = max(worst, np.abs(r_s @ r_t - r_st).max())
    return _result("semigroup_law", worst, 1e-11, "R(s)R(t) = R(s+t)")


def _check_cross_generator(rng) -> CheckResult:
    coin = random_coin(rng)
    worst = 0.0
    for k in MomentumGrid(256).nodes:
        G = semigroup.cross_generator(k, coin)
        g, h = spectral.dispersion(k, coin)
        anti = np.abs(G + G.T).max()
        eigs = np.sort_complex(1j * np.sort(np.linalg.eigvals(G).imag))
        expected = np.sort_complex(1j * np.sort([0.0, 2 * g, -2 * g]))
        eig_defect = np.abs(eigs - expected).max()
        kernel = np.abs(G @ h).max()
        worst = max(worst, anti, eig_defect, kernel)
    return _result("cross_generator", worst, 1e-11, "antisymmetry, eigenvalues 0/±2i*gamma, kernel h")


def _check_rotation_properties(rng) -> CheckResult:
    coin = hadamard_switched()
    worst = 0.0
    for k in (-2.1, 0.4, 2.9):
        g, h = spectral.dispersion(k, coin)
        for t in (0.3, 1.0, 4.2):
            flow = semigroup.pauli_flow(k, t, coin)
            R = flow.rotation
            worst = max(worst, np.abs(R.T @ R - np.eye(3)).max())
            worst = max(worst, abs(np.linalg.det(R) - 1.0))
            worst = max(worst, np.abs(R @ h - h).max())
            worst = max(worst, abs(np.trace(R) - (1.0 + 2.0 * math.cos(2 * g * t))))
            eig_route, _ = semigroup.rotation_via_eigenbasis(flow.generator, t)
            worst = max(worst, np.abs(R - eig_route).max())
        period = semigroup.pauli_flow(k, math.pi / g, coin).rotation
        worst = max(worst, np.abs(period - np.eye(3)).max())
    return _result("rotation_properties", worst, 1e-10, "orthogonal, det 1, axis fixed, period pi/gamma")


def _check_positivity(rng) -> CheckResult:
    coin = hadamard_switched()
    grid = MomentumGrid(128)
    psd = semigroup.random_psd_observable(grid, rng)
    report = semigroup.positivity_check(psd, 2.3, coin)
    worst = 0.0 if report["passed"] else 1.0

    herm = semigroup.random_hermitian_observable(grid, rng)
    before = np.sort(np.linalg.eigvalsh(herm.matrices()), axis=1)
    after = np.sort(np.linalg.eigvalsh(semigroup.heisenberg_evolve(herm, 1.4, coin).matrices()), axis=1)
    worst = max(worst, float(np.abs(before - after).max()))
    return _result("positivity_and_spectrum", worst, 1e-11, "PSD preserved; spectra invariant")


# --------------------------------------------------------------------------


def run_verification(seed: int = 0, quick: bool = False) -> list[CheckResult]:
    """Run every invariant check at the given seed; returns one result per check."""
    rng = np.random.default_rng(seed)
    checks = [
        _check_coin_relations(rng),
        _check_phase_invariance(rng),
        _check_fourier_round_trip(rng),
        _check_pauli_round_trip(rng),
        _check_norm_conservation(quick),
        _check_oracle_equivalence(rng),
        _check_light_cone_and_parity(rng),
        _check_superposition(quick),
        _check_spectral_identities(rng),
        _check_s_inverse_closed_form(rng),
        _check_axis_fault_injection(),
        _check_aliasing_guard(),
        _check_integer_time_consistency(quick),
        _check_group_law(rng),
        _check_continuous_norm_drift(quick),
        _check_schrodinger_residual(),
        _check_two_route_agreement(rng),
        _check_prop_localized_consistency(rng),
        _check_normalization(rng),
        _check_point_mass_laws(),
        _check_ks_convergence(quick),
        _check_symmetry_beta0(),
        _check_flow_vs_conjugation(rng),
        _check_identity_fixed_point(),
        _check_semigroup_law(rng),
        _check_cross_generator(rng),
        _check_rotation_properties(rng),
        _check_positivity(rng),
    ]
    return checks

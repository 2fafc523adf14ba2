"""
Exact discrete-time evolution of the coined walk.

One step maps ``psi(x)`` to ``L psi(x+1) + R psi(x-1)`` where ``L`` and ``R``
are the top- and bottom-row blocks of the coin.  The same evolution is
implemented a second, independent way through momentum space: the walk is
diagonal there, so ``n`` steps cost one closed-form rotation per momentum
node regardless of ``n``.  The two routes serve as oracles for each other.

Also here: the empirical law of the scaled position ``X_n / n`` and the
Kolmogorov-Smirnov distance used to monitor its convergence to the scaling
limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import spectral
from .core import (
    Coin,
    MomentumGrid,
    ValidationError,
    WaveFunction,
    fourier_transform,
    inverse_fourier,
    position_distribution,
    require_normalized,
)

__all__ = [
    "DiscreteLaw",
    "WalkRun",
    "distribution_difference",
    "empirical_scaled_law",
    "evolve",
    "fourier_evolve",
    "iter_evolution",
    "ks_distance",
    "step",
    "sup_norm_difference",
]


def step(psi: WaveFunction, coin: Coin) -> WaveFunction:
    """Advance the walk one time unit.

    The new left amplitude at ``x`` is ``l1 psi(1;x+1) + l2 psi(2;x+1)`` and
    the new right amplitude is ``r1 psi(1;x-1) + r2 psi(2;x-1)``; the support
    grows by one site on each side and zero fringes are trimmed.  Unitary, so
    the norm is preserved to rounding.
    """
    n = psi.width
    out = np.zeros((n + 2, 2), dtype=np.complex128)
    out[0:n, 0] = coin.l1 * psi.amplitudes[:, 0] + coin.l2 * psi.amplitudes[:, 1]
    out[2 : n + 2, 1] = coin.r1 * psi.amplitudes[:, 0] + coin.r2 * psi.amplitudes[:, 1]
    return WaveFunction(psi.x_min - 1, out).trimmed()


@dataclass(frozen=True)
class WalkRun:
    """A walk configuration: coin, normalised initial state, and duration."""

    coin: Coin
    psi0: WaveFunction
    n: int
    store_trajectory: bool = False

    def __post_init__(self) -> None:
        if int(self.n) < 0:
            raise ValidationError(f"step count must be nonnegative, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        require_normalized(self.psi0, "initial state")


def iter_evolution(run: WalkRun) -> Iterator[tuple[int, WaveFunction]]:
    """Yield ``(step_index, state)`` for every time step ``0..n``."""
    psi = run.psi0
    yield 0, psi
    for i in range(run.n):
        psi = step(psi, run.coin)
        yield i + 1, psi


def evolve(run: WalkRun) -> WaveFunction:
    """The state after ``run.n`` applications of :func:`step`."""
    psi = run.psi0
    for _ in range(run.n):
        psi = step(psi, run.coin)
    return psi


def fourier_evolve(
    psi0: WaveFunction, coin: Coin, n: int, grid: MomentumGrid | None = None
) -> WaveFunction:
    """Evolve ``n`` steps through momentum space (independent of :func:`evolve`).

    Applies the closed-form ``U(k)^n`` node by node on an anti-aliased grid
    and transforms back; cost per node is independent of ``n``.  Degenerate
    coins (``l2 ~ 0``) take the exact ballistic formula
    ``psi_n(x) = (l1^n psi0(1;x+n), r2^n psi0(2;x-n))`` instead, since the
    eigenvector expressions divide by ``l2``.
    """
    if n < 0:
        raise ValidationError(f"step count must be nonnegative, got {n}")
    if coin.is_degenerate:
        width = psi0.width
        out = np.zeros((width + 2 * n, 2), dtype=np.complex128)
        out[0:width, 0] = coin.l1**n * psi0.amplitudes[:, 0]
        out[2 * n : 2 * n + width, 1] = coin.r2**n * psi0.amplitudes[:, 1]
        return WaveFunction(psi0.x_min - n, out).trimmed()
    if grid is None:
        grid = MomentumGrid.for_walk(psi0, n)
    psi_hat = fourier_transform(psi0, grid)
    bank = spectral.propagator_bank(grid.nodes, float(n), coin)
    evolved = np.einsum("mij,mj->mi", bank, psi_hat)
    return inverse_fourier(evolved, grid, (psi0.x_min - n, psi0.x_max + n))


@dataclass(frozen=True, eq=False)
class DiscreteLaw:
    """A finitely supported probability law on the real line."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        atoms = np.asarray(self.atoms, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if atoms.ndim != 1 or atoms.shape != weights.shape:
            raise ValidationError("atoms and weights must be 1-d arrays of equal length")
        if np.any(weights < 0):
            raise ValidationError("weights must be nonnegative")
        order = np.argsort(atoms)
        atoms, weights = atoms[order], weights[order]
        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    def total_mass(self) -> float:
        return float(self.weights.sum())

    def mean(self) -> float:
        return float(np.dot(self.atoms, self.weights))

    def moment(self, order: int) -> float:
        return float(np.dot(self.atoms**order, self.weights))

    def cdf(self, y) -> np.ndarray:
        """Right-continuous distribution function, vectorised."""
        cum = np.cumsum(self.weights)
        idx = np.searchsorted(self.atoms, np.asarray(y, dtype=np.float64), side="right")
        return np.concatenate(([0.0], cum))[idx]

    def cdf_left(self, y) -> np.ndarray:
        """Left limit of the distribution function, vectorised."""
        cum = np.cumsum(self.weights)
        idx = np.searchsorted(self.atoms, np.asarray(y, dtype=np.float64), side="left")
        return np.concatenate(([0.0], cum))[idx]

    def jump_points(self) -> np.ndarray:
        return self.atoms

    def support(self) -> tuple[float, float]:
        return float(self.atoms[0]), float(self.atoms[-1])


def empirical_scaled_law(run: WalkRun) -> DiscreteLaw:
    """The law of ``X_n / n``: support points ``x/n`` weighted by ``p(x)``.

    Sites carrying exactly zero probability (the wrong parity class) are
    dropped; the remaining weights sum to one within rounding.
    """
    if run.n < 1:
        raise ValidationError("the scaled law requires at least one step")
    psi = evolve(run)
    p = position_distribution(psi)
    mask = p > 0.0
    return DiscreteLaw(psi.sites[mask] / run.n, p[mask])


def ks_distance(law_a, law_b, probe_points: int = 4097) -> float:
    """Kolmogorov-Smirnov distance ``sup_y |F_a(y) - F_b(y)|``.

    Laws must expose ``cdf``, ``cdf_left``, ``jump_points`` and ``support``
    (satisfied by :class:`DiscreteLaw` and the limit laws).  The supremum is
    evaluated on the merged jump points of both laws, including left limits;
    when either law has a continuous part a uniform probe grid over the union
    of supports is merged in as well.  Symmetric, zero only for laws with
    identical distribution functions on the merged grid.
    """
    points = [law_a.jump_points(), law_b.jump_points()]
    continuous = any(p.size == 0 for p in points)
    if continuous:
        lo = min(law_a.support()[0], law_b.support()[0])
        hi = max(law_a.support()[1], law_b.support()[1])
        points.append(np.linspace(lo, hi, probe_points))
    ys = np.unique(np.concatenate([p for p in points if p.size]))
    right = np.abs(np.asarray(law_a.cdf(ys)) - np.asarray(law_b.cdf(ys)))
    left = np.abs(np.asarray(law_a.cdf_left(ys)) - np.asarray(law_b.cdf_left(ys)))
    return float(max(right.max(), left.max()))


def sup_norm_difference(psi_a: WaveFunction, psi_b: WaveFunction) -> float:
    """Largest amplitude difference between two states on their union support."""
    lo = min(psi_a.x_min, psi_b.x_min)
    hi = max(psi_a.x_max, psi_b.x_max)
    diff = np.zeros((hi - lo + 1, 2), dtype=np.complex128)
    diff[psi_a.x_min - lo : psi_a.x_max - lo + 1] = psi_a.amplitudes
    diff[psi_b.x_min - lo : psi_b.x_max - lo + 1] -= psi_b.amplitudes
    return float(np.max(np.abs(diff)))


def distribution_difference(psi_a: WaveFunction, psi_b: WaveFunction) -> float:
    """Sup-norm difference of the two position distributions on the union support."""
    lo = min(psi_a.x_min, psi_b.x_min)
    hi = max(psi_a.x_max, psi_b.x_max)
    out = np.zeros(hi - lo + 1)
    out[psi_a.x_min - lo : psi_a.x_max - lo + 1] = position_distribution(psi_a)
    out[psi_b.x_min - lo : psi_b.x_max - lo + 1] -= position_distribution(psi_b)
    return float(np.max(np.abs(out)))

"""
Heisenberg-picture evolution of momentum-fibred observables.

An observable here is a family ``A(k)`` of 2x2 matrices with uniformly
bounded norm, one per momentum node.  The walk generator acts fibrewise, so
the unital, positivity-preserving semigroup

    V_t(A)(k) = exp(i t H(k)) A(k) exp(-i t H(k))

never mixes momenta.  On the Pauli expansion ``A(k) = a0 I + a . sigma`` the
identity component is frozen and the vector part rotates about the generator
axis ``h(k - theta1)`` by the angle ``-2 t gamma(k - theta1)``:

    a(t) = exp(t * cross_generator(k)) a(0).

The stored generator acts on *coefficient* vectors; the Pauli basis operators
themselves transform by its transpose.  Correctness of the orientation is
pinned by the direct-conjugation oracle, not by convention.  Two independent
routes compute the rotation: the closed Rodrigues form (default) and the
complex eigenbasis of the generator (cross-check).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .core import (
    PAULI,
    Coin,
    MomentumGrid,
    ValidationError,
    pauli_decompose,
)

__all__ = [
    "DirectIntegralObservable",
    "PauliFlow",
    "conjugate_evolve",
    "cross_generator",
    "heisenberg_evolve",
    "pauli_flow",
    "positivity_check",
    "random_hermitian_observable",
    "random_psd_observable",
    "rotation_via_eigenbasis",
]


@dataclass(frozen=True, eq=False)
class DirectIntegralObservable:
    """A momentum-indexed family of 2x2 operators stored as Pauli coefficients."""

    grid: MomentumGrid
    coefficients: np.ndarray  # shape (grid.size, 4), complex

    def __post_init__(self) -> None:
        coeffs = np.array(self.coefficients, dtype=np.complex128, copy=True)
        if coeffs.shape != (self.grid.size, 4):
            raise ValidationError(
                f"coefficients must have shape ({self.grid.size}, 4), got {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_matrices(cls, grid: MomentumGrid, matrices) -> "DirectIntegralObservable":
        mats = np.asarray(matrices, dtype=np.complex128)
        if mats.shape != (grid.size, 2, 2):
            raise ValidationError(
                f"matrices must have shape ({grid.size}, 2, 2), got {mats.shape}"
            )
        coeffs = np.einsum("lij,mji->ml", PAULI, mats) / 2.0
        return cls(grid, coeffs)

    @classmethod
    def constant(cls, grid: MomentumGrid, matrix) -> "DirectIntegralObservable":
        """The same 2x2 operator on every fibre."""
        single = pauli_decompose(matrix).coefficients
        return cls(grid, np.tile(single, (grid.size, 1)))

    def matrices(self) -> np.ndarray:
        return np.einsum("ml,lij->mij", self.coefficients, PAULI)

    @property
    def is_hermitian(self) -> bool:
        return bool(np.max(np.abs(self.coefficients.imag)) < 1e-12)

    def sup_norm(self) -> float:
        """Largest operator norm over the fibres."""
        return float(np.linalg.svd(self.matrices(), compute_uv=False).max())


def conjugate_evolve(k: float, t: float, matrix, coin: Coin) -> np.ndarray:
    """Direct Heisenberg conjugation ``exp(itH(k)) A exp(-itH(k))`` on one fibre.

    Exactly unital (the identity maps to itself) and spectrum-preserving,
    since the propagator is unitary.  This is the oracle the Pauli-flow route
    is checked against.
    """
    A = np.asarray(matrix, dtype=np.complex128)
    if A.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {A.shape}")
    P = spectral.propagator_bank(float(k), float(t), coin)
    return P @ A @ P.conj().T


def cross_generator(k: float, coin: Coin) -> np.ndarray:
    """Generator of the coefficient rotation at momentum ``k``.

    The 3x3 real antisymmetric matrix ``G = -2 [gamma*h]_x`` (cross-product
    matrix of the scaled axis), so that Pauli coefficient vectors evolve as
    ``a(t) = exp(t G) a(0)``; the basis operators evolve by the transpose.
    Eigenvalues are ``{0, +/- 2i*gamma(k - theta1)}`` and the kernel is
    spanned by the axis ``h``.
    """
    g, h = spectral.dispersion(float(k), coin)
    gh = float(g) * h
    return np.array(
        [
            [0.0, 2.0 * gh[2], -2.0 * gh[1]],
            [-2.0 * gh[2], 0.0, 2.0 * gh[0]],
            [2.0 * gh[1], -2.0 * gh[0], 0.0],
        ]
    )


def _axis_cross_matrices(h: np.ndarray) -> np.ndarray:
    """Batched cross-product matrices ``[h]_x`` for axes of shape (..., 3)."""
    K = np.zeros(h.shape[:-1] + (3, 3))
    K[..., 0, 1] = -h[..., 2]
    K[..., 0, 2] = h[..., 1]
    K[..., 1, 0] = h[..., 2]
    K[..., 1, 2] = -h[..., 0]
    K[..., 2, 0] = -h[..., 1]
    K[..., 2, 1] = h[..., 0]
    return K


def _coefficient_rotations(k, t: float, coin: Coin) -> np.ndarray:
    """Rodrigues form of ``exp(t * cross_generator)``: rotation by ``-2*gamma*t`` about h."""
    g, h = spectral.dispersion(k, coin)
    angle = -2.0 * t * g
    K = _axis_cross_matrices(h)
    eye = np.broadcast_to(np.eye(3), K.shape)
    sin_term = np.sin(angle)[..., None, None] * K
    cos_term = (1.0 - np.cos(angle))[..., None, None] * (K @ K)
    return eye + sin_term + cos_term


@dataclass(frozen=True, eq=False)
class PauliFlow:
    """The coefficient rotation at one momentum and time, with its generator data."""

    k: float
    t: float
    rotation: np.ndarray  # 3x3 real orthogonal, acts on coefficient vectors
    generator: np.ndarray  # the antisymmetric cross generator
    eigenbasis: np.ndarray  # columns: eigenvectors for (0, +2i*gamma, -2i*gamma)
    axis: np.ndarray
    gamma: float


def rotation_via_eigenbasis(generator: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray]:
    """``exp(t * generator)`` through the complex eigendecomposition.

    Returns ``(rotation, eigenbasis)`` where the eigenbasis columns are
    ordered (0, +2i*gamma, -2i*gamma).  Serves as the independent cross-check
    of the Rodrigues route; the imaginary residue of the reassembled rotation
    is rounding-level.
    """
    eigvals, eigvecs = np.linalg.eig(generator)
    order = np.argsort(eigvals.imag)  # (-2g, 0, +2g)
    perm = [order[1], order[2], order[0]]
    W = eigvecs[:, perm]
    lam = eigvals[perm]
    rotation = (W * np.exp(t * lam)) @ np.linalg.inv(W)
    return rotation.real, W


def pauli_flow(k: float, t: float, coin: Coin) -> PauliFlow:
    """The full Pauli-coefficient rotation data at momentum ``k`` and time ``t``.

    The rotation is computed in the closed Rodrigues form (no complex
    intermediates); the eigenbasis route is exposed separately through
    :func:`rotation_via_eigenbasis` and agrees to ~1e-11.
    """
    g, h = spectral.dispersion(float(k), coin)
    G = cross_generator(float(k), coin)
    rotation = _coefficient_rotations(float(k), float(t), coin)
    _, W = rotation_via_eigenbasis(G, float(t))
    return PauliFlow(
        k=float(k),
        t=float(t),
        rotation=rotation,
        generator=G,
        eigenbasis=W,
        axis=h,
        gamma=float(g),
    )


def heisenberg_evolve(
    obs: DirectIntegralObservable, t: float, coin: Coin
) -> DirectIntegralObservable:
    """Apply the semigroup to every fibre: freeze ``a0``, rotate the vector part.

    Agrees node by node with :func:`conjugate_evolve`; the identity is a
    fixed point exactly at the coefficient level.
    """
    rotations = _coefficient_rotations(obs.grid.nodes, float(t), coin)
    coeffs = obs.coefficients
    out = np.empty_like(coeffs)
    out[:, 0] = coeffs[:, 0]
    out[:, 1:] = np.einsum("mij,mj->mi", rotations, coeffs[:, 1:])
    return DirectIntegralObservable(obs.grid, out)


def random_hermitian_observable(
    grid: MomentumGrid, rng: np.random.Generator
) -> DirectIntegralObservable:
    """Independent Hermitian fibres: real Gaussian Pauli coefficients."""
    return DirectIntegralObservable(
        grid, rng.normal(size=(grid.size, 4)).astype(np.complex128)
    )


def random_psd_observable(
    grid: MomentumGrid, rng: np.random.Generator
) -> DirectIntegralObservable:
    """Independent positive-semidefinite fibres ``B B*`` from complex Gaussian B."""
    B = rng.normal(size=(grid.size, 2, 2)) + 1j * rng.normal(size=(grid.size, 2, 2))
    return DirectIntegralObservable.from_matrices(grid, B @ np.conj(np.swapaxes(B, 1, 2)))


def positivity_check(
    obs: DirectIntegralObservable,
    t: float,
    coin: Coin,
    samples: int | None = None,
    rng: np.random.Generator | None = None,
) -> dict:
    """Verify that positive fibres stay positive under the semigroup.

    Checks the smallest eigenvalue of every (or ``samples`` randomly chosen)
    fibre before and after evolution by time ``t``.  Input fibres must be
    Hermitian; they count as positive when all eigenvalues are >= -1e-12 and
    the evolved fibres must stay above -1e-10.

    Returns a report dict with the node indices, the min-eigenvalue arrays
    before and after, their worst values, and the overall verdict.
    """
    if not obs.is_hermitian:
        raise ValidationError("positivity check requires Hermitian fibres")
    size = obs.grid.size
    if samples is None or samples >= size:
        idx = np.arange(size)
    else:
        rng = rng if rng is not None else np.random.default_rng(0)
        idx = np.sort(rng.choice(size, size=samples, replace=False))
    before = np.linalg.eigvalsh(obs.matrices()[idx]).min(axis=1)
    evolved = heisenberg_evolve(obs, t, coin)
    after = np.linalg.eigvalsh(evolved.matrices()[idx]).min(axis=1)
    input_psd = bool(before.min() >= -1e-12)
    return {
        "nodes": idx.tolist(),
        "time": float(t),
        "min_eigenvalue_before": before.tolist(),
        "min_eigenvalue_after": after.tolist(),
        "worst_before": float(before.min()),
        "worst_after": float(after.min()),
        "input_psd": input_psd,
        "passed": input_psd and bool(after.min() >= -1e-10),
    }

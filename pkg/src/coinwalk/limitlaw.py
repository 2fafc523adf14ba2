"""
Closed-form scaling limit of the walk position.

As the step count grows, ``X_n / n`` converges weakly.  For coins with
``l1 * l2 != 0`` the limit has a density supported on ``(-|l1|, |l1|)``:

    rho(y) = sqrt(1 - |l1|^2) / ((1 - y^2) sqrt(|l1|^2 - y^2)) * g(y)

where ``g`` collects the initial-state dependence as the sum of eight
squared amplitudes evaluated at the stationary momenta of ``gamma(k) - y*k``
(two mirrored pairs, one per phase branch).  The prefactor here already
absorbs the factor pi that would otherwise cancel against the momentum
normalisation ``1/sqrt(2*pi)`` carried by the initial data inside ``g``;
total mass one is verified by quadrature.

Degenerate coins give point masses instead: two atoms at +/-1 when
``l2 = 0`` (the walk is ballistic) and a unit atom at 0 when ``l1 = 0``
(the walk oscillates in place).

For a single-site initial qubit ``(a, b)`` the density collapses to the
classical closed form ``prefactor * (1 - beta*y)`` with

    beta = |a|^2 - |b|^2 + (conj(l1) l2 conj(a) b + l1 conj(l2) a conj(b)) / |l1|^2.

The integrable inverse-square-root endpoint singularities are removed by the
substitution ``y = |l1| sin(u)`` throughout the quadrature code.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

import numpy as np

from . import spectral
from .core import (
    Coin,
    DegenerateCoinError,
    DomainError,
    ValidationError,
    WaveFunction,
    momentum_state,
    require_normalized,
)
from .walk import DiscreteLaw

__all__ = [
    "LimitLaw",
    "StationaryAmplitudes",
    "StationaryPoints",
    "asymmetry_coefficient",
    "cdf_and_moments",
    "density",
    "density_localized",
    "g_function",
    "lm_values",
    "lm_values_numeric",
    "point_mass_law",
    "stationary_points",
    "weak_limit_law",
]

InitialState = Union[WaveFunction, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class StationaryPoints:
    """The two stationary momenta driving the scaling limit at velocity ``y``."""

    y: float
    c1: float
    c2: float


def stationary_points(y: float, coin: Coin) -> StationaryPoints:
    """Solve ``gamma'(c) = y``: ``c1`` in (-pi/2, pi/2) and ``c2 = pi - c1``.

    ``c1 = arcsin( y sqrt(1-|l1|^2) / (|l1| sqrt(1-y^2)) )`` is nonnegative
    for ``y >= 0`` and takes negative values for ``y < 0``; the same closed
    form covers both signs.  At the solution,

        |l1| sin(c1) = y sin(gamma(c1)),
        sin^2(gamma(c1)) = (1-|l1|^2)/(1-y^2),
        cos^2(gamma(c1)) = (|l1|^2-y^2)/(1-y^2).

    Requires ``0 < |l1| < 1`` and ``|y| < |l1|``.
    """
    if coin.is_degenerate or coin.l1 == 0:
        raise DegenerateCoinError(
            "stationary points exist only for coins with l1*l2 != 0"
        )
    c1 = spectral.stationary_angle(float(y), coin.abs_l1)
    return StationaryPoints(y=float(y), c1=c1, c2=math.pi - c1)


class StationaryAmplitudes(NamedTuple):
    """The eight stationary-momentum amplitudes feeding the limit density."""

    l_plus_c1: complex
    l_plus_c2: complex
    l_minus_neg_c1: complex
    l_minus_neg_c2: complex
    m_plus_c1: complex
    m_plus_c2: complex
    m_minus_neg_c1: complex
    m_minus_neg_c2: complex


def _resolve_initial(psi0: InitialState) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(psi0, WaveFunction):
        return momentum_state(psi0)
    if callable(psi0):
        return psi0
    raise ValidationError(
        "initial state must be a WaveFunction or a momentum-space callable"
    )


def _check_density_domain(y: np.ndarray, coin: Coin) -> None:
    if coin.is_degenerate or coin.l1 == 0:
        raise DegenerateCoinError(
            "the scaling limit has a density only when l1*l2 != 0; "
            "use point_mass_law for degenerate coins"
        )
    if np.any(np.abs(y) >= coin.abs_l1):
        raise DomainError("|y| must be strictly below |l1|")


def _amplitude_table(
    y: np.ndarray, coin: Coin, psi_hat: Callable[[np.ndarray], np.ndarray]
) -> np.ndarray:
    """The eight amplitudes for every ``y``; shape ``(8,) + y.shape``.

    Closed forms with ``s = sqrt((|l1|^2-y^2)/(1-|l1|^2))``,
    ``w = l2 e^{-i theta1}``, ``C = (1-|l1|^2)/(2|l1|)`` and
    ``q = y + i s`` or its conjugate::

        l(c)  = (w/2) [ (1-y)/w * psi_hat(1;c+theta1) - q/|l1| * psi_hat(2;c+theta1) ]
        m(c)  = C [ -conj(q)/w * psi_hat(1;c+theta1)
                    + |l1|/(1-|l1|^2) (1+y) * psi_hat(2;c+theta1) ]

    with ``q = y+is`` at ``c1``, ``q = y-is`` at ``c2``; the mirrored points
    ``-c1, -c2`` take the conjugated factors (``y-is`` and ``y+is``
    respectively), as dictated by ``e^{2i c1}(y+is) = -(y-is)`` and pinned by
    the numerical eigenvector route.
    """
    a1 = coin.abs_l1
    s = np.sqrt((a1 * a1 - y * y) / (1.0 - a1 * a1))
    c1 = np.arcsin(y * math.sqrt(1.0 - a1 * a1) / (a1 * np.sqrt(1.0 - y * y)))
    c2 = math.pi - c1
    w = coin.l2 * cmath.exp(-1j * coin.theta1)
    th1 = coin.theta1
    q_plus, q_minus = y + 1j * s, y - 1j * s

    vals_1 = {}
    vals_2 = {}
    for name, point in (("c1", c1), ("c2", c2), ("nc1", -c1), ("nc2", -c2)):
        data = psi_hat(point + th1)
        vals_1[name], vals_2[name] = data[..., 0], data[..., 1]

    big_c = (1.0 - a1 * a1) / (2.0 * a1)
    big_d = a1 / (1.0 - a1 * a1)

    def l_value(name: str, q: np.ndarray) -> np.ndarray:
        return (w / 2.0) * ((1.0 - y) / w * vals_1[name] - q / a1 * vals_2[name])

    def m_value(name: str, q: np.ndarray) -> np.ndarray:
        return big_c * (-q / w * vals_1[name] + big_d * (1.0 + y) * vals_2[name])

    return np.stack(
        [
            l_value("c1", q_plus),
            l_value("c2", q_minus),
            l_value("nc1", q_minus),
            l_value("nc2", q_plus),
            m_value("c1", q_minus),
            m_value("c2", q_plus),
            m_value("nc1", q_plus),
            m_value("nc2", q_minus),
        ]
    )


def lm_values(y: float, coin: Coin, psi0: InitialState) -> StationaryAmplitudes:
    """The eight stationary amplitudes at velocity ``y`` (closed forms)."""
    y_arr = np.asarray(float(y))
    _check_density_domain(y_arr, coin)
    table = _amplitude_table(y_arr, coin, _resolve_initial(psi0))
    return StationaryAmplitudes(*(complex(v) for v in table))


def lm_values_numeric(y: float, coin: Coin, psi0: InitialState) -> StationaryAmplitudes:
    """The same eight amplitudes through the defining eigenvector route.

    Solves ``S(c) xi = psi_hat(c + theta1)`` with the unnormalised
    eigenvector matrix and numerical inversion, then multiplies by the
    eigenvector components: the ``l`` values use the first components
    ``e^{-ic}``, the ``m`` values the second.  Entirely independent of the
    closed forms in :func:`lm_values`; the two agree to ~1e-14.
    """
    y_arr = np.asarray(float(y))
    _check_density_domain(y_arr, coin)
    psi_hat = _resolve_initial(psi0)
    pts = stationary_points(float(y), coin)
    out = {}
    for name, point, branch in (
        ("c1", pts.c1, "plus"),
        ("c2", pts.c2, "plus"),
        ("nc1", -pts.c1, "minus"),
        ("nc2", -pts.c2, "minus"),
    ):
        S = spectral.eigenvector_matrix(point, coin)
        xi = np.linalg.solve(S, psi_hat(point + coin.theta1))
        u_component = cmath.exp(-1j * point)
        if branch == "plus":
            out[f"l_{name}"] = complex(u_component * xi[0])
            out[f"m_{name}"] = complex(S[1, 0] * xi[0])
        else:
            out[f"l_{name}"] = complex(u_component * xi[1])
            out[f"m_{name}"] = complex(S[1, 1] * xi[1])
    return StationaryAmplitudes(
        l_plus_c1=out["l_c1"],
        l_plus_c2=out["l_c2"],
        l_minus_neg_c1=out["l_nc1"],
        l_minus_neg_c2=out["l_nc2"],
        m_plus_c1=out["m_c1"],
        m_plus_c2=out["m_c2"],
        m_minus_neg_c1=out["m_nc1"],
        m_minus_neg_c2=out["m_nc2"],
    )


def g_function(y, coin: Coin, psi0: InitialState):
    """Initial-state factor of the limit density: sum of the eight squared moduli.

    Nonnegative by construction; broadcasts over ``y``.  Carries the factor
    ``1/pi`` inherited from the momentum normalisation of the initial data
    (for a single-site qubit, ``g(y) = (1 - beta*y) / pi``).
    """
    y_arr = np.asarray(y, dtype=np.float64)
    _check_density_domain(y_arr, coin)
    table = _amplitude_table(y_arr, coin, _resolve_initial(psi0))
    out = np.sum(np.abs(table) ** 2, axis=0)
    return float(out) if out.ndim == 0 else out


def _edge_guard(y_arr: np.ndarray, a1: float) -> None:
    if np.any(np.abs(np.abs(y_arr) - a1) == 0.0):
        raise DomainError(
            "the density diverges at y = +/-|l1| (integrable endpoint "
            "singularity); evaluate strictly inside the support"
        )


def density(y, coin: Coin, psi0: InitialState):
    """Limit density of ``X_n / n`` at velocity ``y``; zero outside (-|l1|, |l1|).

    ``rho(y) = sqrt(1-|l1|^2) / ((1-y^2) sqrt(|l1|^2-y^2)) * g(y)`` -- the
    prefactor includes the pi that cancels the momentum normalisation inside
    ``g``, so the density integrates to one.  Evaluation exactly at the
    endpoints raises :class:`DomainError` (the singularity is integrable but
    the pointwise value is infinite).
    """
    if coin.is_degenerate or coin.l1 == 0:
        raise DegenerateCoinError(
            "the scaling limit has a density only when l1*l2 != 0; "
            "use point_mass_law for degenerate coins"
        )
    y_arr = np.asarray(y, dtype=np.float64)
    a1 = coin.abs_l1
    _edge_guard(y_arr, a1)
    inside = np.abs(y_arr) < a1
    out = np.zeros(y_arr.shape, dtype=np.float64)
    if np.any(inside):
        y_in = y_arr[inside] if y_arr.ndim else y_arr
        g = g_function(y_in, coin, psi0)
        pref = math.sqrt(1.0 - a1 * a1) / (
            (1.0 - y_in * y_in) * np.sqrt(a1 * a1 - y_in * y_in)
        )
        if y_arr.ndim:
            out[inside] = pref * g
        else:
            out = pref * g
    return float(out) if out.ndim == 0 else out


def asymmetry_coefficient(coin: Coin, a: complex, b: complex) -> float:
    """The linear tilt ``beta`` of the limit density for an origin qubit ``(a, b)``.

    ``beta = |a|^2 - |b|^2 + (conj(l1) l2 conj(a) b + l1 conj(l2) a conj(b)) / |l1|^2``;
    the two cross terms are conjugate, so the result is real.
    """
    if coin.is_degenerate or coin.l1 == 0:
        raise DegenerateCoinError("the tilt coefficient requires l1*l2 != 0")
    a, b = complex(a), complex(b)
    cross = coin.l1.conjugate() * coin.l2 * a.conjugate() * b
    return float(abs(a) ** 2 - abs(b) ** 2 + 2.0 * cross.real / coin.abs_l1**2)


def density_localized(y, coin: Coin, a: complex, b: complex):
    """Limit density for the walk started in a single-site qubit ``(a, b)``.

    The closed form ``prefactor * (1 - beta*y)`` on ``(-|l1|, |l1|)``; agrees
    with the general route through :func:`density` to rounding.
    """
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-8:
        raise ValidationError("qubit amplitudes must satisfy |a|^2 + |b|^2 = 1")
    beta = asymmetry_coefficient(coin, a, b)
    y_arr = np.asarray(y, dtype=np.float64)
    a1 = coin.abs_l1
    _edge_guard(y_arr, a1)
    inside = np.abs(y_arr) < a1
    out = np.zeros(y_arr.shape, dtype=np.float64)
    pref = np.zeros_like(out)
    np.divide(
        math.sqrt(1.0 - a1 * a1),
        math.pi * (1.0 - y_arr * y_arr) * np.sqrt(np.maximum(a1 * a1 - y_arr * y_arr, 0.0)),
        out=pref,
        where=inside,
    )
    out = np.where(inside, pref * (1.0 - beta * y_arr), 0.0)
    return float(out) if out.ndim == 0 else out


# 16-node Gauss-Legendre rule used panelwise after the y = |l1| sin(u)
# substitution; the substituted integrand is analytic, so short panels give
# quadrature error far below the 1e-6 mass tolerance.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_BASE_PANELS = 192


class LimitLaw:
    """The weak limit of ``X_n / n``: a density or a point-mass measure.

    Density laws evaluate their distribution function and moments by
    panelwise Gauss-Legendre quadrature in the substituted variable
    ``y = |l1| sin(u)``, which removes the endpoint singularities exactly.
    """

    def __init__(
        self,
        kind: str,
        coin: Coin,
        psi0_hat: Callable[[np.ndarray], np.ndarray] | None = None,
        beta: float | None = None,
        atoms: DiscreteLaw | None = None,
    ) -> None:
        if kind not in ("density", "point_mass"):
            raise ValidationError(f"unknown law kind {kind!r}")
        if kind == "density" and psi0_hat is None:
            raise ValidationError("density laws need the momentum-space initial state")
        if kind == "point_mass" and atoms is None:
            raise ValidationError("point-mass laws need their atoms")
        self.kind = kind
        self.coin = coin
        self.psi0_hat = psi0_hat
        self.beta = beta
        self.atoms = atoms
        self._mass: float | None = None

    # -- density-kind internals -------------------------------------------

    def _integrand_u(self, u: np.ndarray) -> np.ndarray:
        """Density times dy/du after y = |l1| sin(u): the singular factors cancel."""
        a1 = self.coin.abs_l1
        y = a1 * np.sin(u)
        g = g_function(y, self.coin, self.psi0_hat)
        return math.sqrt(1.0 - a1 * a1) / (1.0 - y * y) * g

    def _cumulative(self, u_targets: np.ndarray, weight_power: int = 0) -> np.ndarray:
        """Integrals of ``y^power * rho`` from the lower edge to each target (sorted)."""
        edges = np.unique(
            np.concatenate(
                [
                    np.linspace(-math.pi / 2, math.pi / 2, _BASE_PANELS + 1),
                    u_targets,
                ]
            )
        )
        lo, hi = edges[:-1], edges[1:]
        mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
        nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        flat = nodes.ravel()
        values = self._integrand_u(flat)
        if weight_power:
            values = values * (self.coin.abs_l1 * np.sin(flat)) ** weight_power
        panel = (values.reshape(nodes.shape) * _GL_WEIGHTS[None, :]).sum(axis=1) * half
        cumulative = np.concatenate(([0.0], np.cumsum(panel)))
        return cumulative[np.searchsorted(edges, u_targets)]

    # -- common law protocol ----------------------------------------------

    def support(self) -> tuple[float, float]:
        if self.kind == "point_mass":
            return self.atoms.support()
        a1 = self.coin.abs_l1
        return (-a1, a1)

    def jump_points(self) -> np.ndarray:
        if self.kind == "point_mass":
            return self.atoms.jump_points()
        return np.empty(0)

    def pdf(self, y):
        if self.kind == "point_mass":
            raise DomainError("a point-mass law has no density")
        return density(y, self.coin, self.psi0_hat)

    def mass(self) -> float:
        """Total mass by quadrature (should be 1; checked in verification)."""
        if self.kind == "point_mass":
            return self.atoms.total_mass()
        if self._mass is None:
            self._mass = float(self._cumulative(np.array([math.pi / 2]))[0])
        return self._mass

    def cdf(self, y):
        if self.kind == "point_mass":
            return self.atoms.cdf(y)
        y_arr = np.atleast_1d(np.asarray(y, dtype=np.float64))
        a1 = self.coin.abs_l1
        u = np.arcsin(np.clip(y_arr / a1, -1.0, 1.0))
        order = np.argsort(u)
        values = np.empty_like(u)
        values[order] = self._cumulative(u[order])
        values[y_arr >= a1] = self.mass()
        values[y_arr <= -a1] = 0.0
        return float(values[0]) if np.isscalar(y) or np.asarray(y).ndim == 0 else values

    def cdf_left(self, y):
        if self.kind == "point_mass":
            return self.atoms.cdf_left(y)
        return self.cdf(y)

    def mean(self) -> float:
        return self.moment(1)

    def moment(self, order: int) -> float:
        if self.kind == "point_mass":
            return self.atoms.moment(order)
        return float(self._cumulative(np.array([math.pi / 2]), weight_power=order)[0])


def point_mass_law(coin: Coin, psi0: WaveFunction) -> LimitLaw:
    """The degenerate scaling limit for coins with ``l1 = 0`` or ``l2 = 0``.

    ``l2 = 0``: the two chirality populations travel ballistically, so the
    limit puts mass ``sum_x |psi0(1;x)|^2`` at -1 and ``sum_x |psi0(2;x)|^2``
    at +1.  ``l1 = 0``: the walk shuttles in place and ``X_n/n`` collapses to
    a unit atom at 0.
    """
    weights = np.sum(np.abs(psi0.amplitudes) ** 2, axis=0)
    if coin.is_degenerate:
        atoms = DiscreteLaw(np.array([-1.0, 1.0]), weights)
    elif coin.l1 == 0:
        atoms = DiscreteLaw(np.array([0.0]), np.array([float(weights.sum())]))
    else:
        raise ValueError("point-mass laws arise only for coins with l1 = 0 or l2 = 0")
    return LimitLaw("point_mass", coin, atoms=atoms)


def weak_limit_law(coin: Coin, psi0: WaveFunction) -> LimitLaw:
    """The scaling limit of the walk: density when ``l1*l2 != 0``, point mass otherwise."""
    require_normalized(psi0, "initial state")
    if coin.is_degenerate or coin.l1 == 0:
        return point_mass_law(coin, psi0)
    beta = None
    if psi0.width == 1:
        a, b = psi0.amplitudes[0]
        beta = asymmetry_coefficient(coin, a, b)
    return LimitLaw("density", coin, psi0_hat=momentum_state(psi0), beta=beta)


def cdf_and_moments(law: LimitLaw) -> tuple[Callable, float, float]:
    """The law's distribution function plus its first two moments."""
    return law.cdf, law.mean(), law.moment(2)

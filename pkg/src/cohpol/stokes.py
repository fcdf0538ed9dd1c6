"""Stokes moments, the SU(2) Q-function and the Q-based degree of polarization.

Stokes operators (mode H = a, V = b)::

    S0 = a'a + b'b      S1 = a'a - b'b
    S2 = a'b + b'a      S3 = i(b'a - a'b)

Every moment is reduced to normal-ordered monomials and evaluated with
:func:`cohpol.states.expect_normal_ordered`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

import numpy as np
import scipy.special

from .errors import QuadratureTooCoarse
from .states import CoherentSuperposition, expect_normal_ordered, make_family, product_state

REALITY_TOL = 1e-10
FOUR_PI = 4.0 * math.pi

# (coefficient, (m, n, p, q)) for <a'^m a^n b'^p b^q>
_MEANS = (
    ((1, (1, 1, 0, 0)), (1, (0, 0, 1, 1))),
    ((1, (1, 1, 0, 0)), (-1, (0, 0, 1, 1))),
    ((1, (1, 0, 0, 1)), (1, (0, 1, 1, 0))),
    ((1j, (0, 1, 1, 0)), (-1j, (1, 0, 0, 1))),
)
_SQUARES = (
    ((1, (2, 2, 0, 0)), (1, (1, 1, 0, 0)), (1, (0, 0, 2, 2)), (1, (0, 0, 1, 1)), (-2, (1, 1, 1, 1))),
    ((1, (2, 0, 0, 2)), (1, (0, 2, 2, 0)), (2, (1, 1, 1, 1)), (1, (1, 1, 0, 0)), (1, (0, 0, 1, 1))),
    ((-1, (2, 0, 0, 2)), (-1, (0, 2, 2, 0)), (2, (1, 1, 1, 1)), (1, (1, 1, 0, 0)), (1, (0, 0, 1, 1))),
)


class StokesStats(NamedTuple):
    mean: tuple[float, float, float, float]
    second_moment: tuple[float, float, float]
    variance: tuple[float, float, float]


def _moment(psi: CoherentSuperposition, poly) -> float:
    val = sum(c * expect_normal_ordered(psi, *idx) for c, idx in poly)
    if abs(val.imag) > REALITY_TOL * max(1.0, abs(val.real)):
        raise FloatingPointError(f"Stokes moment has imaginary part {val.imag:.3e}")
    return float(val.real)


def stokes_stats(psi: CoherentSuperposition) -> StokesStats:
    psi.require_normalized()
    mean = tuple(_moment(psi, p) for p in _MEANS)
    second = tuple(_moment(psi, p) for p in _SQUARES)
    var = tuple(s - m * m for s, m in zip(second, mean[1:]))
    return StokesStats(mean, second, var)


def variance_sweep(
    family: str, alpha_sq_values: Iterable[float], beta_sq: float = 4.0
) -> list[tuple[float, float, float, float]]:
    """Rows ``(|alpha|^2, V1, V2, V3)`` with real non-negative amplitudes.

    ``beta_sq`` is only used by ``psi1`` (the second amplitude is held fixed).
    """
    beta = math.sqrt(beta_sq)
    rows = []
    for x in alpha_sq_values:
        if x < 0:
            raise ValueError("|alpha|^2 must be non-negative")
        v = stokes_stats(make_family(family, math.sqrt(x), beta)).variance
        rows.append((float(x), *v))
    return rows


class SphereDirection(NamedTuple):
    theta: float
    phi: float


@dataclass(frozen=True)
class SphereQuadrature:
    """Gauss-Legendre in ``cos(theta)`` times the trapezoid rule in ``phi``."""

    n_theta: int = 128
    n_phi: int = 128

    def __post_init__(self):
        if self.n_theta < 1 or self.n_phi < 1:
            raise ValueError("need at least one node per direction")

    @property
    def nodes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flattened ``(theta, phi, weight)``; weights sum to ``4 pi``."""
        return _sphere_nodes(self.n_theta, self.n_phi)

    def doubled(self) -> "SphereQuadrature":
        return SphereQuadrature(2 * self.n_theta, self.n_phi)


@lru_cache(maxsize=8)
def _sphere_nodes(n_theta: int, n_phi: int):
    x, w = scipy.special.roots_legendre(n_theta)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    theta = np.repeat(np.arccos(x), n_phi)
    ph = np.tile(phi, n_theta)
    wt = np.repeat(w, n_phi) * (2 * math.pi / n_phi)
    for arr in (theta, ph, wt):
        arr.setflags(write=False)
    return theta, ph, wt


def q_function(psi: CoherentSuperposition, theta, phi) -> np.ndarray | float:
    """``Q(theta, phi)`` summed over all photon-number shells (broadcasts).

    For branch pair ``(i, j)`` the shell sum collapses to
    ``exp(-(n_i + n_j)/2) (1 + z) e^z`` with ``z = conj(w_i) w_j`` and
    ``w = cos(theta/2) e^{i phi} a + sin(theta/2) b``.
    """
    psi.require_normalized()
    th, ph = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    amps = psi.amps
    c = psi.coeffs
    n = np.sum(np.abs(amps) ** 2, axis=1)
    half = th / 2
    w = np.cos(half) * np.exp(1j * ph) * amps[:, 0, None] + np.sin(half) * amps[:, 1, None]
    w = w.reshape(len(c), -1)
    total = np.zeros(w.shape[1])
    for i in range(len(c)):
        for j in range(len(c)):
            z = np.conj(w[i]) * w[j]
            term = np.conj(c[i]) * c[j] * (1 + z) * np.exp(z - (n[i] + n[j]) / 2)
            total += term.real
    out = total.reshape(th.shape) / FOUR_PI
    return float(out) if out.ndim == 0 else out


def _depolarization_sum(psi, quad: SphereQuadrature, workers: int) -> float:
    theta, phi, wt = quad.nodes
    if workers <= 1:
        q = q_function(psi, theta, phi)
    else:
        chunks = np.array_split(np.arange(len(theta)), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda ix: q_function(psi, theta[ix], phi[ix]), chunks)
            q = np.concatenate(list(parts))
    return float(FOUR_PI * np.sum(wt * (q - 1 / FOUR_PI) ** 2))


def polarization_degree(
    psi: CoherentSuperposition,
    quad: SphereQuadrature | None = None,
    *,
    tol: float | None = 1e-6,
    workers: int = 1,
) -> float:
    """``P = D / (1 + D)`` with ``D = 4 pi int (Q - 1/4pi)^2 dOmega``.

    When ``tol`` is set the rule is re-run with twice the polar nodes and
    :class:`QuadratureTooCoarse` is raised if ``P`` moves by more than ``tol``.
    The returned value is always the one from ``quad`` itself, so results do
    not depend on whether the check ran.
    """
    quad = quad or SphereQuadrature()
    d = _depolarization_sum(psi, quad, workers)
    p = d / (1 + d)
    if tol is not None:
        d2 = _depolarization_sum(psi, quad.doubled(), workers)
        change = abs(d2 / (1 + d2) - p)
        if change > tol:
            raise QuadratureTooCoarse(
                f"P changes by {change:.3e} when n_theta doubles to {2 * quad.n_theta} (tol {tol:.1e})"
            )
    return p


def polarization_sweep(
    alpha_sq_values: Iterable[float], quad: SphereQuadrature | None = None, **kwargs
) -> list[tuple[float, float, float]]:
    """Rows ``(|alpha|^2, P(|0, alpha>), P(|alpha, -alpha>))``."""
    rows = []
    for x in alpha_sq_values:
        a = math.sqrt(x)
        p_hv = polarization_degree(product_state(0.0, a), quad, **kwargs)
        p_diag = polarization_degree(product_state(a, -a), quad, **kwargs)
        rows.append((float(x), p_hv, p_diag))
    return rows

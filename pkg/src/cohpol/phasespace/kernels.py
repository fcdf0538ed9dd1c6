"""Closed-form Wigner function of coherent superpositions.

Conventions: ``hbar = 1``, ``alpha = (q + i p)/sqrt(2)`` and ``W`` integrates
to one against ``dq dp`` per mode, so a coherent state peaks at ``1/pi``.

The Weyl symbol of the rank-one operator ``|a><g|`` is

    W_ag(q, p) = (1/pi) exp(-2 (xi* - g*)(xi - a) - (|a|^2 + |g|^2)/2 + g* a)

with ``xi = (q + i p)/sqrt(2)``.  It separates into ``q`` and ``p`` factors;
after completing both squares it reads ``(phase/pi) F(q) H(p)`` with
``|phase| = 1`` and ``|F|, |H| <= 1``, centred on the midpoint ``(a + g)/2``.
That split never overflows, which the factored NWF path relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..states import CoherentSuperposition

SQRT2 = math.sqrt(2.0)
IMAG_RESIDUE_TOL = 1e-12


def cross_wigner_kernel(a, g, q, p):
    """Weyl transform of ``|a><g|`` at ``(q, p)``; broadcasts over ``q``, ``p``."""
    a = complex(a)
    g = complex(g)
    xi = (np.asarray(q) + 1j * np.asarray(p)) / SQRT2
    expo = -2 * (np.conj(xi) - g.conjugate()) * (xi - a) - (abs(a) ** 2 + abs(g) ** 2) / 2 + g.conjugate() * a
    return np.exp(expo) / math.pi


def kernel_factors(a, g, q, p):
    """Return ``(phase/pi, F(q), H(p))`` with ``W_ag(q, p) = phase/pi * F(q) * H(p)``."""
    a = complex(a)
    g = complex(g)
    s = a + g.conjugate()
    t = g.conjugate() - a
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    f = np.exp(-((q - s / SQRT2) ** 2) - s.imag**2 / 2)
    h = np.exp(-((p - 1j * t / SQRT2) ** 2) - t.real**2 / 2)
    # the real part of this exponent is exactly zero
    lead = g.conjugate() * a - (abs(a) ** 2 + abs(g) ** 2) / 2 + s.imag**2 / 2 + t.real**2 / 2
    phase = np.exp(1j * lead.imag)
    return phase / math.pi, f, h


def _pair_terms(psi: CoherentSuperposition):
    c = psi.coeffs
    amps = psi.amps
    k = len(c)
    for i in range(k):
        for j in range(k):
            yield i, j, c[i] * np.conj(c[j]), amps[i], amps[j]


def wigner(psi: CoherentSuperposition, q1, p1, q2, p2, check: bool = True) -> np.ndarray:
    """Two-mode Wigner function, vectorized over broadcastable coordinate arrays."""
    psi.require_normalized()
    q1, p1, q2, p2 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (q1, p1, q2, p2)))
    total = np.zeros(q1.shape, dtype=complex)
    scale = 0.0
    for _, _, cc, ai, aj in _pair_terms(psi):
        total += cc * cross_wigner_kernel(ai[0], aj[0], q1, p1) * cross_wigner_kernel(ai[1], aj[1], q2, p2)
        scale += abs(cc)
    if check and total.size:
        resid = float(np.abs(total.imag).max())
        if resid > IMAG_RESIDUE_TOL * max(1.0, scale):
            raise FloatingPointError(f"Wigner function has imaginary residue {resid:.3e}")
    return total.real


def wigner_point(psi: CoherentSuperposition, pt) -> float:
    q1, p1, q2, p2 = pt
    return float(wigner(psi, q1, p1, q2, p2))


COORDS = ("q1", "p1", "q2", "p2")


def wigner_slice(psi: CoherentSuperposition, plane=("q1", "p1"), fixed=None, x=None, y=None):
    """Wigner values on a 2D plane through phase space.

    ``plane`` names the two coordinates that vary (``x`` then ``y``); the
    remaining two take values from ``fixed`` (default 0).  Returns ``(X, Y, W)``
    with ``W[i, j]`` at ``(x[i], y[j])``.
    """
    plane = tuple(plane)
    if len(plane) != 2 or plane[0] == plane[1] or any(c not in COORDS for c in plane):
        raise ValueError(f"plane must name two distinct coordinates from {COORDS}")
    fixed = dict(fixed or {})
    unknown = set(fixed) - set(COORDS)
    if unknown or set(fixed) & set(plane):
        raise ValueError(f"fixed coordinates must be outside the plane, got {sorted(fixed)}")
    if x is None:
        x = np.linspace(-5, 5, 101)
    if y is None:
        y = np.linspace(-5, 5, 101)
    xx, yy = np.meshgrid(np.asarray(x, float), np.asarray(y, float), indexing="ij")
    args = {c: fixed.get(c, 0.0) for c in COORDS}
    args[plane[0]] = xx
    args[plane[1]] = yy
    return xx, yy, wigner(psi, *(args[c] for c in COORDS))


@dataclass(frozen=True)
class WignerKernelTable:
    """Per branch pair and mode, kernel values on the single-mode ``(q, p)`` grid.

    ``h[i, j]`` and ``v[i, j]`` are ``(G, G)`` complex arrays indexed
    ``[q, p]`` for the H and V modes.  The two-mode Wigner function on the
    grid is ``sum_ij c_i c_j* h[i, j] (x) v[i, j]``.
    """

    h: np.ndarray
    v: np.ndarray
    coeff_products: np.ndarray

    @classmethod
    def build(cls, psi: CoherentSuperposition, axes) -> "WignerKernelTable":
        """``axes`` is ``((qH, pH), (qV, pV))`` node arrays."""
        amps = psi.amps
        k = len(psi)
        tables = []
        for mode in range(2):
            q, p = axes[mode]
            tab = np.empty((k, k, len(q), len(p)), dtype=complex)
            for i in range(k):
                for j in range(k):
                    lead, f, h = kernel_factors(amps[i, mode], amps[j, mode], q, p)
                    tab[i, j] = lead * np.outer(f, h)
            tables.append(tab)
        c = psi.coeffs
        return cls(tables[0], tables[1], np.outer(c, np.conj(c)))

"""Superpositions of two-mode coherent states.

A state is a finite list of branches ``c_k |a_k, b_k>`` where ``a_k`` is the
amplitude of the horizontal (H) mode and ``b_k`` that of the vertical (V)
mode.  Everything downstream (Stokes moments, Q-function, Wigner function,
concurrence) is computed from the branch data and the closed-form coherent
overlap, so nothing here depends on a Fock truncation.

Amplitudes are plain Python/numpy complex numbers.  The supported regime is
``|amp| <= 6``; beyond that the overlap exponentials underflow harmlessly but
other modules (e.g. the default phase-space box) grow accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .errors import UnnormalizedState, ZeroNormState

EPS_NORM = 1e-14
NORM_TOL = 1e-12
MAX_SUPPORTED_AMPLITUDE = 6.0


class CoherentTerm(NamedTuple):
    """One branch ``coeff * |amp_h, amp_v>``."""

    coeff: complex
    amp_h: complex
    amp_v: complex


def _as_finite_complex(value, what: str) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{what} must be finite, got {value!r}")
    return z


@dataclass(frozen=True)
class CoherentSuperposition:
    """Immutable weighted list of two-mode coherent branches.

    Branches are never merged, even when two of them carry identical
    amplitudes.  ``normalized=True`` asserts unit norm; the constructor checks
    the claim against the overlap Gram matrix.
    """

    terms: tuple[CoherentTerm, ...]
    normalized: bool = False

    def __post_init__(self):
        terms = tuple(
            CoherentTerm(
                _as_finite_complex(t[0], "coefficient"),
                _as_finite_complex(t[1], "H amplitude"),
                _as_finite_complex(t[2], "V amplitude"),
            )
            for t in self.terms
        )
        if not terms:
            raise ValueError("a superposition needs at least one branch")
        object.__setattr__(self, "terms", terms)
        if self.normalized:
            n2 = self.norm_sq
            if abs(n2 - 1.0) > NORM_TOL:
                raise UnnormalizedState(
                    f"state flagged normalized but <psi|psi> = {n2!r}"
                )

    def __len__(self) -> int:
        return len(self.terms)

    @cached_property
    def coeffs(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms], dtype=complex)

    @cached_property
    def amps(self) -> np.ndarray:
        """``(K, 2)`` array of branch amplitudes, columns (H, V)."""
        return np.array([(t.amp_h, t.amp_v) for t in self.terms], dtype=complex)

    @cached_property
    def gram(self) -> np.ndarray:
        """Branch overlap matrix ``G[i, j] = <a_i, b_i | a_j, b_j>``."""
        return branch_gram(self.amps, self.amps)

    @cached_property
    def norm_sq(self) -> float:
        c = self.coeffs
        return float(np.real(np.conj(c) @ self.gram @ c))

    @property
    def max_amplitude(self) -> float:
        return float(np.abs(self.amps).max())

    def require_normalized(self) -> None:
        if not self.normalized:
            raise UnnormalizedState("operation requires a normalized state")

    def with_terms(self, terms: Iterable[CoherentTerm]) -> "CoherentSuperposition":
        return CoherentSuperposition(tuple(terms), normalized=self.normalized)

    @classmethod
    def from_arrays(cls, coeffs, amps, normalized: bool = False):
        amps = np.asarray(amps, dtype=complex).reshape(-1, 2)
        coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
        if len(coeffs) != len(amps):
            raise ValueError("coeffs and amps disagree on the number of branches")
        terms = tuple(
            CoherentTerm(c, a, b) for c, (a, b) in zip(coeffs, amps)
        )
        return cls(terms, normalized=normalized)


def overlap(a, g) -> complex:
    """Single-mode coherent overlap ``<g|a> = exp(g* a - (|g|^2 + |a|^2)/2)``."""
    a = complex(a)
    g = complex(g)
    return complex(np.exp(g.conjugate() * a - (abs(g) ** 2 + abs(a) ** 2) / 2))


def branch_gram(bra_amps: np.ndarray, ket_amps: np.ndarray) -> np.ndarray:
    """``G[i, j] = <bra_i | ket_j>`` for two-mode coherent branches.

    Both arguments are ``(K, 2)`` amplitude arrays.  The two single-mode
    exponents are added before exponentiating so that products of tiny
    overlaps never underflow prematurely.
    """
    u = np.asarray(bra_amps, dtype=complex)
    v = np.asarray(ket_amps, dtype=complex)
    expo = np.zeros((len(u), len(v)), dtype=complex)
    for mode in range(2):
        g = u[:, mode][:, None]
        a = v[:, mode][None, :]
        expo += np.conj(g) * a - (np.abs(g) ** 2 + np.abs(a) ** 2) / 2
    return np.exp(expo)


def inner_product(psi: CoherentSuperposition, phi: CoherentSuperposition) -> complex:
    """``<psi|phi>`` as a sum over branch pairs."""
    g = branch_gram(psi.amps, phi.amps)
    return complex(np.conj(psi.coeffs) @ g @ phi.coeffs)


def normalize(psi: CoherentSuperposition, eps: float = EPS_NORM) -> CoherentSuperposition:
    """Rescale all coefficients by one positive real factor to reach unit norm."""
    n2 = psi.norm_sq
    if n2 <= eps:
        raise ZeroNormState(f"<psi|psi> = {n2!r} is below {eps!r}")
    scale = 1.0 / math.sqrt(n2)
    terms = [CoherentTerm(t.coeff * scale, t.amp_h, t.amp_v) for t in psi.terms]
    return CoherentSuperposition(tuple(terms), normalized=True)


def superposition(*branches, normalize_state: bool = True) -> CoherentSuperposition:
    """Build a state from ``(coeff, amp_h, amp_v)`` triples."""
    psi = CoherentSuperposition(tuple(CoherentTerm(*b) for b in branches))
    return normalize(psi) if normalize_state else psi


def product_state(alpha, beta) -> CoherentSuperposition:
    """The two-mode coherent state ``|alpha, beta>``."""
    return CoherentSuperposition((CoherentTerm(1.0, alpha, beta),), normalized=True)


def make_psi1(alpha, beta) -> CoherentSuperposition:
    """``N1 (|alpha, beta> + |beta, alpha>)``."""
    return superposition((1.0, alpha, beta), (1.0, beta, alpha))


def make_psi2(alpha) -> CoherentSuperposition:
    """``N2 (|-alpha, -alpha> + |alpha, alpha>)``."""
    alpha = complex(alpha)
    return superposition((1.0, -alpha, -alpha), (1.0, alpha, alpha))


def make_psi3(alpha) -> CoherentSuperposition:
    """``N3 (|alpha, 0> + |0, alpha>)``."""
    return superposition((1.0, alpha, 0.0), (1.0, 0.0, alpha))


def make_psi_pm(alpha, beta, gamma, lam, sign: int = +1) -> CoherentSuperposition:
    """``N (|alpha, beta> +/- |gamma, lam>)``."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    return superposition((1.0, alpha, beta), (float(sign), gamma, lam))


FAMILIES = ("psi1", "psi2", "psi3", "product")


def make_family(name: str, alpha, beta=0.0) -> CoherentSuperposition:
    """Dispatch on a family name; ``beta`` is ignored where the family has none."""
    if name == "psi1":
        return make_psi1(alpha, beta)
    if name == "psi2":
        return make_psi2(alpha)
    if name == "psi3":
        return make_psi3(alpha)
    if name == "product":
        return product_state(alpha, beta)
    raise ValueError(f"unknown state family {name!r}; expected one of {FAMILIES}")


def expect_normal_ordered(psi: CoherentSuperposition, m: int, n: int, p: int, q: int) -> complex:
    """``<psi| aH^dag^m aH^n aV^dag^p aV^q |psi>``.

    Each branch pair contributes ``conj(a_i)^m a_j^n conj(b_i)^p b_j^q``
    times its overlap; every Stokes moment is a combination of these.
    """
    psi.require_normalized()
    if min(m, n, p, q) < 0:
        raise ValueError("operator powers must be non-negative")
    a = psi.amps[:, 0]
    b = psi.amps[:, 1]
    c = psi.coeffs
    bra = np.conj(c * a**m * b**p)
    ket = c * a**n * b**q
    return complex(bra @ psi.gram @ ket)


def displace(psi: CoherentSuperposition, d_h=0.0, d_v=0.0) -> CoherentSuperposition:
    """Apply ``D(d_h) x D(d_v)``.

    ``D(d)|a> = exp(i Im(d a*)) |a + d>``, so each branch picks up a phase as
    well as a shifted amplitude; dropping the phase would corrupt the
    interference terms.
    """
    d_h, d_v = complex(d_h), complex(d_v)
    terms = []
    for t in psi.terms:
        phase = (d_h * t.amp_h.conjugate()).imag + (d_v * t.amp_v.conjugate()).imag
        terms.append(CoherentTerm(t.coeff * np.exp(1j * phase), t.amp_h + d_h, t.amp_v + d_v))
    return psi.with_terms(terms)


def transform_modes(psi: CoherentSuperposition, matrix) -> CoherentSuperposition:
    """Map every branch amplitude pair ``(a, b)`` to ``matrix @ (a, b)``.

    For a unitary ``matrix`` this is a passive linear-optics transformation:
    coherent branches stay coherent and the coefficients are untouched.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("mode transformation must be a 2x2 matrix")
    new = psi.amps @ m.T
    return psi.with_terms(
        CoherentTerm(t.coeff, a, b) for t, (a, b) in zip(psi.terms, new)
    )

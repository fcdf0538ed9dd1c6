"""Truncated number-basis oracle.

Deliberately slow and obvious: states are dense amplitude arrays over
``|n_H, n_V>`` with ``0 <= n_H, n_V <= n_max`` and operators are
``(n_max+1)^2`` square matrices (sparse storage, dense on request).  Every closed form elsewhere in the package
is checked against this module; nothing here calls back into the closed-form
machinery except for reading branch data off a state.

Operator identities only hold on the *interior block*, the basis states with
``n_H + n_V < n_max``.  All Stokes operators conserve the total photon number,
so those blocks are complete and truncation cannot reach them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.sparse

from .errors import DimensionMismatch, TruncationTooSevere
from .states import CoherentSuperposition

DEFAULT_N_MAX = 48
MAX_DEFICIT = 1e-6


@dataclass(frozen=True)
class FockVector:
    """Amplitudes ``amps[n_H, n_V]`` plus the discarded probability."""

    n_max: int
    amps: np.ndarray
    deficit: float = 0.0

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** 2

    @property
    def flat(self) -> np.ndarray:
        return self.amps.reshape(-1)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.flat, self.flat).real)


@dataclass(frozen=True)
class OperatorMatrix:
    n_max: int
    entries: np.ndarray


class PhasePoint4(NamedTuple):
    """Phase-space point, ``hbar = 1`` and ``alpha = (q + i p)/sqrt(2)`` per mode."""

    q1: float
    p1: float
    q2: float
    p2: float


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """``<n|alpha>`` for ``n = 0..n_max`` by the ratio recurrence."""
    out = np.empty(n_max + 1, dtype=complex)
    out[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, n_max + 1):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


def fock_from_superposition(
    psi: CoherentSuperposition, n_max: int = DEFAULT_N_MAX, max_deficit: float = MAX_DEFICIT
) -> FockVector:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    amps = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for t in psi.terms:
        amps += t.coeff * np.outer(
            coherent_amplitudes(t.amp_h, n_max), coherent_amplitudes(t.amp_v, n_max)
        )
    total = psi.norm_sq if not psi.normalized else 1.0
    deficit = 1.0 - float(np.vdot(amps, amps).real) / total
    if deficit > max_deficit:
        raise TruncationTooSevere(
            f"n_max={n_max} discards probability {deficit:.3e} (> {max_deficit:.0e})"
        )
    return FockVector(n_max, amps, deficit)


def basis_state(n_max: int, n_h: int, n_v: int) -> FockVector:
    amps = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    amps[n_h, n_v] = 1.0
    return FockVector(n_max, amps, 0.0)


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)


@lru_cache(maxsize=2)
def _sparse_modes(n_max: int):
    a = scipy.sparse.diags(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1, format="csr")
    eye = scipy.sparse.identity(n_max + 1, format="csr")
    return scipy.sparse.kron(a, eye, format="csr"), scipy.sparse.kron(eye, a, format="csr")


def mode_operators(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Two-mode annihilators ``(a_H, a_V)`` on the flattened ``(n_H, n_V)`` basis."""
    ah, av = _sparse_modes(n_max)
    return ah.toarray().astype(complex), av.toarray().astype(complex)


@lru_cache(maxsize=2)
def stokes_sparse(n_max: int) -> tuple:
    """``S0..S3`` as CSR matrices.

    ``S3 = i (a_V^dag a_H - a_H^dag a_V)``: the relative sign is the one that
    makes ``S3`` Hermitian and closes ``[S1, S2] = 2i S3`` cyclically.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    ah, av = _sparse_modes(n_max)
    ahd, avd = ah.T.tocsr(), av.T.tocsr()
    nh, nv = ahd @ ah, avd @ av
    return tuple(
        m.astype(complex).tocsr()
        for m in (nh + nv, nh - nv, ahd @ av + avd @ ah, 1j * (avd @ ah - ahd @ av))
    )


@lru_cache(maxsize=2)
def stokes_matrices(n_max: int) -> tuple[OperatorMatrix, ...]:
    """Dense ``S0..S3`` (see :func:`stokes_sparse` for the sign convention)."""
    return tuple(OperatorMatrix(n_max, m.toarray()) for m in stokes_sparse(n_max))


@lru_cache(maxsize=8)
def interior_indices(n_max: int) -> np.ndarray:
    nh, nv = np.divmod(np.arange((n_max + 1) ** 2), n_max + 1)
    return np.flatnonzero(nh + nv < n_max)


def _check_dims(v: FockVector, m: OperatorMatrix) -> None:
    if v.n_max != m.n_max:
        raise DimensionMismatch(f"vector n_max={v.n_max} vs operator n_max={m.n_max}")


def oracle_expectation(v: FockVector, m: OperatorMatrix) -> complex:
    """``<v|M|v> / <v|v>``."""
    _check_dims(v, m)
    x = v.flat
    return complex(np.vdot(x, m.entries @ x) / np.vdot(x, x))


def _interior_block(mat, idx) -> np.ndarray:
    return mat[idx][:, idx].toarray()


def interior_commutator_error(n_max: int = DEFAULT_N_MAX) -> float:
    """Largest entry of ``[S_k, S_l] - 2i S_m`` over the cyclic triples, interior block.

    Products are formed on the full truncated space and only then restricted,
    so the edge of the truncation cannot leak into the compared block.
    """
    s = stokes_sparse(n_max)
    idx = interior_indices(n_max)
    worst = 0.0
    for k, l, m in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        comm = s[k] @ s[l] - s[l] @ s[k] - 2j * s[m]
        worst = max(worst, float(np.abs(_interior_block(comm, idx)).max()))
    return worst


def interior_casimir_error(n_max: int = DEFAULT_N_MAX) -> float:
    """``S1^2 + S2^2 + S3^2 - S0 (S0 + 2)`` on the interior block."""
    s = stokes_sparse(n_max)
    idx = interior_indices(n_max)
    eye = scipy.sparse.identity(s[0].shape[0], format="csr")
    diff = s[1] @ s[1] + s[2] @ s[2] + s[3] @ s[3] - s[0] @ (s[0] + 2 * eye)
    return float(np.abs(_interior_block(diff, idx)).max())


def interior_bosonic_error(n_max: int = DEFAULT_N_MAX) -> float:
    """``[a_i, a_j^dag] - delta_ij`` on the interior block."""
    ops = _sparse_modes(n_max)
    idx = interior_indices(n_max)
    eye = scipy.sparse.identity(ops[0].shape[0], format="csr")
    worst = 0.0
    for i in range(2):
        for j in range(2):
            a, ad = ops[i], ops[j].T.tocsr()
            comm = a @ ad - ad @ a - (eye if i == j else 0 * eye)
            worst = max(worst, float(np.abs(_interior_block(comm, idx)).max()))
    return worst


# -- Wigner function via displaced parity ---------------------------------


@lru_cache(maxsize=8)
def _quadrature_eig(dim: int):
    # H = i (a^dag - a) is Hermitian and exp(-i r H) = exp(r (a^dag - a)).
    a = annihilation(dim - 1)
    h = 1j * (a.conj().T - a)
    return np.linalg.eigh(h)


def displacement_matrix(xi: complex, n_cols: int, dim: int | None = None) -> np.ndarray:
    """``<m|D(xi)|n>`` for ``m < dim`` and ``n < n_cols``.

    Computed in an enlarged space of size ``dim`` (chosen from ``|xi|`` if not
    given) so the displaced columns are not clipped by the truncation.
    """
    r = abs(xi)
    if dim is None:
        need = (r + math.sqrt(n_cols) + 8.0) ** 2 + n_cols
        dim = 64 * int(math.ceil(need / 64))
    lam, vecs = _quadrature_eig(dim)
    core = (vecs * np.exp(-1j * r * lam)) @ vecs[:n_cols].conj().T
    th = np.angle(xi)
    rows = np.exp(1j * th * np.arange(dim))
    cols = np.exp(-1j * th * np.arange(n_cols))
    return rows[:, None] * core * cols[None, :]


def oracle_wigner_point(v: FockVector, point) -> float:
    """``W = pi^-2 <v| D1 D2 (Pi x Pi) D1^dag D2^dag |v>`` at one phase-space point."""
    q1, p1, q2, p2 = (float(x) for x in point)
    xi1 = complex(q1, p1) / math.sqrt(2)
    xi2 = complex(q2, p2) / math.sqrt(2)
    d = v.n_max + 1
    u = displacement_matrix(-xi1, d) @ v.amps @ displacement_matrix(-xi2, d).T
    sign_h = (-1.0) ** np.arange(u.shape[0])
    sign_v = (-1.0) ** np.arange(u.shape[1])
    parity = float(sign_h @ (np.abs(u) ** 2) @ sign_v)
    return parity / (math.pi**2 * v.norm_sq)


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Oscillator eigenfunctions ``phi_n(x)``, shape ``(n_max+1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = math.pi**-0.25 * np.exp(-(x**2) / 2)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def oracle_position_density(v: FockVector, q) -> np.ndarray:
    """H-mode position density ``sum_{n_V} |<q, n_V|v>|^2``."""
    phi = hermite_functions(v.n_max, q)
    wave = np.tensordot(v.amps, phi, axes=([0], [0]))  # (n_V,) + q.shape
    return np.sum(np.abs(wave) ** 2, axis=0) / v.norm_sq


# -- entanglement and polarization checks --------------------------------


def oracle_reduced_purity(v: FockVector) -> float:
    """``Tr(rho_H^2)`` after tracing out the V mode."""
    rho_h = v.amps @ v.amps.conj().T
    rho_h /= np.trace(rho_h).real
    return float(np.sum(np.abs(rho_h) ** 2))


def oracle_concurrence(v: FockVector) -> float:
    """``sqrt(2 (1 - Tr rho_H^2))``, clipped at zero."""
    return math.sqrt(max(0.0, 2.0 * (1.0 - oracle_reduced_purity(v))))


def oracle_unpolarized_check(v: FockVector) -> tuple[float, float]:
    """Frobenius norms of ``[rho, S1]`` and ``[rho, S3]`` on the interior block.

    With ``rho = |x><x|`` and Hermitian ``S``: ``[rho, S] = |x><Sx| - |Sx><x|``.
    """
    s = stokes_sparse(v.n_max)
    idx = interior_indices(v.n_max)
    x = v.flat / math.sqrt(v.norm_sq)
    out = []
    for k in (1, 3):
        y = s[k] @ x
        xi, yi = x[idx], y[idx]
        comm = np.outer(xi, yi.conj()) - np.outer(yi, xi.conj())
        out.append(float(np.linalg.norm(comm)))
    return out[0], out[1]


def oracle_q_point(v: FockVector, theta: float, phi: float) -> float:
    """SU(2) Q-function by projecting on ``|N; theta, phi>`` for each complete ``N``.

    ``<N; theta, phi| k, N-k> = sqrt(C(N, k)) cos(theta/2)^k e^{i k phi}
    sin(theta/2)^(N-k)``; blocks with ``N > n_max`` are incomplete and skipped.
    """
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    total = 0.0
    for n in range(v.n_max + 1):
        k = np.arange(n + 1)
        binom = np.array([math.comb(n, int(j)) for j in k], dtype=float)
        proj = np.sqrt(binom) * c**k * s ** (n - k) * np.exp(1j * k * phi)
        amp = np.sum(proj * v.amps[k, n - k])
        total += (n + 1) * abs(amp) ** 2
    return total / (4 * math.pi * v.norm_sq)


# -- devices ---------------------------------------------------------------


def _apply_generator(v: FockVector, gen: np.ndarray) -> FockVector:
    # The generator conserves total photon number, so exp(gen) is block
    # diagonal in N and each block is exponentiated on its own.
    d = v.n_max + 1
    nh, nv = np.divmod(np.arange(d * d), d)
    total = nh + nv
    x = v.flat.copy()
    for n in range(2 * v.n_max + 1):
        idx = np.flatnonzero(total == n)
        x[idx] = scipy.linalg.expm(gen[np.ix_(idx, idx)]) @ x[idx]
    return FockVector(v.n_max, x.reshape(d, d), v.deficit)


def device_generators(dev, n_max: int) -> list[np.ndarray]:
    """Fock-space generators for each factor of ``dev.provenance``, in order of application.

    Compensator ``C(phi)`` is ``exp(i phi/2 S1)``; rotator ``R(theta)`` is
    ``exp(i theta S3)`` so that coherent amplitudes turn through the full
    angle ``theta``.
    """
    s = stokes_matrices(n_max)
    gens = []
    for kind, param in dev.provenance:
        if kind == "C":
            gens.append(0.5j * param * s[1].entries)
        elif kind == "R":
            gens.append(1j * param * s[3].entries)
        else:
            raise ValueError(f"oracle cannot realize device factor {kind!r}")
    return gens


def oracle_apply_device(v: FockVector, dev) -> FockVector:
    for gen in device_generators(dev, v.n_max):
        v = _apply_generator(v, gen)
    return v


def oracle_inner(u: FockVector, v: FockVector) -> complex:
    if u.n_max != v.n_max:
        raise DimensionMismatch(f"n_max {u.n_max} vs {v.n_max}")
    return complex(np.vdot(u.flat, v.flat))

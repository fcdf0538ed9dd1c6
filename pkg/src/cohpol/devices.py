"""Passive polarization devices and the two-branch concurrence."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import UnsupportedBranchCount
from .states import CoherentSuperposition, overlap, transform_modes

UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class DeviceSpec:
    """2x2 mode matrix acting on ``(H, V)`` amplitudes.

    ``provenance`` lists the elementary factors in the order they act,
    e.g. ``(("C", phi1), ("R", theta), ("C", phi2))``.
    """

    matrix: np.ndarray
    provenance: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("device matrix must be 2x2")
        if np.max(np.abs(m.conj().T @ m - np.eye(2))) > UNITARY_TOL:
            raise ValueError("device matrix is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "provenance", tuple((str(k), float(p)) for k, p in self.provenance))

    def then(self, other: "DeviceSpec") -> "DeviceSpec":
        """``other`` applied after ``self``."""
        return DeviceSpec(other.matrix @ self.matrix, self.provenance + other.provenance)

    def inverse(self) -> "DeviceSpec":
        prov = tuple((k, -p) for k, p in reversed(self.provenance))
        return DeviceSpec(self.matrix.conj().T, prov)


def identity() -> DeviceSpec:
    return DeviceSpec(np.eye(2))


def compensator(phi: float) -> DeviceSpec:
    """Relative phase ``phi`` split symmetrically between H and V."""
    return DeviceSpec(np.diag([np.exp(0.5j * phi), np.exp(-0.5j * phi)]), (("C", phi),))


def rotator(theta: float) -> DeviceSpec:
    c, s = math.cos(theta), math.sin(theta)
    return DeviceSpec(np.array([[c, s], [-s, c]]), (("R", theta),))


def crc(phi1: float, theta: float, phi2: float) -> DeviceSpec:
    """Compensator, rotator, compensator, in that order of action."""
    return compensator(phi1).then(rotator(theta)).then(compensator(phi2))


def apply_device(psi: CoherentSuperposition, dev: DeviceSpec) -> CoherentSuperposition:
    psi.require_normalized()
    return transform_modes(psi, dev.matrix)


def concurrence(psi: CoherentSuperposition) -> float:
    """Concurrence of ``c1 |a1, b1> + c2 |a2, b2>``.

    Uses ``C = 2 |c1 c2| sqrt((1 - |<a2|a1>|^2)(1 - |<b2|b1>|^2)) / <psi|psi>``
    with ``1 - |<a2|a1>|^2 = -expm1(-|a1 - a2|^2)`` for accuracy near
    coincident branches.
    """
    if len(psi) != 2:
        raise UnsupportedBranchCount(f"concurrence needs exactly 2 branches, got {len(psi)}")
    psi.require_normalized()
    (c1, c2), amps = psi.coeffs, psi.amps
    d = amps[0] - amps[1]
    gaps = -np.expm1(-np.abs(d) ** 2)
    value = 2 * abs(c1 * c2) * math.sqrt(gaps[0] * gaps[1]) / psi.norm_sq
    return float(min(max(value, 0.0), 1.0))


class CRCRow(NamedTuple):
    theta: float
    phi1: float
    phi2: float
    concurrence: float
    nwf: float
    nwf_error_estimate: float


def crc_sweep(
    psi: CoherentSuperposition,
    thetas: Iterable[float],
    phi1_list: Iterable[float],
    phi2: float = 0.0,
    *,
    with_nwf: bool = True,
    workers: int = 1,
    nwf_options: dict | None = None,
) -> list[CRCRow]:
    """Concurrence (and NWF) of the CRC output over a ``(phi1, theta)`` grid.

    Points are independent and returned in ``phi1``-major, ``theta``-minor
    order regardless of ``workers``.  Without ``with_nwf`` the NWF columns
    are NaN.
    """
    from .phasespace import nwf

    opts = dict(nwf_options or {})
    grid = [(float(p1), float(th)) for p1 in phi1_list for th in thetas]

    def point(pt):
        p1, th = pt
        out = apply_device(psi, crc(p1, th, phi2))
        c = concurrence(out)
        if with_nwf:
            r = nwf(out, **opts)
            err = r.error_estimate if r.error_estimate is not None else math.nan
            return CRCRow(th, p1, float(phi2), c, r.delta, err)
        return CRCRow(th, p1, float(phi2), c, math.nan, math.nan)

    if workers <= 1:
        return [point(pt) for pt in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, grid))

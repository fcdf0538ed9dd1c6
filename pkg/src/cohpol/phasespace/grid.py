"""Tensor-product quadrature boxes for phase-space integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
import scipy.special

from ..states import CoherentSuperposition

RULES = ("gauss_legendre", "trapezoid")
DEFAULT_NODES = 96
DEFAULT_MARGIN = 6.0


@lru_cache(maxsize=16)
def _unit_rule(rule: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [-1, 1]; arrays are read-only because they are cached."""
    if n < 2:
        raise ValueError("need at least two nodes per axis")
    if rule == "gauss_legendre":
        x, w = scipy.special.roots_legendre(n)
        # enforce exact mirror symmetry about 0
        x = 0.5 * (x - x[::-1])
        w = 0.5 * (w + w[::-1])
    elif rule == "trapezoid":
        x = np.linspace(-1.0, 1.0, n)
        x = 0.5 * (x - x[::-1])
        w = np.full(n, 2.0 / (n - 1))
        w[0] = w[-1] = 1.0 / (n - 1)
    else:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class PhaseGrid:
    """Per-mode square box ``[q0 - L, q0 + L] x [p0 - L, p0 + L]``.

    ``center`` is given in amplitude units (``q0 = sqrt(2) Re c``,
    ``p0 = sqrt(2) Im c``); ``half_width`` is in quadrature units.  The same
    1D rule with ``nodes_per_axis`` nodes is used on all four axes.
    """

    half_width: tuple[float, float]
    nodes_per_axis: int = DEFAULT_NODES
    rule: str = "gauss_legendre"
    center: tuple[complex, complex] = (0j, 0j)

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}; expected one of {RULES}")
        hw = tuple(float(h) for h in self.half_width)
        if len(hw) != 2 or min(hw) <= 0:
            raise ValueError("half_width needs two positive entries")
        object.__setattr__(self, "half_width", hw)
        object.__setattr__(self, "center", tuple(complex(c) for c in self.center))

    @classmethod
    def for_state(
        cls,
        psi: CoherentSuperposition,
        nodes_per_axis: int = DEFAULT_NODES,
        rule: str = "gauss_legendre",
        margin: float = DEFAULT_MARGIN,
        centered: bool = True,
    ) -> "PhaseGrid":
        """Smallest box meeting the coverage rule, optionally centred on the branch mean."""
        amps = psi.amps
        center = amps.mean(axis=0) if centered else np.zeros(2, dtype=complex)
        reach = np.abs(amps - center).max(axis=0)
        hw = tuple(math.sqrt(2) * r + margin for r in reach)
        return cls(hw, nodes_per_axis, rule, tuple(center))

    def covers(self, psi: CoherentSuperposition, margin: float = DEFAULT_MARGIN) -> bool:
        reach = np.abs(psi.amps - np.asarray(self.center)).max(axis=0)
        return all(h >= math.sqrt(2) * r + margin - 1e-12 for h, r in zip(self.half_width, reach))

    def axis(self, mode: int, which: str, nodes: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights along ``q`` or ``p`` of ``mode`` (0 = H, 1 = V)."""
        n = self.nodes_per_axis if nodes is None else nodes
        x, w = _unit_rule(self.rule, n)
        c = self.center[mode]
        offset = math.sqrt(2) * (c.real if which == "q" else c.imag)
        hw = self.half_width[mode]
        return offset + hw * x, hw * w

    def halved(self) -> "PhaseGrid":
        return replace(self, nodes_per_axis=max(2, self.nodes_per_axis // 2))

"""Change of phase-space frame for negativity integrals.

Local displacements and passive two-mode unitaries act on the Wigner
function as volume-preserving affine maps of phase space, so ``int |W|``
is unchanged by them.  :func:`principal_frame` uses that freedom to move a
state into coordinates where its interference structure is aligned with
the grid axes:

1. displace every mode so the branch amplitudes have zero mean;
2. rotate the ``(H, V)`` amplitude pairs with the right singular vectors of
   the centred amplitude matrix, so the two columns become orthogonal with
   decreasing spread;
3. rotate each mode's phase so its dominant spread lies along ``q``.

When all branches end up sharing one V amplitude (always the case for two
branches) the V mode is a common coherent factor and the negativity is a
single-mode integral.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..states import CoherentSuperposition, displace, transform_modes

SNAP_TOL = 1e-12


@dataclass(frozen=True)
class FrameChange:
    state: CoherentSuperposition
    shift: np.ndarray  # per-mode displacement applied first
    unitary: np.ndarray  # then this 2x2 mode transformation
    spreads: np.ndarray  # singular values of the centred amplitude matrix

    @property
    def v_mode_trivial(self) -> bool:
        return bool(np.all(self.state.amps[:, 1] == self.state.amps[0, 1]))


def principal_frame(psi: CoherentSuperposition) -> FrameChange:
    amps = psi.amps
    center = amps.mean(axis=0)
    shifted = displace(psi, -center[0], -center[1])
    centred = amps - center
    _, s, vh = np.linalg.svd(centred, full_matrices=True)
    s = np.concatenate([s, np.zeros(2 - len(s))])
    u = np.conj(vh)
    rotated = centred @ u.T
    phases = []
    for k in range(2):
        col = rotated[:, k]
        phases.append(np.exp(-0.5j * np.angle(np.sum(col * col))) if np.any(col) else 1.0)
    u = np.diag(phases) @ u
    out = transform_modes(shifted, u)
    scale = max(1.0, float(s[0]))
    # Snap numerically-degenerate columns to an exact common value so the
    # reduced path can recognise them.
    new_amps = out.amps.copy()
    for k in range(2):
        if s[k] <= SNAP_TOL * scale:
            new_amps[:, k] = 0.0
    if not np.array_equal(new_amps, out.amps):
        out = CoherentSuperposition.from_arrays(out.coeffs, new_amps)
        out = _renormalize_like(out, psi)
    return FrameChange(out, center, u, s)


def _renormalize_like(out: CoherentSuperposition, ref: CoherentSuperposition) -> CoherentSuperposition:
    # Snapping moves amplitudes by <= 1e-12, which can break the strict
    # normalized flag; restore it with a positive rescale.
    n2 = out.norm_sq
    coeffs = out.coeffs / np.sqrt(n2)
    return CoherentSuperposition.from_arrays(coeffs, out.amps, normalized=ref.normalized)

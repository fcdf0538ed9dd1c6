"""Negativity volume ``delta = int |W| d^4x - 1`` of two-mode superpositions.

The integrand is evaluated on a tensor grid through the separable kernel
factors: on the grid ``W = sum_r X[x, r] Y[y, r]`` with ``x`` running over
one half of the coordinates and ``y`` over the other, and the hot loop only
has to form that rank-``K^2`` bilinear sum and its absolute value.

By default the state is first moved to its principal frame (see
:mod:`.frames`).  If the V mode then factors out, the integral is a
single-mode one; it is evaluated with ``nodes_per_axis**2`` nodes on each of
the two remaining axes, i.e. the 4D point budget is spent on the axes that
carry the interference fringes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from ..errors import GridTooSmall
from ..states import CoherentSuperposition
from . import _backend
from .frames import principal_frame
from .grid import DEFAULT_MARGIN, DEFAULT_NODES, PhaseGrid
from .kernels import WignerKernelTable, kernel_factors, wigner

NORMALIZATION_TOL = 1e-4
DEFAULT_TOL = 1e-4


@dataclass(frozen=True)
class NWFResult:
    delta: float
    integral: float
    error_estimate: float | None
    dims: int
    nodes: int  # nodes per integrated axis
    backend: str
    grid: PhaseGrid


def _real_rank_terms(xc: dict, yc: dict, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Turn per-pair complex factors into real columns with ``W = X @ Y.T``.

    Pairs ``(j, i)`` are the conjugates of ``(i, j)``, so only ``i <= j`` is
    kept: diagonal pairs are real, off-diagonal ones contribute
    ``2 Re(x y) = 2 x_r y_r - 2 x_i y_i``.
    """
    xs, ys = [], []
    for i in range(k):
        xs.append(xc[i, i].real)
        ys.append(yc[i, i].real)
        for j in range(i + 1, k):
            x, y = xc[i, j], yc[i, j]
            xs += [2 * x.real, -2 * x.imag]
            ys += [y.real, y.imag]
    return np.ascontiguousarray(np.stack(xs, axis=1)), np.ascontiguousarray(np.stack(ys, axis=1))


def _terms_4d(psi: CoherentSuperposition, grid: PhaseGrid, nodes: int):
    axes = [(grid.axis(m, "q", nodes), grid.axis(m, "p", nodes)) for m in range(2)]
    table = WignerKernelTable.build(psi, [(q[0], p[0]) for q, p in axes])
    wts = [np.outer(q[1], p[1]).reshape(-1) for q, p in axes]
    k = len(psi)
    xc, yc = {}, {}
    for i in range(k):
        for j in range(i, k):
            xc[i, j] = table.coeff_products[i, j] * table.h[i, j].reshape(-1) * wts[0]
            yc[i, j] = table.v[i, j].reshape(-1) * wts[1]
    return _real_rank_terms(xc, yc, k)


def _terms_2d(psi: CoherentSuperposition, grid: PhaseGrid, nodes: int):
    # V amplitudes are identical across branches: W = W_H(q1, p1) * W_coh(q2, p2)
    # and the V factor integrates to one, so only the H plane is integrated.
    q, wq = grid.axis(0, "q", nodes)
    p, wp = grid.axis(0, "p", nodes)
    c = psi.coeffs
    a = psi.amps[:, 0]
    k = len(psi)
    xc, yc = {}, {}
    for i in range(k):
        for j in range(i, k):
            lead, f, h = kernel_factors(a[i], a[j], q, p)
            xc[i, j] = c[i] * np.conj(c[j]) * lead * f * wq
            yc[i, j] = h * wp
    return _real_rank_terms(xc, yc, k)


def _integrate(terms, backend: str | None, workers: int) -> tuple[float, float]:
    x, y = terms
    core = _backend.get_backend(backend)
    rows = core.abs_bilinear_rowsums(x, y, workers)
    abs_total = float(np.sum(rows))
    signed_total = float(np.sum(x.sum(axis=0) * y.sum(axis=0)))
    return abs_total, signed_total


def abs_volume(
    psi: CoherentSuperposition,
    grid: PhaseGrid,
    *,
    reduced: bool = False,
    nodes: int | None = None,
    workers: int = 1,
    backend: str | None = None,
) -> tuple[float, float]:
    """``(int |W|, int W)`` on ``grid`` in the state's own coordinates, unchecked.

    With ``reduced=True`` only the H plane is integrated, which is exact when
    all branches share one V amplitude.
    """
    if reduced:
        return _integrate(_terms_2d(psi, grid, nodes or grid.nodes_per_axis**2), backend, workers)
    return _integrate(_terms_4d(psi, grid, nodes or grid.nodes_per_axis), backend, workers)


def abs_volume_naive(psi: CoherentSuperposition, grid: PhaseGrid) -> tuple[float, float]:
    """Same as :func:`abs_volume` (4D) by pointwise ``W`` on the full mesh; for small grids."""
    (q1, w1), (p1, v1) = grid.axis(0, "q"), grid.axis(0, "p")
    (q2, w2), (p2, v2) = grid.axis(1, "q"), grid.axis(1, "p")
    mesh = np.meshgrid(q1, p1, q2, p2, indexing="ij")
    wts = np.einsum("a,b,c,d->abcd", w1, v1, w2, v2)
    w = wigner(psi, *mesh)
    return float(np.sum(wts * np.abs(w))), float(np.sum(wts * w))


def nwf(
    psi: CoherentSuperposition,
    grid: PhaseGrid | None = None,
    *,
    nodes_per_axis: int = DEFAULT_NODES,
    rule: str = "gauss_legendre",
    margin: float = DEFAULT_MARGIN,
    frame: str = "principal",
    reduce: bool = True,
    estimate_error: bool = True,
    tol: float | None = DEFAULT_TOL,
    workers: int = 1,
    backend: str | None = None,
) -> NWFResult:
    """Negativity volume of ``psi``.

    ``grid`` (optional) is interpreted in the working frame: the principal
    frame by default, the given coordinates with ``frame="lab"``.  The error
    estimate is the change against the grid with half the nodes per axis;
    ``tol`` turns an estimate above it into :class:`GridTooSmall` (``None``
    disables the check).
    """
    psi.require_normalized()
    if frame == "principal":
        state = principal_frame(psi).state
    elif frame == "lab":
        state = psi
    else:
        raise ValueError("frame must be 'principal' or 'lab'")
    if grid is None:
        grid = PhaseGrid.for_state(state, nodes_per_axis, rule, margin)
    elif not grid.covers(state, margin):
        raise GridTooSmall(f"grid half-widths {grid.half_width} do not cover the branch amplitudes")

    reduced = reduce and bool(np.all(state.amps[:, 1] == state.amps[0, 1]))
    g = grid.nodes_per_axis
    nodes, coarse = (g**2, (g // 2) ** 2) if reduced else (g, g // 2)
    opts = dict(reduced=reduced, workers=workers, backend=backend)

    abs_total, integral = abs_volume(state, grid, nodes=nodes, **opts)
    if abs(integral - 1.0) > NORMALIZATION_TOL:
        raise GridTooSmall(f"integral of W is {integral!r}; enlarge the box or add nodes")
    delta = abs_total - 1.0

    err = None
    if estimate_error and coarse >= 2:
        coarse_abs, _ = abs_volume(state, grid, nodes=coarse, **opts)
        err = abs(delta - (coarse_abs - 1.0))
        if tol is not None and err > tol:
            raise GridTooSmall(f"NWF not converged: estimate changes by {err:.3e} (> {tol:.1e})")
    return NWFResult(delta, integral, err, 2 if reduced else 4, nodes, backend or _backend.DEFAULT_BACKEND, grid)


def nwf_sweep(
    make_state: Callable[[float], CoherentSuperposition], params: Iterable[float], **nwf_kwargs
) -> list[tuple[float, NWFResult]]:
    """``nwf`` over a parameter list; each point gets its own auto-scaled box."""
    return [(p, nwf(make_state(p), **nwf_kwargs)) for p in params]


def nwf_monte_carlo(
    psi: CoherentSuperposition, n_samples: int = 10**7, seed: int = 0, chunk: int = 10**6
) -> tuple[float, float]:
    """Importance-sampled ``delta`` and its standard error.

    Samples come from the mixture of the Gaussian envelopes of all branch-pair
    kernels, weighted by ``|c_i c_j|``.  Since ``|W_ij|`` equals its envelope,
    the ratio ``|W|/g`` is bounded by ``sum |c_i c_j|`` and the variance is
    finite.  Independent of the grid path apart from pointwise ``W``.
    """
    psi.require_normalized()
    rng = np.random.default_rng(seed)
    c = psi.coeffs
    amps = psi.amps
    k = len(c)
    weights = np.abs(np.outer(c, np.conj(c))).reshape(-1)
    z = float(weights.sum())
    mids = ((amps[:, None, :] + amps[None, :, :]) / 2).reshape(-1, 2)
    centers = math.sqrt(2) * np.stack([mids[:, 0].real, mids[:, 0].imag, mids[:, 1].real, mids[:, 1].imag], axis=1)
    probs = weights / z

    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        comp = rng.choice(k * k, size=m, p=probs)
        x = centers[comp] + rng.normal(scale=1 / math.sqrt(2), size=(m, 4))
        d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        g = (np.exp(-d2) @ probs) / math.pi**2
        r = np.abs(wigner(psi, x[:, 0], x[:, 1], x[:, 2], x[:, 3])) / g
        total += float(r.sum())
        total_sq += float((r * r).sum())
        done += m
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0)
    return mean - 1.0, math.sqrt(var / n_samples)

"""Figure data builders.  Each returns a :class:`FigureTable`; nothing is written here."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .devices import concurrence, crc_sweep
from .phasespace import PhaseGrid, nwf, wigner_slice
from .phasespace.grid import DEFAULT_MARGIN
from .states import CoherentSuperposition, make_psi1
from .stokes import SphereQuadrature, polarization_sweep, variance_sweep

FIGURES = ("var", "pola1", "wigner1", "negplott", "concplot", "outfig_c", "outfig_nwf")


@dataclass
class FigureTable:
    name: str
    columns: tuple[str, ...]
    rows: list
    settings: dict = field(default_factory=dict)

    def comments(self) -> list[str]:
        return [f"figure: {self.name}"] + [f"{k}: {v}" for k, v in self.settings.items()]


@dataclass(frozen=True)
class NWFSettings:
    nodes_per_axis: int = 96
    half_width: float | None = None
    tol: float | None = 1e-4
    workers: int = 1

    def kwargs(self) -> dict:
        grid = None
        if self.half_width is not None:
            grid = PhaseGrid((self.half_width, self.half_width), self.nodes_per_axis)
        return dict(grid=grid, nodes_per_axis=self.nodes_per_axis, tol=self.tol, workers=self.workers)

    def describe(self) -> str:
        hw = "auto" if self.half_width is None else repr(self.half_width)
        return (
            f"gauss_legendre nodes_per_axis={self.nodes_per_axis} half_width={hw} "
            f"margin={DEFAULT_MARGIN} frame=principal tol={self.tol}"
        )


def fig_var(alpha_sq_values, family: str = "psi1", beta_sq: float = 4.0) -> FigureTable:
    rows = variance_sweep(family, alpha_sq_values, beta_sq)
    return FigureTable(
        "var", ("alpha_sq", "V1", "V2", "V3"), rows, {"family": family, "beta_sq": beta_sq, "amplitudes": "real"}
    )


def fig_pola1(alpha_sq_values, n_theta: int = 128, n_phi: int = 128, tol: float | None = 1e-6, workers: int = 1):
    quad = SphereQuadrature(n_theta, n_phi)
    rows = polarization_sweep(alpha_sq_values, quad, tol=tol, workers=workers)
    return FigureTable(
        "pola1",
        ("alpha_sq", "P_vertical", "P_antidiagonal"),
        rows,
        {"states": "|0,a> and |a,-a>", "sphere_rule": f"gauss_legendre_cos x trapezoid {n_theta}x{n_phi}", "tol": tol},
    )


def fig_wigner1(psi: CoherentSuperposition, extent: float = 4.0, points: int = 81, label: str = "") -> FigureTable:
    x = np.linspace(-extent, extent, points)
    xx, yy, w = wigner_slice(psi, ("q1", "p1"), {"q2": 0.0, "p2": 0.0}, x, x)
    rows = list(zip(xx.ravel(), yy.ravel(), w.ravel()))
    return FigureTable(
        "wigner1", ("q1", "p1", "W"), rows, {"state": label, "plane": "q1,p1 at q2=p2=0", "points": f"{points}x{points}"}
    )


def fig_negplott(alphas, beta: complex = 2.0, nwf_settings: NWFSettings = NWFSettings()) -> FigureTable:
    rows = []
    for a in alphas:
        r = nwf(make_psi1(a, beta), **nwf_settings.kwargs())
        rows.append((float(a), r.delta, r.error_estimate if r.error_estimate is not None else math.nan))
    return FigureTable(
        "negplott",
        ("alpha", "nwf", "nwf_error_estimate"),
        rows,
        {"state": f"psi1(alpha, {beta!r})", "grid": nwf_settings.describe()},
    )


def fig_concplot(alphas, betas) -> FigureTable:
    rows = [(float(a), float(b), concurrence(make_psi1(a, b))) for a in alphas for b in betas]
    return FigureTable("concplot", ("alpha", "beta", "concurrence"), rows, {"state": "psi1(alpha, beta), real"})


def fig_outfig(
    psi: CoherentSuperposition,
    thetas,
    phi1_list,
    phi2: float = 0.0,
    *,
    with_nwf: bool,
    label: str = "",
    nwf_settings: NWFSettings = NWFSettings(),
) -> FigureTable:
    sweep = crc_sweep(
        psi, thetas, phi1_list, phi2, with_nwf=with_nwf, workers=nwf_settings.workers, nwf_options=_point_opts(nwf_settings)
    )
    settings = {"state": label, "device": "C(phi2) R(theta) C(phi1)"}
    if with_nwf:
        settings["grid"] = nwf_settings.describe()
        cols = ("theta_rad", "phi1_rad", "phi2_rad", "concurrence", "nwf", "nwf_error_estimate")
        return FigureTable("outfig_nwf", cols, [tuple(r) for r in sweep], settings)
    cols = ("theta_rad", "phi1_rad", "phi2_rad", "concurrence")
    return FigureTable("outfig_c", cols, [tuple(r)[:4] for r in sweep], settings)


def _point_opts(s: NWFSettings) -> dict:
    # the sweep already parallelizes over points; each NWF runs single-threaded
    opts = s.kwargs()
    opts["workers"] = 1
    return opts


def save_plot(table: FigureTable, path) -> None:
    """Static SVG rendering of a figure table (needs matplotlib)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "cohpol"
    fig, ax = plt.subplots(figsize=(6, 4.2))
    data = np.array([[float(v) for v in r] for r in table.rows]) if table.rows else np.zeros((0, len(table.columns)))
    name = table.name
    if name in ("var", "pola1", "negplott"):
        for k in range(1, data.shape[1] if name != "negplott" else 2):
            ax.plot(data[:, 0], data[:, k], label=table.columns[k])
        ax.set_xlabel(table.columns[0])
        ax.legend()
    elif name in ("wigner1", "concplot"):
        xs, ys = np.unique(data[:, 0]), np.unique(data[:, 1])
        z = data[:, 2].reshape(len(xs), len(ys))
        cs = ax.contourf(xs, ys, z.T, levels=30, cmap="RdBu_r" if name == "wigner1" else "viridis")
        fig.colorbar(cs, ax=ax)
        ax.set_xlabel(table.columns[0])
        ax.set_ylabel(table.columns[1])
    else:
        col = 3 if name == "outfig_c" else 4
        for p1 in np.unique(data[:, 1]):
            sel = data[:, 1] == p1
            ax.plot(data[sel, 0], data[sel, col], label=f"phi1={p1:.4f}")
        ax.set_xlabel("theta_rad")
        ax.set_ylabel(table.columns[col])
        ax.legend()
    ax.set_title(name)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)

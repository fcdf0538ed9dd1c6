"""``cohpol`` command line.

Exit codes: 0 success, 1 validation failure, 2 configuration or input error,
3 numerical convergence failure (diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import figures, interchange
from .errors import (
    CohpolError,
    GridTooSmall,
    OracleSelfCheckFailed,
    QuadratureTooCoarse,
    StateFormatError,
    TruncationTooSevere,
)
from .states import FAMILIES, CoherentSuperposition, make_family, make_psi1
from .stokes import stokes_stats
from .tables import atomic_write_text, write_csv

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CONVERGENCE = 0, 1, 2, 3
OUT_DIR_ENV = "COHPOL_OUT_DIR"

_PI_TERM = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/(\d+(?:\.\d*)?))?$")


class ConfigError(ValueError):
    pass


def parse_real(text: str) -> float:
    """Float, or a multiple of pi such as ``pi/8``, ``-2pi``, ``0.5*pi/3``."""
    t = text.strip().replace(" ", "")
    m = _PI_TERM.match(t)
    if m:
        lead = m.group(1)
        k = -1.0 if lead == "-" else 1.0 if lead in ("", "+") else float(lead)
        return k * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
    try:
        val = float(t)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None
    if not math.isfinite(val):
        raise ConfigError(f"not finite: {text!r}")
    return val


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(parse_real(parts[0]))
    if len(parts) == 2:
        return complex(parse_real(parts[0]), parse_real(parts[1]))
    raise ConfigError(f"complex value must be 're' or 're,im', got {text!r}")


def parse_range(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError(f"range must be 'start,stop,num', got {text!r}")
    start, stop = parse_real(parts[0]), parse_real(parts[1])
    try:
        num = int(parts[2])
    except ValueError:
        raise ConfigError(f"range count must be an integer, got {parts[2]!r}") from None
    if num < 1:
        raise ConfigError("range must contain at least one point")
    if stop < start:
        raise ConfigError("range must be ordered (start <= stop)")
    return np.linspace(start, stop, num)


def parse_list(text: str) -> list[float]:
    vals = [parse_real(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise ConfigError("list must not be empty")
    return vals


@dataclass
class RunConfig:
    command: str
    figure: str | None = None
    state: CoherentSuperposition | None = None
    state_label: str = ""
    alpha: complex | None = None
    beta: complex | None = None
    sweep: np.ndarray | None = None
    thetas: np.ndarray | None = None
    phi1_list: list = field(default_factory=list)
    phi2: float = 0.0
    grid_nodes: int = 96
    half_width: float | None = None
    tol: float | None = None
    n_max: int = 48
    seed: int = 0
    workers: int = 1
    out_dir: Path = Path(".")
    emit_plots: bool = False

    def validate(self) -> None:
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("--tol must be positive")
        if self.grid_nodes < 4:
            raise ConfigError("--grid-nodes must be at least 4")
        if self.half_width is not None and not self.half_width > 0:
            raise ConfigError("--half-width must be positive")
        if self.workers < 1:
            raise ConfigError("--workers must be at least 1")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or the current directory)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cohpol", description="Polarization and phase-space toolkit for two-mode coherent superpositions.")
    sub = ap.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="write the data behind one figure as CSV")
    fig.add_argument("id", choices=figures.FIGURES)
    src = fig.add_mutually_exclusive_group()
    src.add_argument("--state", help="interchange file with the input state")
    src.add_argument("--family", choices=FAMILIES, help="inline state family")
    fig.add_argument("--alpha", help="complex 're,im' (use --alpha=-1,0 for negative values)")
    fig.add_argument("--beta", help="complex 're,im'")
    fig.add_argument("--beta-sq", help="|beta|^2 with real beta > 0 (var, outfig_*)")
    fig.add_argument("--sep-sq", help="|alpha - beta|^2 with alpha = beta - sqrt(sep) (outfig_*)")
    fig.add_argument("--sweep", help="'start,stop,num' for the swept parameter")
    fig.add_argument("--theta-range", help="'start,stop,num' in radians; 'pi/2' style terms allowed")
    fig.add_argument("--phi1-list", help="comma list, e.g. '0,pi/8,pi/6,pi/4'")
    fig.add_argument("--phi2", default="0")
    fig.add_argument("--grid-nodes", type=int, default=96)
    fig.add_argument("--half-width", type=float)
    fig.add_argument("--tol", type=float, help="convergence tolerance of the figure's integral")
    fig.add_argument("--emit-plots", action="store_true", help="also write an SVG next to the CSV")
    _common(fig)

    val = sub.add_parser("validate", help="oracle cross-checks and the printed-formula ledger")
    val.add_argument("--n-max", type=int, default=48)
    _common(val)

    st = sub.add_parser("state", help="inspect or convert state files")
    st_sub = st.add_subparsers(dest="action", required=True)
    ins = st_sub.add_parser("inspect")
    ins.add_argument("path")
    conv = st_sub.add_parser("convert", help="rewrite a state file, or write an inline family to a file")
    conv.add_argument("path", nargs="?", help="input interchange file")
    conv.add_argument("-o", "--output", required=True)
    conv.add_argument("--family", choices=FAMILIES)
    conv.add_argument("--alpha")
    conv.add_argument("--beta")
    return ap


def _out_dir(args) -> Path:
    return Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or ".")


def _inline_state(family, alpha, beta) -> tuple[CoherentSuperposition, str]:
    a = parse_complex(alpha) if alpha else 1.0
    b = parse_complex(beta) if beta else 0.0
    return make_family(family, a, b), f"{family}(alpha={a!r}, beta={b!r})"


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command, seed=args.seed, workers=args.workers, out_dir=_out_dir(args))
    if args.command == "validate":
        cfg.n_max = args.n_max
        if cfg.n_max < 32:
            raise ConfigError("--n-max must be at least 32")
        return cfg
    cfg.figure = args.id
    cfg.grid_nodes = args.grid_nodes
    cfg.half_width = args.half_width
    cfg.tol = args.tol
    cfg.emit_plots = args.emit_plots
    cfg.alpha = parse_complex(args.alpha) if args.alpha else None
    cfg.beta = parse_complex(args.beta) if args.beta else None
    if args.beta_sq is not None:
        bsq = parse_real(args.beta_sq)
        if bsq < 0:
            raise ConfigError("--beta-sq must be non-negative")
        cfg.beta = complex(math.sqrt(bsq))
    if args.sep_sq is not None:
        sep = parse_real(args.sep_sq)
        if sep < 0:
            raise ConfigError("--sep-sq must be non-negative")
        b = cfg.beta if cfg.beta is not None else complex(math.sqrt(2))
        cfg.beta, cfg.alpha = b, b - math.sqrt(sep)
    if args.state:
        cfg.state = interchange.read_state(args.state)
        cfg.state_label = f"file {Path(args.state).name}"
    elif args.family:
        cfg.state, cfg.state_label = _inline_state(args.family, args.alpha, args.beta)
    cfg.sweep = parse_range(args.sweep) if args.sweep else None
    cfg.thetas = parse_range(args.theta_range) if args.theta_range else np.linspace(0, math.pi / 2, 41)
    cfg.phi1_list = parse_list(args.phi1_list) if args.phi1_list else [0.0, math.pi / 8, math.pi / 6, math.pi / 4]
    cfg.phi2 = parse_real(args.phi2)
    cfg.validate()
    return cfg


def _nwf_settings(cfg: RunConfig) -> figures.NWFSettings:
    tol = cfg.tol if cfg.tol is not None else 1e-4
    return figures.NWFSettings(cfg.grid_nodes, cfg.half_width, tol, cfg.workers)


def build_figure(cfg: RunConfig) -> figures.FigureTable:
    name = cfg.figure
    if name == "var":
        beta_sq = abs(cfg.beta) ** 2 if cfg.beta is not None else 4.0
        sweep = cfg.sweep if cfg.sweep is not None else np.linspace(0, 10, 41)
        return figures.fig_var(sweep, "psi1", beta_sq)
    if name == "pola1":
        sweep = cfg.sweep if cfg.sweep is not None else np.linspace(0, 9, 37)
        tol = cfg.tol if cfg.tol is not None else 1e-6
        return figures.fig_pola1(sweep, tol=tol, workers=cfg.workers)
    if name == "wigner1":
        if cfg.state is None:
            a = cfg.alpha if cfg.alpha is not None else 1.0
            b = cfg.beta if cfg.beta is not None else -1.0
            psi, label = make_psi1(a, b), f"psi1(alpha={a!r}, beta={b!r})"
        else:
            psi, label = cfg.state, cfg.state_label
        return figures.fig_wigner1(psi, label=label)
    if name == "negplott":
        sweep = cfg.sweep if cfg.sweep is not None else np.linspace(-2, 2, 17)
        beta = cfg.beta if cfg.beta is not None else 2.0
        return figures.fig_negplott(sweep, beta, _nwf_settings(cfg))
    if name == "concplot":
        sweep = cfg.sweep if cfg.sweep is not None else np.linspace(0, 3, 31)
        return figures.fig_concplot(sweep, sweep)
    if name in ("outfig_c", "outfig_nwf"):
        if cfg.state is None:
            b = cfg.beta if cfg.beta is not None else complex(math.sqrt(2))
            a = cfg.alpha if cfg.alpha is not None else b - 2
            psi, label = make_psi1(a, b), f"psi1(alpha={a!r}, beta={b!r})"
        else:
            psi, label = cfg.state, cfg.state_label
        return figures.fig_outfig(
            psi,
            cfg.thetas,
            cfg.phi1_list,
            cfg.phi2,
            with_nwf=name == "outfig_nwf",
            label=label,
            nwf_settings=_nwf_settings(cfg),
        )
    raise ConfigError(f"unknown figure {name!r}")


def cmd_figure(cfg: RunConfig) -> int:
    table = build_figure(cfg)
    path = write_csv(cfg.out_dir / f"{table.name}.csv", table.columns, table.rows, table.comments())
    print(path)
    if cfg.emit_plots:
        svg = cfg.out_dir / f"{table.name}.svg"
        tmp = svg.with_name(f".{svg.name}.tmp{os.getpid()}")
        figures.save_plot(table, tmp)
        os.replace(tmp, svg)
        print(svg)
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    from .validate import run_validation

    report = run_validation(cfg.n_max, cfg.seed)
    text = json.dumps(report, indent=2) + "\n"
    sys.stdout.write(text)
    if cfg.out_dir != Path("."):
        atomic_write_text(cfg.out_dir / "validation_report.json", text)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_state(args) -> int:
    if args.action == "inspect":
        psi = interchange.read_state(args.path)
        print(f"branches: {len(psi)}")
        print("coeff_re,coeff_im,ah_re,ah_im,av_re,av_im")
        for t in psi.terms:
            c, a, b = complex(t.coeff), complex(t.amp_h), complex(t.amp_v)
            print(",".join(repr(x) for x in (c.real, c.imag, a.real, a.imag, b.real, b.imag)))
        print(f"norm: {math.sqrt(psi.norm_sq)!r}")
        if psi.normalized:
            m = stokes_stats(psi).mean
            print("stokes_mean: " + ",".join(f"{x:.12g}" for x in m))
        return EXIT_OK
    if args.path:
        if args.family:
            raise ConfigError("give either an input file or --family, not both")
        psi = interchange.read_state(args.path)
    elif args.family:
        psi, _ = _inline_state(args.family, args.alpha, args.beta)
    else:
        raise ConfigError("convert needs an input file or --family")
    interchange.write_state(psi, args.output)
    print(args.output)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "state":
            return cmd_state(args)
        cfg = config_from_args(args)
        return cmd_figure(cfg) if cfg.command == "figure" else cmd_validate(cfg)
    except (GridTooSmall, QuadratureTooCoarse, TruncationTooSevere, OracleSelfCheckFailed) as exc:
        print(f"cohpol: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (CohpolError, ConfigError, StateFormatError, OSError, ValueError) as exc:
        print(f"cohpol: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

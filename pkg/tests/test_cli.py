import math
import subprocess
import sys

import numpy as np
import pytest

from cohpol import interchange
from cohpol.cli import main, parse_complex, parse_range, parse_real
from cohpol.states import make_psi3
from cohpol.tables import read_csv


def run(tmp_path, *args):
    return main([*args, "--out-dir", str(tmp_path)])


def rows_of(path):
    header, rows = read_csv(path)
    return header, np.array(rows, dtype=float)


def test_parsers():
    assert parse_real("pi/8") == pytest.approx(math.pi / 8)
    assert parse_real("-2.5") == -2.5
    assert parse_complex("1,-2") == complex(1, -2)
    assert parse_complex("3") == 3
    assert len(parse_range("0,pi/2,5")) == 5
    for bad in ("1,2", "0,1,0", "2,1,3", "a,b,c"):
        with pytest.raises(ValueError):
            parse_range(bad)


def test_var(tmp_path):
    assert run(tmp_path, "figure", "var", "--sweep", "0,4,3") == 0
    header, data = rows_of(tmp_path / "var.csv")
    assert header == ["alpha_sq", "V1", "V2", "V3"]
    assert data[-1, 1:] == pytest.approx([8, 8, 8], abs=1e-10)
    assert (tmp_path / "var.csv").read_text().startswith("# figure: var\n")


def test_pola1_zero_row(tmp_path):
    assert run(tmp_path, "figure", "pola1", "--sweep", "0,2,3") == 0
    header, data = rows_of(tmp_path / "pola1.csv")
    assert header == ["alpha_sq", "P_vertical", "P_antidiagonal"]
    assert data[0, 1:] == pytest.approx([0, 0], abs=1e-12)


def test_negplott_product_row(tmp_path):
    assert run(tmp_path, "figure", "negplott", "--sweep", "1,2,2") == 0
    header, data = rows_of(tmp_path / "negplott.csv")
    assert header == ["alpha", "nwf", "nwf_error_estimate"]
    assert abs(data[1, 1]) <= 1e-6
    assert data[0, 1] > 0.01


def test_concplot(tmp_path):
    assert run(tmp_path, "figure", "concplot", "--sweep", "0,1,3") == 0
    header, data = rows_of(tmp_path / "concplot.csv")
    assert header == ["alpha", "beta", "concurrence"]
    same = data[data[:, 0] == data[:, 1]]
    assert np.all(same[:, 2] <= 1e-12)


def test_outfig_c(tmp_path):
    assert run(tmp_path, "figure", "outfig_c", "--theta-range", "0,pi/2,5", "--phi1-list", "0,pi/8") == 0
    header, data = rows_of(tmp_path / "outfig_c.csv")
    assert header == ["theta_rad", "phi1_rad", "phi2_rad", "concurrence"]
    quarter = data[np.isclose(data[:, 0], math.pi / 4) & (data[:, 1] == 0)]
    assert quarter[0, 3] <= 1e-10


def test_outfig_nwf_columns(tmp_path):
    assert run(tmp_path, "figure", "outfig_nwf", "--theta-range", "0,pi/2,3", "--phi1-list", "0") == 0
    header, data = rows_of(tmp_path / "outfig_nwf.csv")
    assert header == ["theta_rad", "phi1_rad", "phi2_rad", "concurrence", "nwf", "nwf_error_estimate"]
    assert np.ptp(data[:, 4]) < 2e-6


def test_wigner1_and_plot(tmp_path):
    assert run(tmp_path, "figure", "wigner1", "--emit-plots") == 0
    header, data = rows_of(tmp_path / "wigner1.csv")
    assert header == ["q1", "p1", "W"]
    assert data.shape == (81 * 81, 3)
    assert data[:, 2].min() < 0
    assert (tmp_path / "wigner1.svg").read_text().lstrip().startswith("<?xml")


def test_settings_in_comment_header(tmp_path):
    run(tmp_path, "figure", "negplott", "--sweep", "1,2,2", "--grid-nodes", "64")
    text = (tmp_path / "negplott.csv").read_text()
    assert "64" in "".join(line for line in text.splitlines() if line.startswith("#"))


@pytest.mark.parametrize(
    "fig, extra",
    [
        ("var", ["--sweep", "0,6,7"]),
        ("pola1", ["--sweep", "0,3,4"]),
        ("negplott", ["--sweep=-1,2,4"]),
        ("concplot", ["--sweep", "0,2,5"]),
        ("outfig_nwf", ["--theta-range", "0,pi/2,4", "--phi1-list", "0,pi/6"]),
    ],
)
def test_byte_identical_across_runs_and_workers(tmp_path, fig, extra):
    outputs = []
    for workers in (1, 4, 8, 1):
        d = tmp_path / f"w{workers}_{len(outputs)}"
        d.mkdir()
        assert run(d, "figure", fig, *extra, "--workers", str(workers)) == 0
        outputs.append((d / f"{fig}.csv").read_bytes())
    assert len(set(outputs)) == 1


def test_config_errors(tmp_path):
    assert run(tmp_path, "figure", "var", "--sweep", "3,1,4") == 2
    assert run(tmp_path, "figure", "negplott", "--tol", "-1") == 2
    assert run(tmp_path, "figure", "var", "--beta-sq", "-4") == 2
    assert run(tmp_path, "figure", "var", "--workers", "0") == 2
    assert run(tmp_path, "figure", "outfig_c", "--alpha", "x,y") == 2
    assert run(tmp_path, "validate", "--n-max", "8") == 2
    assert not list(tmp_path.glob("*.csv"))


def test_convergence_failure_leaves_no_csv(tmp_path, capsys):
    assert run(tmp_path, "figure", "negplott", "--sweep", "1,2,2", "--grid-nodes", "8") == 3
    assert "convergence" in capsys.readouterr().err
    assert not list(tmp_path.iterdir())


def test_unknown_figure_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "figure", "nope")
    assert exc.value.code == 2


def test_out_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("COHPOL_OUT_DIR", str(tmp_path))
    assert main(["figure", "var", "--sweep", "0,1,2"]) == 0
    assert (tmp_path / "var.csv").exists()


def test_state_inspect(tmp_path, capsys):
    path = tmp_path / "psi3.txt"
    interchange.write_state(make_psi3(2), path)
    assert main(["state", "inspect", str(path)]) == 0
    out = capsys.readouterr().out
    assert "norm: 1.0" in out or "norm: 0.9999999999999999" in out
    mean = [float(x) for x in out.split("stokes_mean: ")[1].split(",")]
    assert abs(mean[1]) < 1e-12


def test_state_convert_round_trip(tmp_path):
    a, b, c = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "c.txt"
    assert main(["state", "convert", "-o", str(a), "--family", "psi1", "--alpha", "1,0.5", "--beta", "-2"]) == 0
    assert main(["state", "convert", str(a), "-o", str(b)]) == 0
    assert main(["state", "convert", str(b), "-o", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_state_from_file_drives_figure(tmp_path):
    path = tmp_path / "s.txt"
    main(["state", "convert", "-o", str(path), "--family", "psi1", "--alpha", "-1", "--beta", "1"])
    assert run(tmp_path, "figure", "outfig_c", "--state", str(path), "--theta-range", "0,1,2", "--phi1-list", "0") == 0


def test_truncated_file_names_field(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("normalized,false\n1,0,0,0\n")
    assert main(["state", "inspect", str(path)]) == 2
    assert "av_re" in capsys.readouterr().err


def test_validate_command(tmp_path, capsys):
    assert run(tmp_path, "validate") == 0
    assert (tmp_path / "validation_report.json").exists()
    assert '"passed": true' in capsys.readouterr().out


def test_console_script(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cohpol.cli", "figure", "var", "--sweep", "0,1,2", "--out-dir", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "var.csv").exists()

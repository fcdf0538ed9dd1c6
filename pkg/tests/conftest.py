import math

import numpy as np
import pytest

from cohpol.states import CoherentSuperposition, normalize


def random_amp(rng, rmax=2.5):
    r = rmax * math.sqrt(rng.uniform())
    return complex(r * np.exp(2j * math.pi * rng.uniform()))


def random_state(rng, k=None, rmax=2.5):
    """Normalized superposition of ``k`` (1..3) branches with ``|amp| <= rmax``."""
    k = k or int(rng.integers(1, 4))
    terms = []
    for _ in range(k):
        c = complex(rng.normal(), rng.normal())
        terms.append((c, random_amp(rng, rmax), random_amp(rng, rmax)))
    return normalize(CoherentSuperposition(tuple(terms)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- one summary line per acceptance criterion -------------------------------

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA[name] = (report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        outcome, detail = _CRITERIA[name]
        number = int(name.split("_")[2])
        label = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {label}  {name[len('test_criterion_NN_'):]}  {detail}")

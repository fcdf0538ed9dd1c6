"""Oracle cross-checks and the ledger of printed-formula discrepancies.

:func:`run_validation` returns a JSON-ready dict with three sections:

``invariants``
    closed form vs truncated-basis oracle, each with a pass flag.
``typo_ledger``
    published formulas, each marked ``confirmed`` or ``contradicted`` by the
    oracle.  A contradiction is an expected finding, not a failure.
``claims``
    qualitative statements about device behaviour, evaluated numerically.

The report depends only on ``(n_max, seed)``.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import fock, reference_forms as ref
from .devices import apply_device, concurrence, crc, rotator
from .errors import OracleSelfCheckFailed
from .phasespace import nwf, wigner_point
from .states import make_psi1, make_psi2, make_psi3, make_psi_pm, product_state, superposition
from .stokes import SphereQuadrature, polarization_degree, q_function, stokes_stats

COMMUTATOR_TOL = 1e-12
ORACLE_TOL = 1e-8
WIGNER_TOL = 1e-7
CONCURRENCE_TOL = 1e-7
MAX_AMP = 2.5
MOMENT_KEYS = ("S1", "S2", "S3", "S1^2", "S2^2", "S3^2")


def _c(rng: np.random.Generator, scale: float = 1.0) -> complex:
    """Complex number, uniform in the disc of radius ``scale``."""
    r = scale * math.sqrt(rng.uniform())
    return r * complex(math.cos(t := rng.uniform(0, 2 * math.pi)), math.sin(t))


def random_state(rng: np.random.Generator, k_max: int = 3, scale: float = 2.0):
    k = int(rng.integers(1, k_max + 1))
    return superposition(*[(_c(rng) + 0.2, _c(rng, scale), _c(rng, scale)) for _ in range(k)])


def _engine_moments(psi) -> dict[str, float]:
    st = stokes_stats(psi)
    return dict(zip(MOMENT_KEYS, (*st.mean[1:], *st.second_moment)))


def _entry(name: str, value: float, tol: float, **extra) -> dict:
    return {"name": name, "value": float(value), "tolerance": tol, "passed": bool(value <= tol), **extra}


def _verdict(name: str, err: float, tol: float, detail: str) -> dict:
    return {
        "item": name,
        "verdict": "confirmed" if err <= tol else "contradicted",
        "max_deviation": float(err),
        "detail": detail,
    }


def oracle_self_checks(n_max: int) -> list[dict]:
    return [
        _entry("stokes_commutators", fock.interior_commutator_error(n_max), COMMUTATOR_TOL),
        _entry("stokes_casimir", fock.interior_casimir_error(n_max), 1e-11),
        _entry("bosonic_commutators", fock.interior_bosonic_error(n_max), COMMUTATOR_TOL),
    ]


def _invariants(n_max: int, rng: np.random.Generator) -> list[dict]:
    s = fock.stokes_matrices(n_max)
    sp = fock.stokes_sparse(n_max)
    sq = [fock.OperatorMatrix(n_max, (sp[k] @ sp[k]).toarray()) for k in (1, 2, 3)]
    out = []

    worst_mean = worst_var = 0.0
    for _ in range(20):
        a, b = _c(rng, MAX_AMP), _c(rng, MAX_AMP)
        psi = product_state(a, b)
        v = fock.fock_from_superposition(psi, n_max)
        st = stokes_stats(psi)
        n = abs(a) ** 2 + abs(b) ** 2
        s1 = fock.oracle_expectation(v, s[1]).real
        worst_mean = max(worst_mean, abs(st.mean[1] - (abs(a) ** 2 - abs(b) ** 2)), abs(s1 - st.mean[1]))
        for k in range(3):
            ov = fock.oracle_expectation(v, sq[k]).real - fock.oracle_expectation(v, s[k + 1]).real ** 2
            worst_var = max(worst_var, abs(st.variance[k] - n), abs(ov - n))
    out.append(_entry("product_mean_s1", worst_mean, ORACLE_TOL))
    out.append(_entry("product_equal_variances", worst_var, ORACLE_TOL))

    worst = worst_q = 0.0
    for _ in range(5):
        psi = random_state(rng)
        v = fock.fock_from_superposition(psi, n_max)
        st = stokes_stats(psi)
        for k in range(4):
            worst = max(worst, abs(fock.oracle_expectation(v, s[k]).real - st.mean[k]))
        for k in range(3):
            worst = max(worst, abs(fock.oracle_expectation(v, sq[k]).real - st.second_moment[k]))
        for _ in range(4):
            th, ph = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
            worst_q = max(worst_q, abs(q_function(psi, th, ph) - fock.oracle_q_point(v, th, ph)))
    out.append(_entry("stokes_moments_vs_oracle", worst, ORACLE_TOL))
    out.append(_entry("q_function_vs_oracle", worst_q, ORACLE_TOL))

    theta, phi, wt = SphereQuadrature().nodes
    worst = max(abs(float(np.sum(wt * q_function(random_state(rng), theta, phi))) - 1) for _ in range(3))
    out.append(_entry("q_normalization", worst, ORACLE_TOL))

    worst = 0.0
    for _ in range(3):
        psi = random_state(rng, scale=1.5)
        v = fock.fock_from_superposition(psi, n_max)
        for _ in range(5):
            pt = tuple(rng.uniform(-2.5, 2.5, size=4))
            worst = max(worst, abs(wigner_point(psi, pt) - fock.oracle_wigner_point(v, pt)))
    out.append(_entry("wigner_vs_displaced_parity", worst, WIGNER_TOL))

    worst = 0.0
    for _ in range(5):
        psi = superposition((_c(rng) + 0.2, _c(rng, MAX_AMP), _c(rng, MAX_AMP)), (_c(rng) + 0.2, _c(rng, MAX_AMP), _c(rng, MAX_AMP)))
        worst = max(worst, abs(concurrence(psi) - fock.oracle_concurrence(fock.fock_from_superposition(psi, n_max))))
    out.append(_entry("concurrence_vs_oracle", worst, CONCURRENCE_TOL))

    worst = 0.0
    for _ in range(3):
        psi = make_psi1(_c(rng, 1.5), _c(rng, 1.5))
        dev = crc(*rng.uniform(-math.pi, math.pi, size=3))
        u = fock.fock_from_superposition(apply_device(psi, dev), n_max)
        w = fock.oracle_apply_device(fock.fock_from_superposition(psi, n_max), dev)
        worst = max(worst, abs(1 - abs(fock.oracle_inner(u, w)) / math.sqrt(u.norm_sq * w.norm_sq)))
    out.append(_entry("device_vs_oracle_evolution", worst, ORACLE_TOL))

    worst = 0.0
    for _ in range(10):
        a, b, g, l = (_c(rng, 2.0) for _ in range(4))
        for sign in (1, -1):
            eng = _engine_moments(make_psi_pm(a, b, g, l, sign))
            cor = ref.corrected_superposition_moments(a, b, g, l, sign)
            worst = max(worst, max(abs(cor[k] - eng[k]) for k in MOMENT_KEYS))
    out.append(_entry("two_branch_moments_corrected_form", worst, ORACLE_TOL))

    worst = 0.0
    for _ in range(50):
        a, b = _c(rng, 2.0), _c(rng, 2.0)
        th, p1, p2 = rng.uniform(-math.pi, math.pi, size=3)
        got = apply_device(make_psi1(a, b), crc(p1, th, p2)).amps
        worst = max(worst, float(np.abs(got - np.array(ref.printed_crc_output(a, b, th, p1, p2))).max()))
    out.append(_entry("crc_output_amplitudes", worst, 1e-12))
    return out


def _max_over(draws: int, rng, fn: Callable[[], float]) -> float:
    return max(fn() for _ in range(draws))


def _typo_ledger(n_max: int, rng: np.random.Generator) -> list[dict]:
    s = fock.stokes_sparse(n_max)
    idx = fock.interior_indices(n_max)
    ledger = []

    # S3 sign: with S3' = -S3 the algebra closes only with the wrong sign.
    comm = s[1] @ s[2] - s[2] @ s[1] - 2j * (-s[3])
    err = float(np.abs(comm[idx][:, idx].toarray()).max())
    ledger.append(_verdict("stokes_s3_printed_sign", err, COMMUTATOR_TOL, "printed i(a'b - b'a) breaks [S1,S2]=2iS3"))

    def product_dev(key):
        def f():
            a, b = _c(rng, MAX_AMP), _c(rng, MAX_AMP)
            return abs(ref.printed_product_moments(a, b)[key] - _engine_moments(product_state(a, b))[key])

        return f

    for key in MOMENT_KEYS:
        ledger.append(_verdict(f"product_moment_{key}", _max_over(10, rng, product_dev(key)), ORACLE_TOL, "random complex product states"))

    ledger.append(
        _verdict(
            "q_trailing_factor_literal_e2",
            abs(ref.printed_q_product(0, 0, 0.3, 0.4, literal_e2=True) - 1 / (4 * math.pi)),
            ORACLE_TOL,
            "vacuum Q must be 1/(4 pi)",
        )
    )
    err = 0.0
    for _ in range(10):
        a, b = _c(rng, 2.0), rng.uniform(0, 2.0)
        th, ph = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        err = max(err, abs(ref.printed_q_product(a, b, th, ph) - q_function(product_state(a, b), th, ph)))
    ledger.append(_verdict("q_trailing_factor_as_exp_z", err, ORACLE_TOL, "real non-negative beta"))

    quad = SphereQuadrature()
    p_vals = {x: polarization_degree(product_state(math.sqrt(x), 0), quad) for x in (16, 25, 36)}
    err = max(abs(ref.printed_polarization_closed_form(math.sqrt(x)) - p) for x, p in p_vals.items())
    ledger.append(_verdict("polarization_closed_form", err, 0.01, "|alpha|^2 in {16, 25, 36}, 128x128 sphere rule"))
    err = max(abs(ref.printed_polarization_asymptote(math.sqrt(x)) - p) for x, p in p_vals.items())
    ledger.append(_verdict("polarization_asymptote", err, 0.01, "|alpha|^2 in {16, 25, 36}, 128x128 sphere rule"))

    draws = [tuple(_c(rng, 2.0) for _ in range(4)) for _ in range(10)]
    real_draws = [tuple(complex(rng.uniform(-2, 2)) for _ in range(4)) for _ in range(10)]
    for key in MOMENT_KEYS:
        err = max(abs(ref.printed_superposition_moments(*d)[key] - _engine_moments(make_psi_pm(*d))[key]) for d in draws)
        err_r = max(abs(ref.printed_superposition_moments(*d)[key] - _engine_moments(make_psi_pm(*d))[key]) for d in real_draws)
        ledger.append(
            _verdict(f"two_branch_moment_{key}", err, ORACLE_TOL, f"complex draws; real-amplitude deviation {err_r:.3e}")
        )

    err = max(abs(ref.printed_norm_sq_pm(*d) - ref.exact_norm_sq_pm(*d, -1)) for d in draws)
    ledger.append(_verdict("two_branch_norm_minus_sign", err, ORACLE_TOL, "printed norm has no sign dependence"))
    err = max(abs(ref.printed_norm_psi1(d[0], d[1]) - make_psi1(d[0], d[1]).coeffs[0]) for d in draws)
    ledger.append(_verdict("psi1_norm_complex", err, ORACLE_TOL, "printed exponent 2 alpha beta is exact only for real amplitudes"))
    err = max(abs(ref.printed_norm_psi2(d[0]) - abs(make_psi2(d[0]).coeffs[0])) for d in draws)
    ledger.append(_verdict("psi2_norm", err, ORACLE_TOL, ""))
    err = max(abs(ref.printed_norm_psi3(d[0]) - abs(make_psi3(d[0]).coeffs[0])) for d in draws)
    ledger.append(_verdict("psi3_norm", err, ORACLE_TOL, ""))

    err = max(abs(ref.printed_q_superposition(*d, 0.7, 1.9) - q_function(make_psi_pm(*d), 0.7, 1.9)) for d in draws)
    ledger.append(_verdict("two_branch_q_with_z12", err, ORACLE_TOL, "z12 = conj(w1) w2"))
    err = max(abs(ref.printed_concurrence(*d) - concurrence(make_psi_pm(*d))) for d in draws)
    ledger.append(_verdict("two_branch_concurrence", err, CONCURRENCE_TOL, "plus superposition"))

    # Rotator generator: exp(i theta/2 S3) turns amplitudes through theta/2, not theta.
    psi = make_psi1(0.9, -0.4)
    theta = 0.8
    half = type(rotator(theta))(rotator(theta).matrix, (("R", theta / 2),))
    u = fock.fock_from_superposition(apply_device(psi, rotator(theta)), n_max)
    w = fock.oracle_apply_device(fock.fock_from_superposition(psi, n_max), half)
    err = abs(1 - abs(fock.oracle_inner(u, w)) / math.sqrt(u.norm_sq * w.norm_sq))
    ledger.append(_verdict("rotator_half_angle_generator", err, ORACLE_TOL, "printed generator vs printed output amplitudes"))
    return ledger


def _claims(n_max: int) -> list[dict]:
    out = []
    for name, psi in (("psi1", make_psi1(0.8, 1.7)), ("psi2", make_psi2(1.1)), ("psi3", make_psi3(1.3))):
        st = stokes_stats(psi)
        val = max(abs(st.mean[1]), abs(st.mean[3]))
        out.append({"claim": f"vanishing_s1_s3_{name}", "holds": val <= 1e-12, "value": val})

    beta = math.sqrt(2)
    psi = make_psi1(beta - 2, beta)
    for phi1 in (0.0, math.pi / 8, math.pi / 6, math.pi / 4):
        c = concurrence(apply_device(psi, crc(phi1, math.pi / 4, 0.0)))
        out.append({"claim": "crc_quarter_turn_disentangles", "phi1": phi1, "holds": c <= 1e-10, "value": c})

    r = nwf(apply_device(psi, crc(math.pi / 4, math.pi / 4, 0.0)))
    out.append({"claim": "crc_nwf_vanishes_phi1_quarter_pi", "holds": abs(r.delta) <= 1e-6, "value": r.delta})
    r0 = nwf(psi)
    out.append(
        {"claim": "nwf_constant_under_crc", "holds": abs(r.delta - r0.delta) <= 2e-6, "value": abs(r.delta - r0.delta)}
    )

    v = fock.fock_from_superposition(make_psi2(1.0), n_max)
    c1, c3 = fock.oracle_unpolarized_check(v)
    out.append({"claim": "psi2_unpolarized", "holds": max(c1, c3) <= 1e-10, "value": [c1, c3]})
    return out


def run_validation(n_max: int = fock.DEFAULT_N_MAX, seed: int = 0) -> dict:
    """Full report; raises :class:`OracleSelfCheckFailed` if the oracle is inconsistent."""
    if n_max < 32:
        raise ValueError("n_max must be at least 32")
    self_checks = oracle_self_checks(n_max)
    if not all(e["passed"] for e in self_checks):
        bad = [e["name"] for e in self_checks if not e["passed"]]
        raise OracleSelfCheckFailed(f"oracle self-consistency failed: {bad}")
    rng = np.random.default_rng(seed)
    invariants = self_checks + _invariants(n_max, rng)
    report = {
        "n_max": n_max,
        "seed": seed,
        "invariants": invariants,
        "typo_ledger": _typo_ledger(n_max, rng),
        "claims": _claims(n_max),
    }
    report["passed"] = all(e["passed"] for e in invariants)
    return report

import cmath
import math

import numpy as np
import pytest

from cohpol import fock
from cohpol.errors import UnnormalizedState, ZeroNormState
from cohpol.states import (
    CoherentSuperposition,
    branch_gram,
    displace,
    expect_normal_ordered,
    inner_product,
    make_family,
    make_psi1,
    make_psi2,
    make_psi3,
    normalize,
    overlap,
    product_state,
    superposition,
    transform_modes,
)

from conftest import random_state


def test_overlap_examples():
    assert overlap(0, 0) == pytest.approx(1.0)
    assert overlap(1, 1) == pytest.approx(1.0)
    assert abs(overlap(1, -1)) ** 2 == pytest.approx(math.exp(-4), rel=1e-12)


def test_overlap_matches_truncated_vectors():
    a, g = 1.0, -1.0
    va = fock.coherent_amplitudes(a, 40)
    vg = fock.coherent_amplitudes(g, 40)
    assert abs(np.vdot(vg, va) - overlap(a, g)) < 1e-12


def test_overlap_bounded(rng):
    for _ in range(50):
        a, g = complex(*rng.normal(size=2) * 3), complex(*rng.normal(size=2) * 3)
        assert abs(overlap(a, g)) <= 1 + 1e-15


def test_inner_product_examples():
    a = product_state(2, 0)
    b = product_state(0, 2)
    assert inner_product(a, b) == pytest.approx(math.exp(-4), rel=1e-12)
    psi = make_psi1(0.3 + 0.2j, -1.1)
    assert inner_product(psi, psi) == pytest.approx(1.0, abs=1e-12)


def test_zero_vector_inner_product_is_zero():
    zero = CoherentSuperposition(((1, 0.5, 1j), (-1, 0.5, 1j)))
    other = make_psi3(1.2)
    assert abs(inner_product(zero, other)) < 1e-15


def test_inner_product_conjugate_symmetric(rng):
    for _ in range(10):
        a, b = random_state(rng), random_state(rng)
        assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-14)


def test_normalize_zero_norm():
    with pytest.raises(ZeroNormState):
        normalize(CoherentSuperposition(((1, 1, 2), (-1, 1, 2))))


def test_normalize_scales_by_positive_factor():
    raw = CoherentSuperposition(((2j, 1, 0), (2j, 0, 1)))
    psi = normalize(raw)
    ratio = psi.coeffs / raw.coeffs
    assert np.allclose(ratio.imag, 0) and np.all(ratio.real > 0)
    assert psi.norm_sq == pytest.approx(1.0, abs=1e-12)


def test_family_norms():
    psi2 = make_psi2(0.0)
    assert psi2.coeffs[0].real == pytest.approx(0.5)
    n3 = (2 * (1 + math.exp(-4))) ** -0.5
    assert n3 == pytest.approx(0.7007188, abs=1e-6)
    psi3 = make_psi3(2)
    assert np.allclose(psi3.coeffs, n3, atol=1e-12)
    assert psi3.norm_sq == pytest.approx(1.0, abs=1e-12)


def test_psi1_identical_branches_is_product():
    a = 0.7 - 0.4j
    assert abs(inner_product(make_psi1(a, a), product_state(a, a))) == pytest.approx(1.0, abs=1e-12)


def test_psi2_zero_is_vacuum():
    assert abs(inner_product(make_psi2(0), product_state(0, 0))) == pytest.approx(1.0, abs=1e-12)


def test_make_family_dispatch():
    assert make_family("psi3", 1.0).amps.shape == (2, 2)
    with pytest.raises(ValueError):
        make_family("nope", 1.0)


def test_flag_checked_on_construction():
    with pytest.raises(UnnormalizedState):
        CoherentSuperposition(((2.0, 0, 0),), normalized=True)


def test_rejects_nonfinite_and_empty():
    with pytest.raises(ValueError):
        CoherentSuperposition(((float("nan"), 0, 0),))
    with pytest.raises(ValueError):
        CoherentSuperposition(())


def test_branches_not_merged():
    psi = superposition((1, 0.5, 0.5), (1, 0.5, 0.5))
    assert len(psi) == 2


def test_gram_positive_semidefinite(rng):
    for _ in range(20):
        amps = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
        g = branch_gram(amps, amps)
        assert np.allclose(g, g.conj().T)
        assert np.linalg.eigvalsh(g).min() > -1e-12


def test_global_phase_leaves_norm(rng):
    psi = random_state(rng, 3)
    rotated = CoherentSuperposition.from_arrays(psi.coeffs * cmath.exp(0.77j), psi.amps, normalized=True)
    assert rotated.norm_sq == pytest.approx(psi.norm_sq, abs=1e-14)


def test_moment_examples():
    vac = product_state(0, 0)
    for mnpq in [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (0, 0, 2, 1), (2, 2, 0, 0)]:
        assert expect_normal_ordered(vac, *mnpq) == 0
    assert expect_normal_ordered(product_state(2, 0), 1, 1, 0, 0) == pytest.approx(4)
    with pytest.raises(ValueError):
        expect_normal_ordered(vac, -1, 0, 0, 0)
    with pytest.raises(UnnormalizedState):
        expect_normal_ordered(CoherentSuperposition(((1, 0, 0),)), 1, 1, 0, 0)


def _lower(x, ops, powers):
    for op, k in zip(ops, powers):
        for _ in range(k):
            x = op @ x
    return x


def test_moments_match_oracle(rng):
    # <x| aH^dag^m aH^n aV^dag^p aV^q |x> = <aH^m aV^p x | aH^n aV^q x> since the modes commute
    ops = fock._sparse_modes(48)
    for _ in range(6):
        psi = random_state(rng)
        x = fock.fock_from_superposition(psi, 48).flat
        for m, n, p, q in [(1, 1, 0, 0), (0, 1, 0, 0), (1, 0, 0, 1), (2, 1, 0, 1), (0, 0, 2, 2), (1, 1, 1, 1)]:
            ref = np.vdot(_lower(x, ops, (m, p)), _lower(x, ops, (n, q))) / np.vdot(x, x)
            assert abs(expect_normal_ordered(psi, m, n, p, q) - ref) < 1e-8


def test_moment_conjugation_symmetry(rng):
    psi = random_state(rng, 3)
    for m, n, p, q in [(1, 0, 0, 0), (2, 1, 0, 3), (0, 1, 1, 0)]:
        assert expect_normal_ordered(psi, m, n, p, q) == pytest.approx(
            np.conj(expect_normal_ordered(psi, n, m, q, p)), abs=1e-12
        )


def test_displace_matches_oracle():
    psi = make_psi1(0.4, -0.9j)
    out = displace(psi, 0.3 - 0.5j, -0.2)
    # compare via mean field: <a_H> shifts by d_H
    assert expect_normal_ordered(out, 0, 1, 0, 0) == pytest.approx(
        expect_normal_ordered(psi, 0, 1, 0, 0) + (0.3 - 0.5j), abs=1e-12
    )
    assert out.norm_sq == pytest.approx(1.0, abs=1e-12)


def test_transform_modes_rejects_bad_shape():
    with pytest.raises(ValueError):
        transform_modes(make_psi3(1), np.eye(3))

import math

import numpy as np
import pytest
from scipy import integrate

from cohpol import fock
from cohpol.devices import apply_device, crc
from cohpol.errors import GridTooSmall, UnnormalizedState
from cohpol.phasespace import (
    BACKENDS,
    PhaseGrid,
    WignerKernelTable,
    abs_volume,
    abs_volume_naive,
    cross_wigner_kernel,
    kernel_factors,
    nwf,
    nwf_monte_carlo,
    nwf_sweep,
    principal_frame,
    wigner,
    wigner_point,
    wigner_slice,
)
from cohpol.states import (
    CoherentSuperposition,
    displace,
    make_psi1,
    make_psi2,
    normalize,
    product_state,
    superposition,
    transform_modes,
)

from conftest import random_state

SQRT2 = math.sqrt(2)
ODD_CAT_LIMIT = 4 * math.exp(-0.5) - 2
# psi1(-2, 2) by adaptive quadrature split at the zero set of W (independent of the grid path)
TWO_MODE_CAT_NWF = 0.6316000233199517


def odd_cat(a=0.1):
    return normalize(CoherentSuperposition(((1, a, 0), (-1, -a, 0))))


def three_branch():
    return superposition((1, 0.7 + 0.2j, -0.3), (0.5j, -0.4, 0.6j), (-0.3, 0.1, 0.2))


def coherent_wavefunction(a, x):
    a = complex(a)
    return math.pi**-0.25 * np.exp(-((x - SQRT2 * a.real) ** 2) / 2 + 1j * SQRT2 * a.imag * x - 1j * a.real * a.imag)


def direct_weyl(a, g, q, p):
    """(1/pi) int psi_a(q + y) conj(psi_g(q - y)) exp(-2ipy) dy by adaptive quadrature."""

    def f(y):
        return coherent_wavefunction(a, q + y) * np.conj(coherent_wavefunction(g, q - y)) * np.exp(-2j * p * y)

    re = integrate.quad(lambda y: f(y).real, -np.inf, np.inf, epsabs=1e-13)[0]
    im = integrate.quad(lambda y: f(y).imag, -np.inf, np.inf, epsabs=1e-13)[0]
    return complex(re, im) / math.pi


# --- kernels ----------------------------------------------------------------


def test_kernel_examples():
    assert cross_wigner_kernel(0, 0, 0, 0) == pytest.approx(1 / math.pi)
    assert cross_wigner_kernel(1, 1, SQRT2, 0) == pytest.approx(1 / math.pi)
    assert abs(cross_wigner_kernel(1, -1, 0, 0) - direct_weyl(1, -1, 0, 0)) < 1e-8


def test_kernel_matches_direct_integral(rng):
    for _ in range(8):
        a, g = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        q, p = rng.normal(size=2)
        assert abs(cross_wigner_kernel(a, g, q, p) - direct_weyl(a, g, q, p)) < 1e-8


def test_diagonal_kernel_is_gaussian(rng):
    a = 0.8 - 1.3j
    q, p = rng.normal(size=(2, 20))
    ref = np.exp(-((q - SQRT2 * a.real) ** 2) - (p - SQRT2 * a.imag) ** 2) / math.pi
    assert np.allclose(cross_wigner_kernel(a, a, q, p), ref, atol=1e-15)


def test_kernel_factors_reassemble(rng):
    for _ in range(10):
        a, g = complex(*rng.normal(size=2) * 2), complex(*rng.normal(size=2) * 2)
        q, p = rng.normal(size=2) * 3
        lead, f, h = kernel_factors(a, g, q, p)
        assert abs(lead * f * h - cross_wigner_kernel(a, g, q, p)) < 1e-14
        assert abs(abs(lead) - 1 / math.pi) < 1e-15


def test_kernel_table_invariants(rng):
    psi = random_state(rng, 3)
    q = np.linspace(-4, 4, 9)
    table = WignerKernelTable.build(psi, [(q, q), (q, q)])
    for tab in (table.h, table.v):
        for i in range(3):
            assert np.all(np.abs(tab[i, i].imag) < 1e-15) and np.all(tab[i, i].real > 0)
            for j in range(3):
                assert np.allclose(tab[j, i], np.conj(tab[i, j]), atol=1e-15)


# --- Wigner function ----------------------------------------------------------


def test_wigner_examples():
    vac = product_state(0, 0)
    assert wigner_point(vac, (0, 0, 0, 0)) == pytest.approx(1 / math.pi**2)
    with pytest.raises(UnnormalizedState):
        wigner_point(CoherentSuperposition(((1, 0, 0),)), (0, 0, 0, 0))


def test_wigner_cat_at_origin_matches_oracle():
    psi = make_psi2(2)
    v = fock.fock_from_superposition(psi, 60)
    assert abs(wigner_point(psi, (0, 0, 0, 0)) - fock.oracle_wigner_point(v, (0, 0, 0, 0))) < 1e-7


def test_identical_branches_give_product_wigner(rng):
    psi, prod = make_psi1(1, 1), product_state(1, 1)
    for pt in rng.uniform(-3, 3, size=(10, 4)):
        assert wigner_point(psi, pt) == pytest.approx(wigner_point(prod, pt), abs=1e-15)


def test_wigner_matches_oracle_random(rng):
    for _ in range(3):
        psi = random_state(rng, rmax=2.0)
        v = fock.fock_from_superposition(psi, 48)
        for pt in rng.uniform(-3, 3, size=(5, 4)):
            assert abs(wigner_point(psi, pt) - fock.oracle_wigner_point(v, pt)) < 1e-7


def test_wigner_bounded(rng):
    psi = random_state(rng, 3)
    w = wigner(psi, *rng.uniform(-4, 4, size=(4, 500)))
    assert np.all(np.abs(w) <= len(psi) ** 2 / math.pi**2 * np.abs(psi.coeffs).max() ** 2 + 1e-15)


def test_marginal_matches_position_density():
    psi = make_psi1(0.6 + 0.4j, -0.8)
    v = fock.fock_from_superposition(psi, 40)
    grid = PhaseGrid.for_state(psi, 48)
    (p1, w1), (q2, w2), (p2, w3) = grid.axis(0, "p"), grid.axis(1, "q"), grid.axis(1, "p")
    for q1 in (-1.5, -0.3, 0.0, 0.9, 2.1):
        mesh = np.meshgrid(p1, q2, p2, indexing="ij")
        w = wigner(psi, q1, *mesh)
        marg = np.einsum("a,b,c,abc->", w1, w2, w3, w)
        assert abs(marg - fock.oracle_position_density(v, q1)) < 1e-5


def test_wigner_slice():
    x = np.linspace(-2, 2, 21)
    X, Y, W = wigner_slice(product_state(0, 0), x=x, y=x)
    assert W.max() == pytest.approx(1 / math.pi**2)
    r = X**2 + Y**2
    assert np.allclose(W, np.exp(-r) / math.pi**2, atol=1e-15)
    assert wigner_slice(make_psi1(1, 1), x=x, y=x)[2].min() >= 0
    assert wigner_slice(make_psi1(1, -1), fixed={"q2": 0, "p2": 0})[2].min() < -1e-3
    with pytest.raises(ValueError):
        wigner_slice(product_state(0, 0), plane=("q1", "q1"))
    with pytest.raises(ValueError):
        wigner_slice(product_state(0, 0), fixed={"q1": 1.0})


# --- negativity -------------------------------------------------------------


def test_nwf_product_state():
    r = nwf(product_state(1.3 - 0.2j, 0.7j))
    assert abs(r.delta) <= 1e-6
    assert r.integral == pytest.approx(1, abs=1e-6)


def test_nwf_identical_branches():
    assert abs(nwf(make_psi1(1.5, 1.5)).delta) <= 1e-6


def test_nwf_odd_cat_limit():
    r = nwf(odd_cat())
    assert abs(r.delta - ODD_CAT_LIMIT) <= 5e-3
    # the grid value is far tighter than that
    assert r.delta == pytest.approx(0.4261224982, abs=5e-7)


def test_nwf_two_mode_cat():
    r = nwf(make_psi1(-2, 2))
    assert r.dims == 2
    assert abs(r.delta - TWO_MODE_CAT_NWF) < 2e-5
    assert r.error_estimate < 1e-4


@pytest.mark.slow
def test_nwf_two_mode_cat_monte_carlo():
    mean, err = nwf_monte_carlo(make_psi1(-2, 2), 10**7, seed=3)
    assert abs(mean - TWO_MODE_CAT_NWF) < 2 * err + 1e-4


def test_nwf_displacement_invariance():
    psi = make_psi1(-1.1, 1.4)
    base = nwf(psi).delta
    moved = nwf(displace(psi, 0.9 - 0.4j, -0.3 + 1.2j)).delta
    assert abs(base - moved) <= 2e-6


def test_nwf_lab_frame_displacement_invariance():
    # without the frame change the box and rule move with the state
    psi = three_branch()
    opts = dict(frame="lab", nodes_per_axis=48, tol=None)
    a = nwf(psi, **opts).delta
    b = nwf(displace(psi, 0.5, -0.5j), **opts).delta
    assert abs(a - b) <= 2e-6


def test_nwf_fast_path_matches_naive():
    psi = three_branch()
    grid = PhaseGrid.for_state(psi, 16)
    fast = abs_volume(psi, grid)
    slow = abs_volume_naive(psi, grid)
    assert fast == pytest.approx(slow, abs=1e-12)


def test_backends_bit_identical():
    psi = three_branch()
    results = {name: nwf(psi, nodes_per_axis=32, tol=None, backend=name).delta for name in BACKENDS}
    assert len(set(results.values())) == 1


def test_worker_count_bit_identical():
    psi = make_psi1(-2, 2)
    assert nwf(psi, workers=1).delta == nwf(psi, workers=4).delta
    k3 = three_branch()
    assert nwf(k3, nodes_per_axis=40, tol=None, workers=1).delta == nwf(k3, nodes_per_axis=40, tol=None, workers=3).delta


def test_grid_too_small_when_not_converged():
    with pytest.raises(GridTooSmall):
        nwf(three_branch())
    r = nwf(three_branch(), tol=None)
    assert r.dims == 4 and r.error_estimate > 1e-4


def test_grid_too_small_for_narrow_box():
    psi = make_psi1(-2, 2)
    with pytest.raises(GridTooSmall):
        nwf(psi, PhaseGrid((2.0, 2.0), 48), frame="lab")


def test_grid_too_small_for_bad_normalization():
    psi = make_psi1(-2, 2)
    grid = PhaseGrid.for_state(psi, 6, margin=6.0)
    with pytest.raises(GridTooSmall):
        nwf(psi, grid, frame="lab")


def test_principal_frame_reduces_two_branch_states(rng):
    for _ in range(5):
        psi = random_state(rng, 2)
        fc = principal_frame(psi)
        assert fc.v_mode_trivial
        assert fc.state.norm_sq == pytest.approx(1, abs=1e-12)


def test_nwf_passive_unitary_invariance():
    psi = make_psi1(0.3 - 1.0j, 1.2)
    u = np.array([[0.6, 0.8j], [0.8j, 0.6]])
    assert nwf(transform_modes(psi, u)).delta == pytest.approx(nwf(psi).delta, abs=2e-6)


def test_crc_output_nwf_constant():
    b = math.sqrt(2)
    psi = make_psi1(b - 2, b)
    base = nwf(psi).delta
    for phi1 in (0.0, math.pi / 8, math.pi / 4):
        for theta in (0.2, math.pi / 4, 1.3):
            assert nwf(apply_device(psi, crc(phi1, theta, 0.0))).delta == pytest.approx(base, abs=2e-6)


def test_nwf_sweep():
    rows = nwf_sweep(lambda a: make_psi1(a, 2.0), [2.0, 0.0])
    assert rows[0][0] == 2.0 and abs(rows[0][1].delta) < 1e-6
    assert rows[1][1].delta > 0.1


def test_unknown_frame():
    with pytest.raises(ValueError):
        nwf(product_state(0, 0), frame="other")

"""Polarization and phase-space descriptors of two-mode coherent superpositions."""

from .devices import DeviceSpec, apply_device, compensator, concurrence, crc, crc_sweep, rotator
from .errors import (
    CohpolError,
    DimensionMismatch,
    GridTooSmall,
    OracleSelfCheckFailed,
    QuadratureTooCoarse,
    StateFormatError,
    TruncationTooSevere,
    UnnormalizedState,
    UnsupportedBranchCount,
    ZeroNormState,
)
from .phasespace import PhaseGrid, nwf, wigner, wigner_point, wigner_slice
from .states import (
    CoherentSuperposition,
    CoherentTerm,
    displace,
    expect_normal_ordered,
    inner_product,
    make_psi1,
    make_psi2,
    make_psi3,
    make_psi_pm,
    normalize,
    overlap,
    product_state,
    superposition,
)
from .stokes import SphereQuadrature, StokesStats, polarization_degree, q_function, stokes_stats

__version__ = "0.1.0"

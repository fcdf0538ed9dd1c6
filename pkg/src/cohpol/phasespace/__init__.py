"""Two-mode Wigner function and its negativity volume."""

from ._backend import BACKENDS, DEFAULT_BACKEND, get_backend
from .frames import FrameChange, principal_frame
from .grid import PhaseGrid
from .kernels import (
    WignerKernelTable,
    cross_wigner_kernel,
    kernel_factors,
    wigner,
    wigner_point,
    wigner_slice,
)
from .negativity import NWFResult, abs_volume, abs_volume_naive, nwf, nwf_monte_carlo, nwf_sweep

__all__ = [
    "BACKENDS",
    "DEFAULT_BACKEND",
    "FrameChange",
    "NWFResult",
    "PhaseGrid",
    "WignerKernelTable",
    "abs_volume",
    "abs_volume_naive",
    "cross_wigner_kernel",
    "get_backend",
    "kernel_factors",
    "nwf",
    "nwf_monte_carlo",
    "nwf_sweep",
    "principal_frame",
    "wigner",
    "wigner_point",
    "wigner_slice",
]

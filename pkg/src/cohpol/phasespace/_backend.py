"""Pick the compiled NWF kernel when it is importable, else the numpy one.

Set ``COHPOL_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _nwfcore_py

try:
    if os.environ.get("COHPOL_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from . import _nwfcore
except ImportError:
    _nwfcore = None

BACKENDS = {"python": _nwfcore_py}
if _nwfcore is not None:
    BACKENDS["cython"] = _nwfcore

DEFAULT_BACKEND = "cython" if _nwfcore is not None else "python"


def get_backend(name: str | None = None):
    name = DEFAULT_BACKEND if name is None else name
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None

"""Plain-text interchange format for coherent superpositions.

Layout (``#`` lines are comments and may appear anywhere)::

    # cohpol state v1
    normalized,true
    # coeff_re,coeff_im,ah_re,ah_im,av_re,av_im
    0.7006...,0,2,0,0,0
    0.7006...,0,0,0,2,0

The first non-comment record is the header ``normalized,<true|false>``.
Every following record is one branch with exactly six decimal fields in the
fixed order of :data:`FIELDS`.  Floats are written with ``repr`` so a
load/dump round trip reproduces the file byte for byte.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

from .errors import StateFormatError
from .states import CoherentSuperposition, CoherentTerm

FIELDS = ("coeff_re", "coeff_im", "ah_re", "ah_im", "av_re", "av_im")
MAGIC = "# cohpol state v1"


def _fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop negative zero
    return repr(x)


def dumps(psi: CoherentSuperposition) -> str:
    lines = [MAGIC, f"normalized,{'true' if psi.normalized else 'false'}", "# " + ",".join(FIELDS)]
    for t in psi.terms:
        vals = (t.coeff.real, t.coeff.imag, t.amp_h.real, t.amp_h.imag, t.amp_v.real, t.amp_v.imag)
        lines.append(",".join(_fmt(v) for v in vals))
    return "\n".join(lines) + "\n"


def loads(text: str) -> CoherentSuperposition:
    normalized = None
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if normalized is None:
            if len(parts) != 2 or parts[0] != "normalized":
                raise StateFormatError("expected header 'normalized,<true|false>'", line=lineno, field="normalized")
            if parts[1] not in ("true", "false"):
                raise StateFormatError(f"bad flag {parts[1]!r}", line=lineno, field="normalized")
            normalized = parts[1] == "true"
            continue
        if len(parts) < len(FIELDS):
            missing = FIELDS[len(parts)]
            raise StateFormatError(f"record has {len(parts)} of {len(FIELDS)} fields", line=lineno, field=missing)
        if len(parts) > len(FIELDS):
            raise StateFormatError(f"record has {len(parts)} fields, expected {len(FIELDS)}", line=lineno)
        vals = []
        for name, tok in zip(FIELDS, parts):
            if tok == "":
                raise StateFormatError("empty value", line=lineno, field=name)
            try:
                v = float(tok)
            except ValueError:
                raise StateFormatError(f"not a decimal number: {tok!r}", line=lineno, field=name) from None
            if not math.isfinite(v):
                raise StateFormatError(f"non-finite value {tok!r}", line=lineno, field=name)
            vals.append(v)
        terms.append(CoherentTerm(complex(vals[0], vals[1]), complex(vals[2], vals[3]), complex(vals[4], vals[5])))
    if normalized is None:
        raise StateFormatError("missing header record", field="normalized")
    if not terms:
        raise StateFormatError("no branch records", field=FIELDS[0])
    return CoherentSuperposition(tuple(terms), normalized=normalized)


def read_state(path) -> CoherentSuperposition:
    return loads(Path(path).read_text())


def write_state(psi: CoherentSuperposition, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(dumps(psi))
    os.replace(tmp, path)

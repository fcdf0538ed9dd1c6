"""Published closed forms, transcribed literally, plus corrected counterparts.

The ``printed_*`` functions reproduce formulas exactly as they appear in the
source literature, typos included, so the validation report can say which
ones agree with the moment engine and which do not.  The ``corrected_*``
functions are what the operator algebra actually gives; tests require them to
agree with :mod:`cohpol.stokes` to rounding.

Notation: product state ``|alpha, beta>``; two-branch state
``N (|alpha, beta> +/- |gamma, lam>)``.
"""

from __future__ import annotations

import cmath
import math

from .states import overlap


def _abs2(x: complex) -> float:
    return abs(x) ** 2


# --- product states -------------------------------------------------------


def printed_product_moments(alpha: complex, beta: complex) -> dict[str, complex]:
    a, b = complex(alpha), complex(beta)
    ac, bc = a.conjugate(), b.conjugate()
    na, nb = _abs2(a), _abs2(b)
    return {
        "S1": na - nb,
        "S2": ac * b - a * bc,
        "S3": 1j * (a * bc - ac * b),
        "S1^2": (na - nb) ** 2 + na + nb,
        "S2^2": (ac * b) ** 2 + (a * bc) ** 2 + na + nb + 2 * na * nb,
        "S3^2": -((ac * b) ** 2) - (a * bc) ** 2 + na + nb + 2 * na * nb,
    }


def printed_stokes_s3_matrix_sign() -> int:
    """Sign ``s`` in the printed ``S3 = s * i (a'b - b'a)``; the algebra needs ``-1``."""
    return +1


# --- Q-function and polarization degree -----------------------------------


def printed_q_product(alpha: complex, beta: complex, theta: float, phi: float, literal_e2: bool = False) -> float:
    """Q of ``|alpha, beta>``; the trailing factor is ``e^z``, or ``e**2`` if ``literal_e2``.

    The printed ``z`` uses ``beta`` (not ``|beta|``) in front of ``sin``; that
    is reproduced here, so it only matches for ``beta >= 0`` real.
    """
    a, b = complex(alpha), complex(beta)
    ra, pa = abs(a), cmath.phase(a)
    pb = cmath.phase(b) if b != 0 else 0.0
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    x = ra * c * math.cos(pa + phi) + b * s * math.cos(pb)
    y = ra * c * math.sin(pa + phi) + b * s * math.sin(pb)
    z = complex(x * x + y * y).real
    tail = math.e**2 if literal_e2 else math.exp(z)
    return math.exp(-(_abs2(a) + _abs2(b))) / (4 * math.pi) * (1 + z) * tail


def printed_polarization_closed_form(alpha: complex) -> float:
    r = abs(alpha)
    return 1 - 4 * r * r / (1 + 2 * r)


def printed_polarization_asymptote(alpha: complex) -> float:
    return 1 - 2 / _abs2(alpha)


# --- normalization constants -----------------------------------------------


def printed_norm_psi1(alpha: complex, beta: complex) -> complex:
    a, b = complex(alpha), complex(beta)
    return (2 * (1 + cmath.exp(2 * a * b - _abs2(a) - _abs2(b)))) ** -0.5


def printed_norm_psi2(alpha: complex) -> float:
    return (2 * (1 + math.exp(-4 * _abs2(alpha)))) ** -0.5


def printed_norm_psi3(alpha: complex) -> float:
    return (2 * (1 + math.exp(-_abs2(alpha)))) ** -0.5


def printed_norm_sq_pm(alpha, beta, gamma, lam) -> float:
    """Printed ``|N|^2``; carries a ``+`` for both signs of the superposition."""
    a, b, g, l = map(complex, (alpha, beta, gamma, lam))
    zeta = cmath.exp(a.conjugate() * g + b.conjugate() * l)
    s = _abs2(a) + _abs2(b) + _abs2(g) + _abs2(l)
    return 1 / (2 + ((zeta + zeta.conjugate()) * math.exp(-s / 2)).real)


def exact_norm_sq_pm(alpha, beta, gamma, lam, sign: int = +1) -> float:
    ov = overlap(gamma, alpha) * overlap(lam, beta)  # <gamma, lam | alpha, beta>
    return 1 / (2 + 2 * sign * ov.real)


# --- two-branch Stokes moments ---------------------------------------------


def _branch_overlap(a, b, g, l) -> complex:
    """``<alpha, beta | gamma, lam>``, written ``delta`` in the printed moments."""
    s = _abs2(a) + _abs2(b) + _abs2(g) + _abs2(l)
    return cmath.exp(a.conjugate() * g + b.conjugate() * l - s / 2)


def printed_superposition_moments(alpha, beta, gamma, lam) -> dict[str, complex]:
    """Two-branch moments as printed (``+`` superposition, literal transcription)."""
    a, b, g, l = map(complex, (alpha, beta, gamma, lam))
    ac, bc, gc, lc = a.conjugate(), b.conjugate(), g.conjugate(), l.conjugate()
    na, nb, ng, nl = map(_abs2, (a, b, g, l))
    n2 = printed_norm_sq_pm(a, b, g, l)
    d = _branch_overlap(a, b, g, l)
    lin = ac * g + bc * l + a * gc + b * lc
    return {
        "S1": n2 * ((na - nb) + (ng - nl) + ((ac * g - bc * l) + (a * gc - b * lc)) * d),
        "S2": n2 * ((ac * b + a * bc) + (gc * l + g * lc) + ((ac * l + g * bc) + (gc * b + a * gc)) * d),
        "S3": n2 * ((a * bc - ac * b) + (g * lc - gc * l) + ((g * bc - ac * l) + (a * lc - b * gc)) * d),
        "S1^2": n2
        * (na + nb + ng + nl + (na - nb) ** 2 + (ng - nl) ** 2 + (lin + (ac * g - bc * l) ** 2 + (a * gc - b * lc) ** 2) * d),
        "S2^2": n2
        * (
            na + nb + ng + nl + 2 * (na * nb + ng * nl)
            + (ac * b) ** 2 + (a * bc) ** 2 * (gc * l) ** 2 + (g * lc) ** 2
            + (lin + (ac * l + bc * g) ** 2 + (gc * b + a * lc) ** 2) * d
        ),
        "S3^2": n2
        * (
            na + nb + ng + nl + 2 * (na * nb - ng * nl)
            - (ac * b) ** 2 - (a * bc) ** 2 * (gc * l) ** 2 - (g * lc) ** 2
            + (lin - (ac * l - bc * g) ** 2 - (gc * b - a * lc) ** 2) * d
        ),
    }


def corrected_superposition_moments(alpha, beta, gamma, lam, sign: int = +1) -> dict[str, complex]:
    """Same quantities from the operator algebra.

    Each moment is ``|N|^2 (D1 + D2 + sign (X d + X' conj(d)))`` with ``D`` the
    product-state values, ``d = <alpha, beta|gamma, lam>``, ``X`` the bra-1/ket-2
    matrix element of the normal-ordered polynomial over ``d`` and ``X'`` the
    one with the branches exchanged.
    """
    a, b, g, l = map(complex, (alpha, beta, gamma, lam))
    ac, bc, gc, lc = a.conjugate(), b.conjugate(), g.conjugate(), l.conjugate()
    n2 = exact_norm_sq_pm(a, b, g, l, sign)
    d = _branch_overlap(a, b, g, l)
    p1, p2 = _corrected_product(a, b), _corrected_product(g, l)
    x12 = {
        "S1": ac * g - bc * l,
        "S2": ac * l + g * bc,
        "S3": 1j * (g * bc - ac * l),
        "S1^2": (ac * g - bc * l) ** 2 + ac * g + bc * l,
        "S2^2": (ac * l + bc * g) ** 2 + ac * g + bc * l,
        "S3^2": -((ac * l - bc * g) ** 2) + ac * g + bc * l,
    }
    x21 = {
        "S1": gc * a - lc * b,
        "S2": gc * b + a * lc,
        "S3": 1j * (a * lc - gc * b),
        "S1^2": (gc * a - lc * b) ** 2 + gc * a + lc * b,
        "S2^2": (gc * b + lc * a) ** 2 + gc * a + lc * b,
        "S3^2": -((gc * b - lc * a) ** 2) + gc * a + lc * b,
    }
    dc = d.conjugate()
    return {k: n2 * (p1[k] + p2[k] + sign * (x12[k] * d + x21[k] * dc)) for k in x12}


def _corrected_product(a: complex, b: complex) -> dict[str, complex]:
    out = printed_product_moments(a, b)
    out["S2"] = a.conjugate() * b + a * b.conjugate()
    return out


def printed_q_superposition(alpha, beta, gamma, lam, theta: float, phi: float) -> float:
    """Printed two-branch Q with the cross kernel ``z12 = conj(w1) w2``.

    ``w = cos(theta/2) e^{i phi} h + sin(theta/2) v`` per branch; the printed
    text leaves ``z12`` undefined and this is the reading used throughout.
    """
    a, b, g, l = map(complex, (alpha, beta, gamma, lam))
    c, s, e = math.cos(theta / 2), math.sin(theta / 2), cmath.exp(1j * phi)
    w1, w2 = c * e * a + s * b, c * e * g + s * l
    z1, z2, z12 = _abs2(w1), _abs2(w2), w1.conjugate() * w2
    n2 = printed_norm_sq_pm(a, b, g, l)
    tot = (
        math.exp(-(_abs2(a) + _abs2(b))) * (1 + z1) * math.exp(z1)
        + math.exp(-(_abs2(g) + _abs2(l))) * (1 + z2) * math.exp(z2)
        + math.exp(-(_abs2(a) + _abs2(b) + _abs2(g) + _abs2(l)) / 2)
        * ((1 + z12) * cmath.exp(z12) + (1 + z12.conjugate()) * cmath.exp(z12.conjugate())).real
    )
    return n2 / (4 * math.pi) * tot


# --- entanglement and devices ----------------------------------------------


def printed_concurrence(alpha, beta, gamma, lam) -> float:
    a, b, g, l = map(complex, (alpha, beta, gamma, lam))
    ag = overlap(g, a)  # <alpha|gamma>
    lb = overlap(b, l)  # <lam|beta>
    bl = overlap(l, b)  # <beta|lam>
    num = math.sqrt((1 - _abs2(ag)) * (1 - _abs2(lb)))
    return num / (1 + (ag * bl).real)


def printed_crc_output(alpha, beta, theta: float, phi1: float, phi2: float):
    """Branch amplitude pairs of the CRC output for the symmetric input."""
    a, b = complex(alpha), complex(beta)
    c, s = math.cos(theta), math.sin(theta)
    ep = cmath.exp(0.5j * (phi2 + phi1))
    em = cmath.exp(0.5j * (phi2 - phi1))
    first = (b * s * em + a * c * ep, b * c / ep - a * s / em)
    second = (a * s * em + b * c * ep, a * c / ep - b * s / em)
    return first, second

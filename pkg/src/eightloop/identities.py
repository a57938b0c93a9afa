"""The fifteen on-cycle integral identities behind the envelope reductions.

Each identity reduces a cycle integral of a monomial one-form to a
combination of the basic integrals I0, I1, I2 (exact differentials and
dH-multiples integrate to zero around an oval, and H equals the constant h
on the oval).  The identities are verified numerically: left sides by
direct quadrature of the monomial form, right sides through the basic
integrals, residual returned in absolute terms.

Identity families:
  I-1            cubic-in-y reduction feeding the order-1 envelope
  II-1 .. II-6   moment reductions (x^k y^l, l <= 3) for the order-2 step
  III-1 .. III-5 quartic-in-y and x^5 reductions for the order-3 step
  IV-1 .. IV-3   q1-weighted forms (q1 = -(2*lam*x + mu*x^2)) for order 4
"""

from __future__ import annotations

import numpy as np

from .hamiltonian import OvalSpec
from .quadrature import basic_integral, general_integral

IDENTITY_IDS = (
    "I-1",
    "II-1", "II-2", "II-3", "II-4", "II-5", "II-6",
    "III-1", "III-2", "III-3", "III-4", "III-5",
    "IV-1", "IV-2", "IV-3",
)


def _basics(spec: OvalSpec):
    i0 = basic_integral(0, spec).value
    i1 = basic_integral(1, spec).value
    i2 = basic_integral(2, spec).value
    return i0, i1, i2


def _moment(k: int, l: int, spec: OvalSpec) -> float:
    return general_integral(k, l, spec).value


def _q1_weighted(powers, spec: OvalSpec, lam: float, mu: float) -> float:
    """Cycle integral of y^l * q1^m * dq1 expressed through moments.

    q1 = -(2*lam*x + mu*x^2), dq1 = -(2*lam + 2*mu*x) dx; expanding the
    x-polynomial leaves plain x^k y^l dx moments (all with even l here).
    """
    l, m = powers
    # x-polynomial: q1^m * q1'(x)
    q1 = np.array([0.0, -2.0 * lam, -mu])
    dq1 = np.array([-2.0 * lam, -2.0 * mu])
    poly = dq1.copy()
    for _ in range(m):
        poly = np.convolve(poly, q1)
    return sum(c * _moment(k, l, spec)
               for k, c in enumerate(poly) if c != 0.0)


def verify_identity(identity: str, spec: OvalSpec, lam: float = 1.0,
                    mu: float = 0.0) -> float:
    """Absolute residual |LHS - RHS| of the identity on the given oval.

    lam, mu only matter for the IV-family, which involves
    q1 = -(2*lam*x + mu*x^2).
    """
    h = spec.h
    i0, i1, i2 = _basics(spec)
    if identity == "I-1":
        # y^3 dx reduces to (3/7) x^2 y dx + (12/7) h y dx on the cycle
        return abs(_moment(0, 3, spec) - (3.0 / 7.0 * i2 + 12.0 / 7.0 * h * i0))
    if identity == "II-1":
        return abs(_moment(0, 2, spec))
    if identity == "II-2":
        return abs(_moment(1, 2, spec))
    if identity == "II-3":
        return abs(basic_integral(3, spec).value - i1)
    if identity == "II-4":
        return abs(basic_integral(4, spec).value
                   - (8.0 / 7.0 * i2 + 4.0 / 7.0 * h * i0))
    if identity == "II-5":
        return abs(_moment(1, 3, spec) - 3.0 / 8.0 * (1.0 + 4.0 * h) * i1)
    if identity == "II-6":
        return abs(_moment(2, 3, spec)
                   - (4.0 / 21.0 * h * i0 + (8.0 / 21.0 + 4.0 / 3.0 * h) * i2))
    if identity == "III-1":
        return abs(_moment(2, 2, spec))
    if identity == "III-2":
        return abs(_moment(3, 2, spec))
    if identity == "III-3":
        return abs(_moment(0, 4, spec))
    if identity == "III-4":
        return abs(_moment(1, 4, spec))
    if identity == "III-5":
        return abs(basic_integral(5, spec).value - (1.25 + h) * i1)
    if identity == "IV-1":
        return abs(_q1_weighted((4, 0), spec, lam, mu))
    if identity == "IV-2":
        return abs(_q1_weighted((4, 1), spec, lam, mu))
    if identity == "IV-3":
        return abs(_q1_weighted((6, 0), spec, lam, mu))
    raise ValueError(f"unknown identity {identity!r}")


def verify_all(h_values=None, lam_mu_pairs=None):
    """Residual table over a grid: {identity: max residual}.

    IV-family identities are additionally swept over the (lam, mu) pairs.
    """
    if h_values is None:
        h_values = np.linspace(-0.24, -0.01, 10)
    if lam_mu_pairs is None:
        rng = np.random.default_rng(20240824)
        lam_mu_pairs = [tuple(v) for v in rng.uniform(-2, 2, size=(5, 2))]
    out = {}
    for ident in IDENTITY_IDS:
        worst = 0.0
        for h in h_values:
            spec = OvalSpec(h)
            if ident.startswith("IV"):
                for lam, mu in lam_mu_pairs:
                    worst = max(worst, verify_identity(ident, spec, lam, mu))
            else:
                worst = max(worst, verify_identity(ident, spec))
        out[ident] = worst
    return out

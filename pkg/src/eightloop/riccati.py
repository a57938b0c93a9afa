"""Ratio dynamics of the basic integrals.

Each ratio of (derivatives of) the integral pair satisfies a Riccati
equation which, together with dh/dt = -h(4h+1), forms a planar polynomial
system.  The graph of the ratio over the energy interval is the separatrix
leaving the saddle at h = -1/4, and its monotonicity/convexity is what
bounds the zero counts of the second-order envelope.  This module tracks
those separatrices, compares them with direct integral ratios, and
evaluates the normalized envelope ratio R0 with its first two derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import picard_fuchs as pf
from .hamiltonian import DomainError, OvalSpec


@dataclass(frozen=True)
class RiccatiSystem:
    """dr/dt = A r^2 + (B1 h + B0) r + C1 h + C0, dh/dt = -h(4h+1).

    `ratio` names which integral ratio the separatrix graph equals:
    'I2/I0', 'I2'''/I0'''', or the normalized 'J2^(k)/J0^(k)'.
    """

    name: str
    A: float
    B1: float
    B0: float
    C1: float
    C0: float
    saddle_r: float
    saddle_slope: float
    end_r: float            # limit of the ratio as h -> 0-
    ratio: str

    def f(self, h, r):
        """dr/dt."""
        return (self.A * r * r + (self.B1 * h + self.B0) * r
                + self.C1 * h + self.C0)

    def isocline_branches(self, h):
        """The two roots of f(h, r) = 0 in r (nan where complex)."""
        b = self.B1 * h + self.B0
        c = self.C1 * h + self.C0
        disc = b * b - 4.0 * self.A * c
        disc = np.where(disc >= 0, disc, np.nan)
        sq = np.sqrt(disc)
        return ((-b - sq) / (2 * self.A), (-b + sq) / (2 * self.A))


NU = RiccatiSystem("Nu", 1.75, -2.0, -2.0, 1.0, 0.0,
                   saddle_r=-1.0 / 7.0, saddle_slope=3.0 / 7.0,
                   end_r=0.0, ratio="I2'''/I0'''")
OMEGA = RiccatiSystem("Omega", -1.25, -2.0, 1.0, 1.0, 0.0,
                      saddle_r=1.0, saddle_slope=-0.5,
                      end_r=0.8, ratio="I2/I0")
# u = J2/J0 equals I2/I0, so U shares Omega's equation and data
U = RiccatiSystem("U", -1.25, -2.0, 1.0, 1.0, 0.0,
                  saddle_r=1.0, saddle_slope=-0.5,
                  end_r=0.8, ratio="J2/J0")
V = RiccatiSystem("V", 3.75, -2.0, 0.0, 1.0, 0.0,
                  saddle_r=-1.0 / 3.0, saddle_slope=5.0 / 9.0,
                  end_r=0.0, ratio="J2'/J0'")
W = RiccatiSystem("W", 8.75, -2.0, -1.0, 1.0, 0.0,
                  saddle_r=-1.0 / 7.0, saddle_slope=9.0 / 28.0,
                  end_r=0.0, ratio="J2''/J0''")

SYSTEMS = {s.name: s for s in (NU, OMEGA, U, V, W)}


def riccati_rhs(sys: RiccatiSystem, h: float, r: float):
    """(dr/dt, dh/dt) of the planar system."""
    return sys.f(h, r), -h * (4.0 * h + 1.0)


def saddle_slope_from_jacobian(sys: RiccatiSystem) -> float:
    """Unstable-direction slope dr/dh at the saddle (-1/4, saddle_r).

    The h-equation decouples with eigenvalue 1 at h = -1/4, so the
    eigenvector gives slope f_h / (1 - f_r).
    """
    h0, r0 = -0.25, sys.saddle_r
    f_h = sys.B1 * r0 + sys.C1
    f_r = 2.0 * sys.A * r0 + sys.B1 * h0 + sys.B0
    return f_h / (1.0 - f_r)


@dataclass(frozen=True)
class RatioCurve:
    h: np.ndarray
    value: np.ndarray
    provenance: str

    def __post_init__(self):
        if not np.all(np.isfinite(self.value)):
            raise ValueError("non-finite ratio values")


_LAUNCH = 1e-8


def separatrix(sys: RiccatiSystem, grid) -> RatioCurve:
    """Track the saddle separatrix r(h), reparametrized by h, on grid.

    Launches from the saddle along the unstable eigendirection; the
    transverse direction is attracting throughout, so forward integration
    of dr/dh = f / (-h(4h+1)) is self-correcting.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(grid <= -0.25) or np.any(grid >= 0.0):
        raise DomainError("grid must lie strictly inside (-1/4, 0)")
    order = np.argsort(grid)
    gs = grid[order]
    h0 = -0.25 + _LAUNCH
    r0 = sys.saddle_r + sys.saddle_slope * _LAUNCH
    h_end = min(-1e-9, gs[-1])

    def rhs(h, r):
        return [sys.f(h, r[0]) / (-h * (4.0 * h + 1.0))]

    sol = solve_ivp(rhs, (h0, h_end), [r0], method="DOP853",
                    rtol=1e-11, atol=1e-13, dense_output=True)
    if not sol.success:
        raise RuntimeError(f"separatrix integration failed: {sol.message}")
    vals = np.empty_like(gs)
    for i, h in enumerate(gs):
        vals[i] = sol.sol(h)[0] if h > h0 else r0
    out = np.empty_like(vals)
    out[order] = vals
    return RatioCurve(grid, out, "SeparatrixODE")


def ratio_from_integrals(sys: RiccatiSystem, h: float) -> float:
    """The ratio at h computed from quadrature plus the derivative chains."""
    if not (-0.25 < h < 0.0):
        raise DomainError(f"h={h} not inside (-1/4, 0)")
    if sys.ratio in ("I2/I0", "J2/J0"):
        spec = OvalSpec(h)
        from . import quadrature

        i0 = quadrature.basic_integral(0, spec).value
        i2 = quadrature.basic_integral(2, spec).value
        return i2 / i0
    if sys.ratio == "I2'''/I0'''":
        d = pf.derivatives_via_pf(h, 3)
        return d[3][1] / d[3][0]
    k = {"J2'/J0'": 1, "J2''/J0''": 2}[sys.ratio]
    jd = pf.j_derivatives(h, k)
    return jd[k][1] / jd[k][0]


def eq20_residual(h: float) -> float:
    """Residual of nu = 4h(1-omega)/(4h+omega) between the two ratios."""
    om = ratio_from_integrals(OMEGA, h)
    nu = ratio_from_integrals(NU, h)
    return nu - 4.0 * h * (1.0 - om) / (4.0 * h + om)


# geometry claims: (monotone sign, convexity sign, compare against isocline)
_CLAIMS = {
    "Nu": (+1, +1, "below"),
    "Omega": (-1, -1, None),
    "U": (-1, -1, None),
    "V": (+1, +1, "below"),
    "W": (+1, +1, "below"),
}


@dataclass(frozen=True)
class GeometryReport:
    name: str
    monotone_ok: bool
    convex_ok: bool
    isocline_ok: bool
    endpoint_start: float
    endpoint_end: float
    violations: tuple

    @property
    def ok(self):
        return self.monotone_ok and self.convex_ok and self.isocline_ok


def check_geometry(sys: RiccatiSystem, n: int = 400) -> GeometryReport:
    """Verify the monotonicity/convexity/isocline claims on a fine grid."""
    grid = np.linspace(-0.25 + 1e-5, -1e-5, n)
    curve = separatrix(sys, grid).value
    mono_sign, conv_sign, iso = _CLAIMS[sys.name]
    d1 = np.diff(curve)
    d2 = np.diff(curve, 2)
    violations = []
    mono_ok = bool(np.all(mono_sign * d1 > 0))
    if not mono_ok:
        violations.append("monotonicity")
    conv_ok = bool(np.all(conv_sign * d2 > -1e-12))
    if not conv_ok:
        violations.append("convexity")
    iso_ok = True
    if iso is not None:
        lo, hi = sys.isocline_branches(grid)
        # the comparison branch is the one through the saddle
        b_lo = lo if abs(lo[0] - sys.saddle_r) < abs(hi[0] - sys.saddle_r) \
            else hi
        good = np.isfinite(b_lo)
        iso_ok = bool(np.all(curve[good] < b_lo[good] + 1e-10))
        if not iso_ok:
            violations.append("isocline")
    return GeometryReport(sys.name, mono_ok, conv_ok, iso_ok,
                          curve[0], curve[-1], tuple(violations))


# ---------------------------------------------------------------------------
# the normalized envelope ratio R0 and its derivatives
# ---------------------------------------------------------------------------

def _r0_coefficient_chain(alpha0, alpha1, gamma0, gamma1):
    """(a_k, b_k, c_k, d_k) for k = 1, 2 in
    R0^(k) = (a_k h + b_k) J0^(k) + (c_k h + d_k) J2^(k).

    Derived by substituting the normalized-pair systems into the
    differentiated R0; validated against finite differences in the tests.
    """
    a1 = -3.0 * alpha1 - 4.0 * gamma1
    b1 = alpha0
    c1 = 5.0 * gamma1
    d1 = gamma0 - 5.0 * alpha1 - 4.0 * gamma1
    a2 = a1 / 5.0 + 4.0 * c1 / 15.0
    b2 = b1
    c2 = -c1 / 3.0
    d2 = d1 - a1
    return (a1, b1, c1, d1), (a2, b2, c2, d2)


def r0_and_derivatives(e, h: float):
    """(R0, R0', R0'') at h for the envelope's alpha/gamma slots.

    R0 = (alpha0 + alpha1 h) J0 + (gamma0 + gamma1 h) J2 where
    J = (I0/I1, I2/I1); beta slots of the envelope are ignored.
    R0' diverges like -sigma*alpha0*log(-h) as h -> 0-.
    """
    if not (-0.25 < h < 0.0):
        raise DomainError(f"h={h} not inside (-1/4, 0)")
    al0, al1 = float(e.alpha0), float(e.alpha1)
    g0, g1 = float(e.gamma0), float(e.gamma1)
    jd = pf.j_derivatives(h, 2)
    k1, k2 = _r0_coefficient_chain(al0, al1, g0, g1)
    r0 = (al0 + al1 * h) * jd[0][0] + (g0 + g1 * h) * jd[0][1]
    r1 = (k1[0] * h + k1[1]) * jd[1][0] + (k1[2] * h + k1[3]) * jd[1][1]
    r2 = (k2[0] * h + k2[1]) * jd[2][0] + (k2[2] * h + k2[3]) * jd[2][1]
    return r0, r1, r2


def r0_center_anchors(e):
    """Exact limits of (R0, R0', R0'') as h -> -1/4+.

    The first-derivative anchor carries +33/32 gamma1; this is the value
    the quadrature chain actually attains (it equals the second
    small-amplitude coefficient with beta slots removed).
    """
    al0, al1 = float(e.alpha0), float(e.alpha1)
    g0, g1 = float(e.gamma0), float(e.gamma1)
    r0 = al0 + g0 - 0.25 * al1 - 0.25 * g1
    r1 = (3.0 / 8.0 * al0 - g0 / 8.0 + 29.0 / 32.0 * al1
          + 33.0 / 32.0 * g1)
    r2 = (35.0 / 32.0 * al0 - 5.0 / 32.0 * g0 + 61.0 / 128.0 * al1
          - 27.0 / 128.0 * g1)
    return r0, r1, r2


def r0_zero_anchor(e) -> float:
    """Limit of R0 as h -> 0-: sigma*(4/3 alpha0 + 16/15 gamma0)."""
    return pf.SIGMA_CONST * (4.0 / 3.0 * float(e.alpha0)
                             + 16.0 / 15.0 * float(e.gamma0))

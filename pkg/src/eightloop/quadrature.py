"""Cycle integrals over the ovals: I_k(h), I_kl(h) and general one-forms.

All integrals use the orientation in which I_k(h) = 2 * int x^k y+(x) dx > 0
over the oval's x-extent (the orientation of the unperturbed flow around the
right center).  The endpoint square-root vanishing of y+ is removed by the
substitution x = x_lo + (x_hi - x_lo) sin^2(theta), after which every
integrand handled here is analytic in theta and Gauss-Legendre panels
converge spectrally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .hamiltonian import Annulus, DomainError, OvalSpec, branch_roots, oval_x_range

DEFAULT_TOL = 1e-11
PANIC_TOL = 1e-7
# below this distance from the center level, basic_integral switches to the
# exact power series (the oval degenerates and quadrature loses digits)
NEAR_CENTER_SWITCH = 1e-4

_MAX_NODES = 4096


class ToleranceNotMet(RuntimeError):
    """Adaptive refinement stalled above the requested tolerance."""


@dataclass(frozen=True)
class IntegralValue:
    value: float
    est_error: float

    def __post_init__(self):
        if not math.isfinite(self.value) or self.est_error < 0:
            raise ValueError("invalid integral value/error")


# ---------------------------------------------------------------------------
# small dense bivariate polynomials, c[i, j] is the coefficient of x^i y^j
# ---------------------------------------------------------------------------

def poly_from_terms(terms) -> np.ndarray:
    """Build a coefficient array from {(i, j): coeff}."""
    if not terms:
        return np.zeros((1, 1))
    nx = max(i for i, _ in terms) + 1
    ny = max(j for _, j in terms) + 1
    c = np.zeros((nx, ny))
    for (i, j), v in terms.items():
        c[i, j] = v
    return c


def poly_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != 0.0:
                out[i:i + b.shape[0], j:j + b.shape[1]] += a[i, j] * b
    return out


def poly_diff_x(c: np.ndarray) -> np.ndarray:
    c = np.atleast_2d(c)
    if c.shape[0] == 1:
        return np.zeros((1, 1))
    return c[1:, :] * np.arange(1, c.shape[0])[:, None]


def poly_diff_y(c: np.ndarray) -> np.ndarray:
    c = np.atleast_2d(c)
    if c.shape[1] == 1:
        return np.zeros((1, 1))
    return c[:, 1:] * np.arange(1, c.shape[1])[None, :]


def poly_eval(c: np.ndarray, x, y):
    return np.polynomial.polynomial.polyval2d(x, y, np.atleast_2d(c))


@dataclass(frozen=True)
class OneForm:
    """Polynomial one-form P dx + Q dy of bounded degree."""

    P: np.ndarray = field(default_factory=lambda: np.zeros((1, 1)))
    Q: np.ndarray = field(default_factory=lambda: np.zeros((1, 1)))

    def __post_init__(self):
        P = np.atleast_2d(np.asarray(self.P, dtype=float))
        Q = np.atleast_2d(np.asarray(self.Q, dtype=float))
        if max(P.shape + Q.shape) > 11:
            raise ValueError("one-form degree bound (10) exceeded")
        if not (np.isfinite(P).all() and np.isfinite(Q).all()):
            raise ValueError("one-form coefficients must be finite")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    @classmethod
    def differential_of(cls, F: np.ndarray) -> "OneForm":
        """dF = F_x dx + F_y dy."""
        return cls(poly_diff_x(F), poly_diff_y(F))

    @classmethod
    def pfaffian(cls, p) -> "OneForm":
        """omega = g dx - f dy of a perturbation, so that dH = eps * omega."""
        return cls(p.b[:, :], -p.a[:, :])


@lru_cache(maxsize=32)
def _gauss_rule(n: int):
    # nodes/weights mapped to [0, pi/2]
    z, w = np.polynomial.legendre.leggauss(n)
    half = 0.25 * math.pi
    return half * (z + 1.0), half * w


def _adaptive_gauss(f, tol):
    """Refine by node doubling until the update stabilizes."""
    n = 32
    x, w = _gauss_rule(n)
    prev = float(np.dot(w, f(x)))
    while n < _MAX_NODES:
        n *= 2
        x, w = _gauss_rule(n)
        cur = float(np.dot(w, f(x)))
        err = abs(cur - prev)
        if err <= max(tol, 1e-13 * abs(cur)):
            return cur, err
        prev = cur
    err = abs(cur - prev)
    if err > max(tol, PANIC_TOL):
        raise ToleranceNotMet(
            f"quadrature stalled at estimated error {err:.3e}")
    return cur, err


def _interval_data(spec: OvalSpec):
    """(x_lo, x_hi, o1, o2): integration interval and the two outside roots."""
    x1, x2 = branch_roots(spec.h)
    if spec.annulus is Annulus.RIGHT:
        return x1, x2, -x1, -x2
    return -x2, -x1, x1, x2


def basic_integral(k: int, spec: OvalSpec, tol: float = DEFAULT_TOL) -> IntegralValue:
    """I_k(h) = cycle integral of x^k y dx, positive orientation."""
    if not 0 <= k <= 8:
        raise ValueError("k must be in 0..8")
    s = spec.h + 0.25
    if s < 0:
        raise DomainError(f"h={spec.h} below the center level")
    if s < NEAR_CENTER_SWITCH:
        from . import picard_fuchs

        val = picard_fuchs.basic_integral_series(k, spec)
        return IntegralValue(val, 1e-15 * max(1.0, abs(val)))
    x_lo, x_hi, o1, o2 = _interval_data(spec)

    def f(thetas):
        return kernels.moment_integrand(thetas, x_lo, x_hi, o1, o2, k)

    val, err = _adaptive_gauss(f, tol)
    return IntegralValue(val, err)


def general_integral(k: int, l: int, spec: OvalSpec,
                     tol: float = DEFAULT_TOL) -> IntegralValue:
    """I_kl(h) = cycle integral of x^k y^l dx; exactly 0 for even l."""
    if not (0 <= k <= 8 and 0 <= l <= 6):
        raise ValueError("require k <= 8, l <= 6")
    if l % 2 == 0:
        # the two half-oval arcs cancel exactly for even powers of y
        return IntegralValue(0.0, 0.0)
    x_lo, x_hi, o1, o2 = _interval_data(spec)
    L = x_hi - x_lo

    def f(thetas):
        s = np.sin(thetas)
        c = np.cos(thetas)
        sc = s * c
        x = x_lo + L * s * s
        y = L * sc * np.sqrt(0.5 * (x - o1) * (x - o2))
        return 2.0 * x**k * y**l * 2.0 * L * sc

    val, err = _adaptive_gauss(f, tol)
    return IntegralValue(val, err)


def _split_parity(c: np.ndarray):
    """(odd-in-y part, even-in-y part) of a coefficient array."""
    odd = c.copy()
    even = c.copy()
    odd[:, 0::2] = 0.0
    even[:, 1::2] = 0.0
    return odd, even


def cycle_integral(form: OneForm, spec: OvalSpec,
                   tol: float = DEFAULT_TOL) -> IntegralValue:
    """Integral of P dx + Q dy around the closed oval.

    The two arcs y = +-y+(x) are combined analytically: only the odd-in-y part
    of P and the even-in-y part of Q survive, and the 1/y+ factor from dy
    cancels against the substitution jacobian, so the theta-integrand stays
    smooth (except for the Q-part at h = 0, where the oval meets the saddle).
    """
    P_odd, _ = _split_parity(form.P)
    _, Q_even = _split_parity(form.Q)
    x_lo, x_hi, o1, o2 = _interval_data(spec)
    L = x_hi - x_lo
    has_p = np.any(P_odd)
    has_q = np.any(Q_even)
    if not (has_p or has_q):
        return IntegralValue(0.0, 0.0)

    def f(thetas):
        s = np.sin(thetas)
        c = np.cos(thetas)
        sc = s * c
        x = x_lo + L * s * s
        S = np.sqrt(0.5 * (x - o1) * (x - o2))
        y = L * sc * S
        dxdth = 2.0 * L * sc
        out = np.zeros_like(x)
        if has_p:
            out += 2.0 * poly_eval(P_odd, x, y) * dxdth
        if has_q:
            # dy = (x - x^3)/y dx on the arc; dxdth / y = 2 / S
            out += 4.0 * (x - x**3) * poly_eval(Q_even, x, y) / S
        return out

    val, err = _adaptive_gauss(f, tol)
    return IntegralValue(val, err)


class IntegralTable:
    """Dense precomputed (I0, I1, I2) samples on SIGMA for batch work.

    The grid is uniform with geometric refinement toward both endpoints;
    values near the center level come from the exact series via
    basic_integral's automatic switch.
    """

    def __init__(self, n: int = 700, margin: float = 1e-6):
        ends = np.geomspace(margin, 2e-3, 40)
        hs = np.concatenate([
            -0.25 + ends,
            np.linspace(-0.25 + 2.5e-3, -2.5e-3, n),
            -ends[::-1],
        ])
        self.h = np.unique(hs)
        self.i0 = np.array(
            [basic_integral(0, OvalSpec(h)).value for h in self.h])
        self.i1 = math.pi * math.sqrt(2.0) * (self.h + 0.25)
        self.i2 = np.array(
            [basic_integral(2, OvalSpec(h)).value for h in self.h])

    def envelope_values(self, coeffs, side: Annulus = Annulus.RIGHT):
        """Rows of (a0+a1 h)I0 + s(b0+b1 h)I1 + (g0+g1 h)I2 on the grid.

        coeffs: array (..., 6) of (a0, a1, b0, b1, g0, g1).
        """
        c = np.atleast_2d(np.asarray(coeffs, dtype=float))
        sgn = 1.0 if side is Annulus.RIGHT else -1.0
        h = self.h
        out = ((c[:, 0:1] + c[:, 1:2] * h) * self.i0
               + sgn * (c[:, 2:3] + c[:, 3:4] * h) * self.i1
               + (c[:, 4:5] + c[:, 5:6] * h) * self.i2)
        return out


_default_table = None


def default_table() -> IntegralTable:
    global _default_table
    if _default_table is None:
        _default_table = IntegralTable()
    return _default_table

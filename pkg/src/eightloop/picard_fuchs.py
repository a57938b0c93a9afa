"""Linear ODE structure of the basic integrals I0, I2.

The pair I = (I0, I2) satisfies the first-order system I = A(h) I', the
derivatives chain through I^(k) = B_k(h)/(h(4h+1)) I^(k-1), and the
normalized ratios J = (I0/I1, I2/I1) satisfy analogous systems.  Both
interval endpoints carry exact series: a plain power series in s = h + 1/4
at the center level and a log-carrying fundamental system at h = 0-.
All series coefficients are exact rationals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hamiltonian import Annulus, DomainError, OvalSpec

C1 = math.pi * math.sqrt(2.0)        # scale of the center series, I1 = C1*s
SIGMA_CONST = 2.0 * math.sqrt(2.0) / math.pi  # scale of the h=0- system


@dataclass(frozen=True)
class PFMatrix:
    """2x2 matrix with polynomial-in-h entries over denominator h(4h+1).

    num[i][j] is the coefficient list (ascending powers of h) of the
    numerator; set plain_denominator=True for denominator 1.
    """

    num: tuple
    plain_denominator: bool = False

    def __call__(self, h: float) -> np.ndarray:
        m = np.empty((2, 2))
        for i in range(2):
            for j in range(2):
                m[i, j] = float(np.polynomial.polynomial.polyval(
                    h, self.num[i][j]))
        if not self.plain_denominator:
            den = h * (4.0 * h + 1.0)
            if den == 0.0:
                raise ZeroDivisionError("matrix singular at h=%r" % h)
            m /= den
        return m


# I = A(h) I'
A_MATRIX = PFMatrix(
    (((0.0, 4.0 / 3.0), (1.0 / 3.0,)),
     ((0.0, 4.0 / 15.0), (4.0 / 15.0, 4.0 * 3.0 / 15.0))),
    plain_denominator=True)

# I^(k) = [B_k(h)/(h(4h+1))] I^(k-1), k = 1..4
B_MATRICES = {
    1: PFMatrix(((((1.0, 3.0)), (-1.25,)), ((0.0, -1.0), (0.0, 5.0)))),
    2: PFMatrix((((0.0, -1.0), (-0.25,)), ((0.0, -1.0), (0.0, 1.0)))),
    3: PFMatrix((((-1.0, -5.0), (0.75,)), ((0.0, -1.0), (0.0, -3.0)))),
    4: PFMatrix((((-2.0, -9.0), (1.75,)), ((0.0, -1.0), (0.0, -7.0)))),
}

# J = (I0/I1, I2/I1) chain: J = M1 J', J' = M2 J'', J'' = M3 J'''
J_MATRICES = {
    1: PFMatrix((((0.0, -4.0), (-5.0,)), ((0.0, -4.0), (-4.0, 4.0))),
                plain_denominator=True),
    2: PFMatrix((((0.0, -0.8), (-1.0,)),
                 ((0.0, 4.0 / 15.0), (0.0, -4.0 / 3.0))),
                plain_denominator=True),
    3: PFMatrix((((0.0, -4.0 / 9.0), (-5.0 / 9.0,)),
                 ((0.0, 4.0 / 63.0), (-4.0 / 63.0, -4.0 / 7.0))),
                plain_denominator=True),
}


def pf_apply(h: float) -> np.ndarray:
    """The system matrix A(h) with I(h) = A(h) I'(h)."""
    return A_MATRIX(h)


_NEAR_SINGULAR = 1e-6


def derivatives_via_pf(h: float, order: int,
                       base: tuple | None = None) -> np.ndarray:
    """Rows (I0^(j), I2^(j)) for j = 0..order, chained through B_1..B_4.

    The zeroth row comes from quadrature unless `base` supplies (I0, I2).
    """
    if not 0 <= order <= 4:
        raise ValueError("order must be 0..4")
    if not (-0.25 < h < 0.0):
        raise DomainError(f"h={h} not in the open interval (-1/4, 0)")
    if abs(h * (4.0 * h + 1.0)) < _NEAR_SINGULAR:
        warnings.warn("h too close to an endpoint: derivative chain "
                      "is ill-conditioned", RuntimeWarning, stacklevel=2)
    if base is None:
        from . import quadrature

        spec = OvalSpec(h)
        base = (quadrature.basic_integral(0, spec).value,
                quadrature.basic_integral(2, spec).value)
    out = np.empty((order + 1, 2))
    out[0] = base
    cur = np.asarray(base, dtype=float)
    for k in range(1, order + 1):
        cur = B_MATRICES[k](h) @ cur
        out[k] = cur
    return out


def i1_derivative(h: float, j: int) -> float:
    """j-th derivative of the exactly linear I1(h) = pi*sqrt(2)*(h+1/4)."""
    if j == 0:
        return C1 * (h + 0.25)
    if j == 1:
        return C1
    return 0.0


def j_derivatives(h: float, order: int = 3,
                  base: tuple | None = None) -> np.ndarray:
    """Rows (J0^(j), J2^(j)) for j = 0..order via the normalized chain."""
    if not 0 <= order <= 3:
        raise ValueError("order must be 0..3")
    if base is None:
        from . import quadrature

        spec = OvalSpec(h)
        i1 = C1 * (h + 0.25)
        base = (quadrature.basic_integral(0, spec).value / i1,
                quadrature.basic_integral(2, spec).value / i1)
    out = np.empty((order + 1, 2))
    out[0] = base
    cur = np.asarray(base, dtype=float)
    for k in range(1, order + 1):
        cur = np.linalg.solve(J_MATRICES[k](h), cur)
        out[k] = cur
    return out


# ---------------------------------------------------------------------------
# exact series at the two interval ends
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesExpansion:
    """Truncated expansion of the integral pair at one interval end.

    center='center': I0 = scale * sum coeffs_I0[k] s^k (s = h + 1/4), same
    for I2; no log channel.
    center='zero': the pair is J = (I0/I1, I2/I1) near h = 0- and
    J_k = scale*(psi_k(h) + phi_k(h) log(-h)) + const*phi_k(h), with
    coeffs_* the psi polynomials and log_coeffs the phi polynomials.
    """

    center: str
    coeffs_I0: tuple
    coeffs_I2: tuple
    scale: float
    log_coeffs: tuple | None = None

    def _polyval(self, coeffs, x):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + float(c)
        return acc

    def eval(self, h: float, const: float = 0.0):
        """(I0, I2) at the center, or (J0, J2) near zero (needs const)."""
        if self.center == "center":
            s = h + 0.25
            return (self.scale * self._polyval(self.coeffs_I0, s),
                    self.scale * self._polyval(self.coeffs_I2, s))
        if not h < 0.0:
            raise DomainError("log-channel series needs h < 0")
        lg = math.log(-h)
        phi0 = self._polyval(self.log_coeffs[0], h)
        phi2 = self._polyval(self.log_coeffs[1], h)
        return (self.scale * (self._polyval(self.coeffs_I0, h) + phi0 * lg)
                + const * phi0,
                self.scale * (self._polyval(self.coeffs_I2, h) + phi2 * lg)
                + const * phi2)


def center_coefficients(n_terms: int):
    """Exact (a_k, c_k) for I0 = C1*sum a_k s^k, I2 = C1*sum c_k s^k.

    Both lists include the constant (zero) term, so len = n_terms + 1.
    The recursion is c_{k+1} = ((4k-5)(4k-3)/(4k(k+1))) c_k with
    a_k = (5-4k) c_k, seeded by c_1 = 1.
    """
    a = [Fraction(0)]
    c = [Fraction(0)]
    ck = Fraction(1)
    for k in range(1, n_terms + 1):
        c.append(ck)
        a.append((5 - 4 * k) * ck)
        ck = ck * (4 * k - 5) * (4 * k - 3) / (4 * k * (k + 1))
    return a, c


def _odd_double_factorial(n: int) -> Fraction:
    """(n)!! for odd n, extended by n!! = (n+2)!!/(n+2) below 1."""
    if n >= 1:
        out = 1
        while n > 1:
            out *= n
            n -= 2
        return Fraction(out)
    # (-1)!! = 1, (-3)!! = -1, ...
    out = Fraction(1)
    m = -1
    while m >= n:
        out = out / (m + 2)
        m -= 2
    return out


def center_coefficient_closed_form(k: int):
    """(a_k, c_k) from the closed double-factorial formulas."""
    if k < 1:
        raise ValueError("k >= 1")
    denom = Fraction(4) ** (k - 1) * math.factorial(k - 1) * math.factorial(k)
    a = _odd_double_factorial(4 * k - 5) / denom
    c = -_odd_double_factorial(4 * k - 7) / denom
    return a, c


def series_at_center(n_terms: int) -> SeriesExpansion:
    if not 1 <= n_terms <= 64:
        raise ValueError("n_terms must be 1..64")
    a, c = center_coefficients(n_terms)
    return SeriesExpansion("center", tuple(a), tuple(c), C1)


def zero_coefficients(n_terms: int):
    """Exact psi/phi polynomial coefficients of the h = 0- system.

    Returns (psi0, psi2, phi0, phi2) as Fraction lists of length
    n_terms + 1 (ascending powers of h).  phi is the analytic solution of
    the normalized system J = M1 J'; psi carries the phi*log(-h) channel.
    """
    n = n_terms
    p = [Fraction(0)] * (n + 2)   # phi0
    q = [Fraction(0)] * (n + 2)   # phi2
    s = [Fraction(0)] * (n + 2)   # psi0
    t = [Fraction(0)] * (n + 2)   # psi2
    p[1] = Fraction(-1)
    s[0] = Fraction(4, 3)
    s[1] = Fraction(-11, 6)
    t[0] = Fraction(16, 15)
    t[1] = Fraction(-4, 15)
    for k in range(1, n + 1):
        q[k + 1] = Fraction(-(4 * k + 1), 5 * (k + 1)) * p[k]
        p[k + 1] = Fraction(-(4 * k + 3) * (4 * k + 1),
                            4 * k * (k + 1)) * p[k]
        t[k + 1] = (-(4 * k + 1) * s[k] - 4 * p[k] - 5 * q[k + 1]) \
            / (5 * (k + 1))
        s[k + 1] = (5 * (1 - 4 * (k + 1)) * t[k + 1]
                    + 4 * p[k + 1] - 20 * q[k + 1]) / (-4 * k)
    return s[:n + 1], t[:n + 1], p[:n + 1], q[:n + 1]


_zero_const_cache = None


def zero_series_const(series: SeriesExpansion | None = None) -> float:
    """The free multiple of the phi channel, calibrated once at h = -1e-3."""
    global _zero_const_cache
    if _zero_const_cache is None:
        from . import quadrature

        if series is None:
            series = series_at_zero(8)
        h = -1e-3
        i0 = quadrature.basic_integral(0, OvalSpec(h)).value
        j0 = i0 / (C1 * (h + 0.25))
        psi0_log = series.eval(h, const=0.0)[0]
        phi0 = series._polyval(series.log_coeffs[0], h)
        _zero_const_cache = (j0 - psi0_log) / phi0
    return _zero_const_cache


def series_at_zero(n_terms: int) -> SeriesExpansion:
    if not 1 <= n_terms <= 8:
        raise ValueError("n_terms must be 1..8")
    s, t, p, q = zero_coefficients(n_terms)
    return SeriesExpansion("zero", tuple(s), tuple(t), SIGMA_CONST,
                           log_coeffs=(tuple(p), tuple(q)))


# ---------------------------------------------------------------------------
# near-center evaluation used by quadrature.basic_integral
# ---------------------------------------------------------------------------

_CENTER_TERMS = 24
_center_float = None


def _center_float_coeffs():
    global _center_float
    if _center_float is None:
        a, c = center_coefficients(_CENTER_TERMS)
        _center_float = (np.array([float(v) for v in a]),
                         np.array([float(v) for v in c]))
    return _center_float


def higher_from_basis(k: int, h: float, i0: float, i1: float, i2: float):
    """Reduce I_k (k <= 8) to the basis I0, I1, I2 via
    I_{k+4} = (4(k+1) h I_k + 2(k+4) I_{k+2}) / (k+7) and I3 = I1."""
    vals = [i0, i1, i2, i1]
    for j in range(k - 3):
        vals.append((4.0 * (j + 1) * h * vals[j]
                     + 2.0 * (j + 4) * vals[j + 2]) / (j + 7))
    return vals[k]


def basic_integral_series(k: int, spec: OvalSpec) -> float:
    """I_k(h) from the exact center series; accurate for small s = h+1/4."""
    s = spec.h + 0.25
    av, cv = _center_float_coeffs()
    i0 = C1 * float(np.polynomial.polynomial.polyval(s, av))
    i2 = C1 * float(np.polynomial.polynomial.polyval(s, cv))
    i1 = C1 * s
    val = higher_from_basis(k, spec.h, i0, i1, i2) if k > 2 \
        else (i0, i1, i2)[k]
    if spec.annulus is Annulus.LEFT and k % 2 == 1:
        val = -val
    return val

"""Pure-python fallback for the hot kernels.

Same call signatures as the compiled module ``eightloop._kernels``.
Coefficient vectors are length-10 float arrays in the monomial order
(0,0),(1,0),(2,0),(3,0),(0,1),(1,1),(2,1),(0,2),(1,2),(0,3) for x^i y^j.
"""

import numpy as np

BACKEND = "python"


def ham(x, y):
    """Value of the double-well Hamiltonian y^2/2 - x^2/2 + x^4/4."""
    x2 = x * x
    return 0.5 * y * y - 0.5 * x2 + 0.25 * x2 * x2


def cubic_eval(c, x, y):
    """Evaluate a cubic polynomial with packed coefficients c at (x, y)."""
    return (
        c[0]
        + x * (c[1] + x * (c[2] + x * c[3]))
        + y * (c[4] + x * (c[5] + x * c[6]))
        + y * y * (c[7] + x * c[8] + y * c[9])
    )


def vf_rhs(x, y, a, b, eps):
    """Right-hand side of the perturbed system at one point.

    Returns (y + eps*f(x,y), x - x^3 + eps*g(x,y)).
    """
    dx = y
    dy = x - x * x * x
    if eps != 0.0:
        dx += eps * cubic_eval(a, x, y)
        dy += eps * cubic_eval(b, x, y)
    return dx, dy


def vf_rhs_many(xs, ys, a, b, eps):
    """Vectorized vf_rhs over arrays; returns (dx, dy) arrays."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    dx = ys + eps * cubic_eval(a, xs, ys)
    dy = xs - xs**3 + eps * cubic_eval(b, xs, ys)
    return dx, dy


def moment_integrand(thetas, x_lo, x_hi, o1, o2, k):
    """Batch integrand for the oval moment integral of x^k y dx.

    Uses the substitution x = x_lo + (x_hi - x_lo) sin^2(theta), under which
    y = L s c sqrt((x-o1)(x-o2)/2) with o1, o2 the two branch roots outside
    the integration interval; the integrand is analytic in theta.
    """
    thetas = np.asarray(thetas, dtype=float)
    L = x_hi - x_lo
    s = np.sin(thetas)
    c = np.cos(thetas)
    sc = s * c
    x = x_lo + L * s * s
    yv = L * sc * np.sqrt(0.5 * (x - o1) * (x - o2))
    dxdth = 2.0 * L * sc
    # leading 2: the integral runs over both half-oval arcs
    return 2.0 * x**k * yv * dxdth

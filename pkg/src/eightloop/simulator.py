"""Direct-integration oracle: orbits, displacement map, limit cycles.

Everything here is independent of the envelope machinery: orbits of the
perturbed system are integrated with a high-order adaptive scheme, the
Poincare displacement is measured in H-units on the x-axis section, and
the order-k coefficients of the displacement are recovered by Richardson
extrapolation over a geometric ladder of eps values.  This is the oracle
against which the closed-form envelopes are cross-validated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import kernels
from .hamiltonian import (Annulus, DomainError, OvalSpec, PerturbationCoeffs,
                          branch_roots)
from .melnikov import PreconditionError, m1_envelope, m2_envelope

BLOWUP_RADIUS = 10.0
_RTOL = 1e-12
_ATOL = 1e-13
_SECTION_TOL = 1e-12
ENVELOPE_VANISH_TOL = 1e-12


@dataclass(frozen=True)
class DisplacementSample:
    """One measured return: d = H(return point) - H(start point)."""

    h: float
    eps: float
    d: float
    return_time: float


@dataclass(frozen=True)
class LimitCycleFinding:
    h_star: float
    annulus: Annulus
    eps: float
    stability: str          # 'stable' | 'unstable'
    residual: float


def _rhs(p: PerturbationCoeffs, eps: float):
    av, bv = p.packed()

    def fun(t, z):
        return kernels.vf_rhs(z[0], z[1], av, bv, eps)

    return fun


def _blowup_event(t, z):
    return z[0] * z[0] + z[1] * z[1] - BLOWUP_RADIUS ** 2


_blowup_event.terminal = True


def integrate_orbit(x0: float, y0: float, p: PerturbationCoeffs, eps: float,
                    t_end: float, rtol: float | None = None,
                    atol: float | None = None,
                    dense: bool = False, events=None):
    """Integrate the perturbed system from (x0, y0) for time t_end.

    Raises on blow-up past radius 10.  Returns the scipy solution object
    (with dense output when requested) so callers can resample freely.
    """
    if not (math.isfinite(x0) and math.isfinite(y0)):
        raise ValueError("non-finite initial point")
    if abs(eps) > 0.1 and events is None:
        raise ValueError("|eps| must be <= 0.1")
    evs = [_blowup_event] + (list(events) if events else [])
    sol = solve_ivp(_rhs(p, eps), (0.0, t_end), [x0, y0], method="DOP853",
                    rtol=_RTOL if rtol is None else rtol,
                    atol=_ATOL if atol is None else atol,
                    dense_output=dense, events=evs)
    if sol.t_events[0].size:
        raise RuntimeError(
            f"orbit blow-up at t={sol.t_events[0][0]:.3g}")
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    return sol


def hamiltonian_value(x: float, y: float) -> float:
    return kernels.ham(x, y)


def displacement_map(h: float, p: PerturbationCoeffs, eps: float,
                     annulus: Annulus = Annulus.RIGHT,
                     t_max: float = 200.0, rtol: float | None = None,
                     atol: float | None = None) -> DisplacementSample:
    """One full return to the x-axis section, displacement in H-units.

    The start point is the outer oval intersection with the x-axis:
    (x_hi, 0) on the right annulus, (-x_hi, 0) on the left.  The return
    event is the y = 0 crossing in the same direction as at the start
    (the intermediate inner-edge crossing has the opposite direction).
    """
    if not (-0.25 < h < 0.0):
        raise DomainError(f"h={h} not inside (-1/4, 0)")
    _, x_hi = branch_roots(h)
    if annulus is Annulus.RIGHT:
        x0, direction = x_hi, -1.0
    else:
        x0, direction = -x_hi, 1.0

    def section(t, z):
        return z[1]

    section.direction = direction
    section.terminal = False

    sol = integrate_orbit(x0, 0.0, p, eps, t_max, rtol=rtol, atol=atol,
                          events=[section])
    hits = sol.t_events[1]
    hits = hits[hits > 1e-8]
    if hits.size == 0:
        raise RuntimeError(f"no section return within t={t_max} at h={h}")
    t_ret = float(hits[0])
    x_ret, y_ret = sol.y_events[1][np.nonzero(sol.t_events[1] == t_ret)[0][0]]
    if abs(y_ret) > _SECTION_TOL:
        raise RuntimeError(f"section crossing not resolved: |y|={abs(y_ret)}")
    d = hamiltonian_value(x_ret, y_ret) - h
    return DisplacementSample(h=h, eps=eps, d=d, return_time=t_ret)


def second_order_displacement(h: float, p: PerturbationCoeffs, eps: float,
                              annulus: Annulus = Annulus.RIGHT,
                              rtol: float | None = None,
                              atol: float | None = None) -> float:
    """(d(h, eps) + d(h, -eps)) / 2: the even-in-eps part of d.

    With the first-order term identically zero this equals
    eps^2 M2 + O(eps^4); averaging removes the eps^3 contamination that
    otherwise swamps M2 wherever the envelope is near a degenerate zero
    configuration.
    """
    dp = displacement_map(h, p, eps, annulus, rtol=rtol, atol=atol).d
    dm = displacement_map(h, p, -eps, annulus, rtol=rtol, atol=atol).d
    return 0.5 * (dp + dm)


_TIGHT_RTOL = 3e-14
_TIGHT_ATOL = 1e-16


def isolated_second_order(h: float, p: PerturbationCoeffs, eps: float,
                          annulus: Annulus = Annulus.RIGHT) -> float:
    """eps^2 M2(h) isolated from the measured displacement.

    Combines the even-in-eps average at eps and 2*eps in a one-step
    Richardson pair, (4 d2(eps) - d2(2 eps)) / 3, which cancels the eps^4
    term as well; integration runs at near-roundoff tolerances so the
    residual error is a few 1e-16 in H-units.
    """
    d2a = second_order_displacement(h, p, eps, annulus,
                                    rtol=_TIGHT_RTOL, atol=_TIGHT_ATOL)
    d2b = second_order_displacement(h, p, 2.0 * eps, annulus,
                                    rtol=_TIGHT_RTOL, atol=_TIGHT_ATOL)
    return (4.0 * d2a - 0.25 * d2b) / 3.0


# ---------------------------------------------------------------------------
# Melnikov extraction by Richardson extrapolation
# ---------------------------------------------------------------------------

def extract_melnikov(h: float, p: PerturbationCoeffs, order: int,
                     annulus: Annulus = Annulus.RIGHT, eps0: float = 1e-2,
                     depth: int = 4, ratio: float = 2.0):
    """Leading displacement coefficient: limit of d(h, eps)/eps^order.

    Requires every lower-order envelope of p to vanish (to 1e-12), since
    any leakage of a lower order diverges under the normalization.
    Returns (value, error_estimate).
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2, or 3")
    if order >= 2 and not m1_envelope(p).is_zero(ENVELOPE_VANISH_TOL):
        raise PreconditionError("order-1 envelope does not vanish")
    if order >= 3 and not m2_envelope(p).is_zero(ENVELOPE_VANISH_TOL):
        raise PreconditionError("order-2 envelope does not vanish")
    tableau = []
    for i in range(depth):
        eps = eps0 / ratio ** i
        f = displacement_map(h, p, eps, annulus).d / eps ** order
        row = [f]
        for m in range(1, i + 1):
            rm = ratio ** m
            row.append((rm * row[m - 1] - tableau[i - 1][m - 1]) / (rm - 1.0))
        tableau.append(row)
    best = tableau[-1][-1]
    err = abs(tableau[-1][-1] - tableau[-1][-2]) if depth > 1 else math.nan
    scale = max(abs(best), 1e-30)
    if depth > 2 and err > 0.5 * scale:
        raise RuntimeError(
            f"Richardson ladder did not stabilize (err={err:.3e})")
    return best, err


# ---------------------------------------------------------------------------
# limit-cycle detection
# ---------------------------------------------------------------------------

_NOISE_FLOOR = 5e-16


def _scan_grid(n: int, h_max: float) -> np.ndarray:
    edge = np.geomspace(2e-5, 5e-3, 18)
    parts = [-0.25 + edge, np.linspace(-0.245, min(-5e-3, h_max), n)]
    if h_max > -5e-3:
        parts.append(-edge[::-1][edge[::-1] >= -h_max])
    return np.unique(np.concatenate(parts))


def find_limit_cycles(p: PerturbationCoeffs, eps: float = 1e-3,
                      annulus: Annulus = Annulus.RIGHT, n_grid: int = 80,
                      symmetrize: bool | None = None):
    """Scan the displacement over h and bisect its sign changes.

    symmetrize=None picks the isolated second-order displacement
    automatically when the first-order envelope vanishes (see
    isolated_second_order); pass False to scan the raw d(., eps).  In the
    isolated mode the scan stops short of h = 0, where the expansion in
    eps degenerates as orbits linger near the saddle (the homoclinic zone
    is out of scope).
    """
    if symmetrize is None:
        symmetrize = m1_envelope(p).is_zero(ENVELOPE_VANISH_TOL)
    if symmetrize:
        def dfun(h):
            return isolated_second_order(h, p, eps, annulus)
    else:
        def dfun(h):
            return displacement_map(h, p, eps, annulus).d
    grid = _scan_grid(n_grid, -6e-3 if symmetrize else -2e-4)
    # the isolated mode only needs the bracket tight enough to localize the
    # envelope zero; the raw mode polishes until the residual invariant holds
    xtol = 3e-6 if symmetrize else 1e-8
    vals = np.array([dfun(h) for h in grid])
    findings = []
    # in the isolated mode, displacements below the integrator noise floor
    # carry no sign information; skip them when bracketing
    if symmetrize:
        keep = np.abs(vals) >= _NOISE_FLOOR
    else:
        keep = np.ones(len(grid), dtype=bool)
    idx = np.nonzero(keep)[0]
    s = np.sign(vals)
    for i, j in zip(idx[:-1], idx[1:]):
        if s[i] * s[j] >= 0:
            continue
        lo, hi = grid[i], grid[j]
        flo = vals[i]
        while hi - lo > xtol:
            mid = 0.5 * (lo + hi)
            fm = dfun(mid)
            if fm == 0.0:
                lo = hi = mid
                break
            if np.sign(fm) == np.sign(flo):
                lo, flo = mid, fm
            else:
                hi = mid
        h_star = 0.5 * (lo + hi)
        residual = abs(dfun(h_star))
        # d > 0 below and d < 0 above means returns spiral inward in h
        stability = "stable" if vals[i] > 0 else "unstable"
        findings.append(LimitCycleFinding(h_star=h_star, annulus=annulus,
                                          eps=eps, stability=stability,
                                          residual=residual))
    return findings


# ---------------------------------------------------------------------------
# Darboux first-integral verification
# ---------------------------------------------------------------------------

def darboux_residual(p: PerturbationCoeffs, eps: float, n_points: int = 100,
                     seed: int = 0) -> float:
    """Max angle residual |grad(log H_eps) . X| / (|grad||X|) at samples.

    Samples are drawn near the right center, rejecting points where a
    Darboux factor nearly vanishes (the log-gradient is singular there).
    """
    from .melnikov import darboux_parameters

    dx = darboux_parameters(p, eps)
    rng = np.random.default_rng(seed)
    worst = 0.0
    accepted = 0
    while accepted < n_points:
        x = rng.uniform(0.3, 1.6)
        y = rng.uniform(-0.6, 0.6)
        f1, f2 = dx.factors(x, y)
        if min(abs(f1), abs(f2)) < 1e-3:
            continue
        gx, gy = dx.grad_log(x, y)
        vx, vy = kernels.vf_rhs(x, y, *p.packed(), eps)
        gn = math.hypot(gx, gy)
        vn = math.hypot(vx, vy)
        if gn < 1e-14 or vn < 1e-14:
            continue
        worst = max(worst, abs(gx * vx + gy * vy) / (gn * vn))
        accepted += 1
    return worst

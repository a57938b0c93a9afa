"""Zero counting on the energy interval and limit-cycle distributions.

Zeros of the second-order envelope on SIGMA = (-1/4, 0) predict the limit
cycles of the perturbed system, one annulus per sign of the I1 slot.  This
module counts zeros with a multiplicity estimate, computes the (right, left)
distribution of a perturbation, and searches envelope space for requested
distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .hamiltonian import Annulus, OvalSpec
from .melnikov import PreconditionError, evaluate_envelope, m1_envelope, m2_envelope


def envelope_function(e, annulus: Annulus = Annulus.RIGHT):
    """h -> envelope value on the chosen annulus, for count_zeros."""
    return lambda h: evaluate_envelope(e, OvalSpec(h, annulus))

MARGIN = 1e-6
CLUSTER_RESOLUTION = 1e-7
_TOUCH_REL = 1e-9          # relative depth below which a local dip counts
_MULT_CAP = 3


@dataclass(frozen=True)
class ZeroReport:
    """Zeros of a scalar function on the truncated energy interval."""

    zeros: tuple            # ((h, multiplicity), ...) sorted by h
    notes: tuple = ()

    @property
    def count(self) -> int:
        """Number of distinct zeros."""
        return len(self.zeros)

    @property
    def count_with_multiplicity(self) -> int:
        return sum(m for _, m in self.zeros)

    def locations(self):
        return np.array([h for h, _ in self.zeros])


def _default_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """Uniform grid with geometric refinement toward both endpoints."""
    span = hi - lo
    edge = np.geomspace(1e-7 * span, 0.02 * span, 60)
    grid = np.concatenate([
        [lo], lo + edge,
        np.linspace(lo + 0.02 * span, hi - 0.02 * span, n),
        hi - edge[::-1], [hi],
    ])
    return np.unique(grid)


def _multiplicity(func, h0: float, scale: float, even: bool,
                  hi: float) -> int:
    """Estimate the vanishing order from the local log-log slope."""
    d = 1e-4 if h0 + 2.5e-4 < hi else -1e-4
    f1 = abs(func(h0 + d))
    f2 = abs(func(h0 + 2 * d))
    if f1 < 1e-300 or f2 < 1e-300:
        return 2 if even else 1
    m = math.log(f2 / f1) / math.log(2.0)
    m = int(round(m))
    m = max(1, min(m, _MULT_CAP))
    if even:
        m = max(2, m + (m % 2))          # even-touch roots have even order
    elif m % 2 == 0:
        m = max(1, m - 1)                # crossing roots have odd order
    return min(m, _MULT_CAP)


def count_zeros(func, tol: float = 1e-9, interval=None,
                n: int = 600) -> ZeroReport:
    """Count zeros of func on the (truncated) energy interval.

    Sign changes on an endpoint-refined grid are polished with brentq;
    near-zero local dips without a sign change are probed for even-order
    roots.  Multiplicities above 3 are reported as 3.
    """
    lo, hi = interval if interval is not None else (-0.25 + MARGIN, -MARGIN)
    grid = _default_grid(lo, hi, n)
    vals = np.array([func(h) for h in grid])
    scale = float(np.max(np.abs(vals)))
    notes = []
    if scale == 0.0:
        return ZeroReport((), ("function identically zero on grid",))
    roots = []
    sgn = np.sign(vals)
    for i in range(len(grid) - 1):
        if sgn[i] == 0.0:
            roots.append((grid[i], False))
            continue
        if sgn[i] * sgn[i + 1] < 0:
            r = brentq(func, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-15)
            roots.append((r, False))
    # even-order roots: interior local minima of |f| that dip to ~0
    av = np.abs(vals)
    for i in range(1, len(grid) - 1):
        if av[i] <= av[i - 1] and av[i] <= av[i + 1] \
                and av[i] < 1e-4 * scale and sgn[i - 1] * sgn[i + 1] > 0:
            res = minimize_scalar(lambda h: abs(func(h)),
                                  bracket=(grid[i - 1], grid[i], grid[i + 1]))
            if res.fun < _TOUCH_REL * scale + tol:
                roots.append((float(res.x), True))
    merged = []
    for r, even in sorted(roots):
        if merged and abs(r - merged[-1][0]) < CLUSTER_RESOLUTION:
            notes.append(f"cluster merged near h={r:.9g}")
            continue
        merged.append((r, even))
    zeros = tuple((r, _multiplicity(func, r, scale, even, hi))
                  for r, even in merged)
    return ZeroReport(zeros, tuple(notes))


def distribution(p) -> tuple:
    """(right, left) zero reports of the second-order envelopes of p."""
    if not m1_envelope(p).is_zero():
        raise PreconditionError("first-order envelope of p does not vanish")
    e = m2_envelope(p)
    right = count_zeros(envelope_function(e, Annulus.RIGHT))
    left = count_zeros(envelope_function(e, Annulus.LEFT))
    return right, left


# ---------------------------------------------------------------------------
# batch counting over the precomputed integral table
# ---------------------------------------------------------------------------

def sample_envelope_coeffs(rng, n: int, freeze_beta1: bool = False,
                           freeze_beta: bool = False) -> np.ndarray:
    """(n, 6) random coefficients, log-uniform magnitudes in [1e-3, 1e3]."""
    mag = 10.0 ** rng.uniform(-3.0, 3.0, size=(n, 6))
    sign = rng.choice([-1.0, 1.0], size=(n, 6))
    c = mag * sign
    if freeze_beta or freeze_beta1:
        c[:, 3] = 0.0
    if freeze_beta:
        c[:, 2] = 0.0
    return c


def grid_sign_changes(coeffs, side: Annulus):
    """Sign-change counts per envelope row on the dense integral table."""
    from . import quadrature

    table = quadrature.default_table()
    vals = table.envelope_values(coeffs, side)
    s = np.sign(vals)
    return np.sum(s[:, 1:] * s[:, :-1] < 0, axis=1)


def batch_counts(n: int, seed: int = 0, freeze_beta1: bool = False,
                 freeze_beta: bool = False):
    """(right, left) sign-change counts for n random envelopes."""
    rng = np.random.default_rng(seed)
    c = sample_envelope_coeffs(rng, n, freeze_beta1, freeze_beta)
    return grid_sign_changes(c, Annulus.RIGHT), grid_sign_changes(c, Annulus.LEFT)


@dataclass(frozen=True)
class SearchResult:
    coeffs: np.ndarray       # (alpha0, alpha1, beta0, beta1, gamma0, gamma1)
    achieved: tuple          # (right, left)
    target: tuple
    evaluations: int
    right_report: ZeroReport
    left_report: ZeroReport

    @property
    def success(self) -> bool:
        return self.achieved == self.target


def _score(achieved, target):
    # reward matching each slot without overshooting the other
    return -(abs(achieved[0] - target[0]) + abs(achieved[1] - target[1]))


def _placement_candidates(rng, m: int, k: int, side: Annulus,
                          freeze_beta: bool) -> np.ndarray:
    """Envelopes with k prescribed zeros on one annulus (nullspace trick).

    The envelope value at fixed h is linear in the six coefficients, so k
    zero conditions cut the coefficient space down to a (6-k)-dimensional
    nullspace; random members of that nullspace are returned.  Zeros are
    biased toward the center end where the high-count configurations live.
    """
    from .quadrature import basic_integral
    from .picard_fuchs import C1

    sgn = 1.0 if side is Annulus.RIGHT else -1.0
    ncols = 4 if freeze_beta else 6
    out = np.empty((m, 6))
    for row in range(m):
        while True:
            s_pos = np.sort(10.0 ** rng.uniform(-2.3, math.log10(0.24),
                                                size=k))
            if k == 1 or np.min(np.diff(s_pos)) > 0.004:
                break
        A = np.empty((k, ncols))
        for i, s in enumerate(s_pos):
            h = s - 0.25
            i0 = basic_integral(0, OvalSpec(h)).value
            i2 = basic_integral(2, OvalSpec(h)).value
            i1 = C1 * s
            if freeze_beta:
                A[i] = (i0, h * i0, i2, h * i2)
            else:
                A[i] = (i0, h * i0, sgn * i1, sgn * h * i1, i2, h * i2)
        _, _, vt = np.linalg.svd(A)
        null = vt[k:]
        c = rng.normal(size=null.shape[0]) @ null
        if freeze_beta:
            out[row] = (c[0], c[1], 0.0, 0.0, c[2], c[3])
        else:
            out[row] = c
    return out


def search_distribution(target, budget: int = 2000,
                        seed: int = 0) -> SearchResult:
    """Randomized search over envelope coefficients toward a distribution.

    Mixes log-uniform random envelopes with candidates constructed to have
    the majority-side count by zero placement (the envelope value is linear
    in its coefficients, so prescribed zeros define a nullspace).  Finding
    the target is not guaranteed within the budget; the best found is
    always returned.
    """
    tr, tl = int(target[0]), int(target[1])
    rng = np.random.default_rng(seed)
    freeze = (tr == tl)
    maj_side = Annulus.RIGHT if tr >= tl else Annulus.LEFT
    kmaj = min(max(tr, tl), 5)
    best_c, best_ach, best_s = None, (-1, -1), -99
    used = 0
    chunk = 200
    while used < budget:
        m = min(chunk, budget - used)
        if used % (2 * chunk) == 0 or kmaj == 0:
            c = sample_envelope_coeffs(rng, m, freeze_beta=freeze)
        else:
            c = _placement_candidates(rng, m, kmaj, maj_side, freeze)
        right = grid_sign_changes(c, Annulus.RIGHT)
        left = grid_sign_changes(c, Annulus.LEFT)
        used += m
        for i in range(m):
            s = _score((int(right[i]), int(left[i])), (tr, tl))
            if s > best_s:
                best_s, best_c = s, c[i].copy()
                best_ach = (int(right[i]), int(left[i]))
        if best_s == 0:
            break
    from .melnikov import Envelope

    e = Envelope(alpha0=best_c[0], alpha1=best_c[1], beta0=best_c[2],
                 beta1=best_c[3], gamma0=best_c[4], gamma1=best_c[5], order=2)
    rr = count_zeros(envelope_function(e, Annulus.RIGHT))
    lr = count_zeros(envelope_function(e, Annulus.LEFT))
    return SearchResult(best_c, best_ach, (tr, tl), used, rr, lr)

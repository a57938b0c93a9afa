"""Geometry of the symmetric double-well Hamiltonian H = y^2/2 - x^2/2 + x^4/4.

The zero level set is a figure-eight through the saddle at the origin; the
critical value h = -1/4 corresponds to the two centers (1,0) and (-1,0).
Each period annulus is filled by ovals at levels h in SIGMA = (-1/4, 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels

H_SADDLE = 0.0
H_CENTER = -0.25
SIGMA = (-0.25, 0.0)

# packed monomial order shared with the kernels: x^i y^j
MONOMIALS = [(0, 0), (1, 0), (2, 0), (3, 0),
             (0, 1), (1, 1), (2, 1),
             (0, 2), (1, 2),
             (0, 3)]


class DomainError(ValueError):
    """Argument outside the admissible energy range or oval."""


class Annulus(Enum):
    RIGHT = "right"
    LEFT = "left"


@dataclass(frozen=True)
class OvalSpec:
    """An oval: energy level plus which nest (around (1,0) or (-1,0))."""

    h: float
    annulus: Annulus = Annulus.RIGHT

    def __post_init__(self):
        if not (H_CENTER <= self.h <= H_SADDLE):
            raise DomainError(f"energy level h={self.h} outside [-1/4, 0]")

    @property
    def s(self) -> float:
        """Distance from the center level, s = h + 1/4."""
        return self.h - H_CENTER


@dataclass(frozen=True)
class PerturbationCoeffs:
    """The 20 coefficients a_ij, b_ij (i+j <= 3) of the cubic perturbation.

    f(x,y) = sum a_ij x^i y^j enters dx/dt, g(x,y) = sum b_ij x^i y^j enters
    dy/dt.  The combinations lam = a11/2 + b02 and mu = a21 + b12 drive the
    second-order displacement coefficient; they are always recomputed.
    """

    a: np.ndarray = field(default_factory=lambda: np.zeros((4, 4)))
    b: np.ndarray = field(default_factory=lambda: np.zeros((4, 4)))

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != (4, 4) or b.shape != (4, 4):
            raise ValueError("coefficient arrays must be 4x4")
        if not (np.isfinite(a).all() and np.isfinite(b).all()):
            raise ValueError("coefficients must be finite")
        for i in range(4):
            for j in range(4):
                if i + j > 3 and (a[i, j] != 0.0 or b[i, j] != 0.0):
                    raise ValueError(f"degree-{i+j} entry ({i},{j}) must be 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_dict(cls, entries: dict) -> "PerturbationCoeffs":
        """Build from keys like 'a10', 'b02'; unknown keys are rejected."""
        a = np.zeros((4, 4))
        b = np.zeros((4, 4))
        for key, val in entries.items():
            if len(key) != 3 or key[0] not in "ab" \
                    or not key[1].isdigit() or not key[2].isdigit():
                raise KeyError(f"unknown coefficient key {key!r}")
            i, j = int(key[1]), int(key[2])
            if i + j > 3:
                raise KeyError(f"coefficient {key!r} has degree > 3")
            (a if key[0] == "a" else b)[i, j] = float(val)
        return cls(a, b)

    def to_dict(self) -> dict:
        out = {}
        for i, j in MONOMIALS:
            if self.a[i, j] != 0.0:
                out[f"a{i}{j}"] = self.a[i, j]
            if self.b[i, j] != 0.0:
                out[f"b{i}{j}"] = self.b[i, j]
        return out

    @property
    def lam(self) -> float:
        return 0.5 * self.a[1, 1] + self.b[0, 2]

    @property
    def mu(self) -> float:
        return self.a[2, 1] + self.b[1, 2]

    def packed(self):
        """(a, b) as length-10 contiguous vectors in kernel monomial order."""
        av = np.array([self.a[i, j] for i, j in MONOMIALS])
        bv = np.array([self.b[i, j] for i, j in MONOMIALS])
        return av, bv

    def f(self, x, y):
        av, _ = self.packed()
        return kernels.cubic_eval(av, x, y)

    def g(self, x, y):
        _, bv = self.packed()
        return kernels.cubic_eval(bv, x, y)

    def conjugated(self) -> "PerturbationCoeffs":
        """Coefficients after (x,y) -> (-x,-y), which swaps the two centers.

        Flips the sign of every a_ij, b_ij with i+j even.
        """
        a = self.a.copy()
        b = self.b.copy()
        for i in range(4):
            for j in range(4):
                if (i + j) % 2 == 0:
                    a[i, j] = -a[i, j]
                    b[i, j] = -b[i, j]
        return PerturbationCoeffs(a, b)


def hamiltonian_value(x, y):
    """H(x, y) = y^2/2 - x^2/2 + x^4/4."""
    return kernels.ham(x, y)


def branch_roots(h):
    """The four roots +-sqrt(r1), +-sqrt(r2) of 2h + x^2 - x^4/2 = 0.

    Returns (sqrt(r1), sqrt(r2)) with r1 = 1 - sqrt(1+4h), r2 = 1 + sqrt(1+4h).
    """
    if h < H_CENTER or h > H_SADDLE:
        raise DomainError(f"h={h} outside [-1/4, 0]")
    disc = math.sqrt(max(1.0 + 4.0 * h, 0.0))
    r1 = max(1.0 - disc, 0.0)
    r2 = 1.0 + disc
    return math.sqrt(r1), math.sqrt(r2)


def oval_x_range(spec: OvalSpec):
    """Closed-form x-extent of the oval (quadratic in x^2, no root finder)."""
    x1, x2 = branch_roots(spec.h)
    if spec.annulus is Annulus.RIGHT:
        return x1, x2
    return -x2, -x1


_RADICAND_CLAMP = 1e-14


def oval_height(x, spec: OvalSpec):
    """Nonnegative branch y+(x) = sqrt(2h + x^2 - x^4/2) on the oval."""
    rad = 2.0 * spec.h + x * x - 0.5 * x**4
    if rad < 0.0:
        if rad < -_RADICAND_CLAMP:
            raise DomainError(
                f"x={x} outside the oval at h={spec.h} (radicand {rad})")
        rad = 0.0
    return math.sqrt(rad)


def vector_field(x, y, p: PerturbationCoeffs, eps: float):
    """(dx/dt, dy/dt) = (y + eps f, x - x^3 + eps g) of the perturbed system."""
    av, bv = p.packed()
    return kernels.vf_rhs(float(x), float(y), av, bv, float(eps))

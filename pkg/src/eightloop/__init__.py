"""Numerical toolkit for cubic perturbations of the figure-eight Hamiltonian.

The unperturbed system is Hamiltonian with H = y^2/2 - x^2/2 + x^4/4: a
saddle at the origin whose level set is a figure-eight enclosing two
centers at (+-1, 0).  The modules cross-validate, by independent numerical
routes, everything needed to count the limit cycles that a small cubic
perturbation bifurcates from the two period annuli:

- hamiltonian: geometry of the ovals and the perturbation coefficients
- kernels / _kernels: compiled or pure-Python hot loops
- quadrature: cycle integrals I_k(h) and general one-forms over the ovals
- picard_fuchs: derivative chains and exact series at the interval ends
- melnikov: displacement-map envelopes of orders 1..4, vanishing strata,
  Darboux integrals, and the small-amplitude constructions
- riccati: ratio separatrices whose geometry bounds the zero counts
- zeros: zero counting, distributions, and distribution search
- simulator: direct-integration oracle for all of the above
- identities: the fifteen on-cycle reduction identities
- cli: command-line driver
"""

__version__ = "0.1.0"

from .hamiltonian import Annulus, OvalSpec, PerturbationCoeffs  # noqa: F401

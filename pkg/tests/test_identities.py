"""The fifteen on-cycle integral identities, verified by quadrature."""

import numpy as np
import pytest

from eightloop import identities as idn
from eightloop.hamiltonian import OvalSpec
from eightloop.quadrature import basic_integral, general_integral


def test_id_list_has_fifteen_entries():
    assert len(idn.IDENTITY_IDS) == 15
    assert len(set(idn.IDENTITY_IDS)) == 15


def test_all_identities_hold_on_grid():
    table = idn.verify_all()
    assert set(table) == set(idn.IDENTITY_IDS)
    for ident, res in table.items():
        assert res <= 1e-8, ident


def test_unknown_identity_rejected():
    with pytest.raises(ValueError, match="unknown identity"):
        idn.verify_identity("X-9", OvalSpec(-0.1))


def test_cubic_reduction_concrete():
    # y^3 moment against its basic-integral reduction at a single level
    spec = OvalSpec(-0.1)
    lhs = general_integral(0, 3, spec).value
    i0 = basic_integral(0, spec).value
    i2 = basic_integral(2, spec).value
    assert lhs == pytest.approx(3.0 / 7.0 * i2 - 12.0 / 7.0 * 0.1 * i0,
                                abs=1e-10)
    assert idn.verify_identity("I-1", spec) <= 1e-10


def test_even_power_identities_are_exact_zeros():
    # even-in-y moments vanish by parity before any quadrature happens
    spec = OvalSpec(-0.15)
    for ident in ("II-1", "II-2", "III-1", "III-2", "III-3", "III-4"):
        assert idn.verify_identity(ident, spec) == 0.0


def test_weighted_family_depends_only_through_even_moments():
    # residual stays tiny across (lam, mu), including the degenerate axes
    spec = OvalSpec(-0.08)
    for lam, mu in [(1.0, 0.0), (0.0, 1.0), (1.5, -2.0)]:
        for ident in ("IV-1", "IV-2", "IV-3"):
            assert idn.verify_identity(ident, spec, lam, mu) <= 1e-10


def test_residuals_uniform_near_both_endpoints():
    for h in (-0.2499, -0.0001):
        spec = OvalSpec(h)
        for ident in idn.IDENTITY_IDS:
            assert idn.verify_identity(ident, spec) <= 1e-8, (ident, h)

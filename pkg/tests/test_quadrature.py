"""Cycle integrals: anchors, symmetries, exactness, and the one-form engine."""

import math

import numpy as np
import pytest

from eightloop import picard_fuchs as pf
from eightloop import quadrature as qd
from eightloop.hamiltonian import Annulus, OvalSpec

C1 = math.pi * math.sqrt(2.0)


def test_anchor_values_at_saddle_level():
    assert qd.basic_integral(0, OvalSpec(0.0)).value \
        == pytest.approx(4.0 / 3.0, abs=1e-10)
    assert qd.basic_integral(2, OvalSpec(0.0)).value \
        == pytest.approx(16.0 / 15.0, abs=1e-10)


def test_i1_exactly_linear():
    for h in np.linspace(-0.249, -0.001, 50):
        got = qd.basic_integral(1, OvalSpec(h)).value
        assert got == pytest.approx(C1 * (h + 0.25), abs=1e-9)


def test_left_right_parity():
    for h in (-0.2, -0.1, -0.03):
        for k in range(5):
            right = qd.basic_integral(k, OvalSpec(h)).value
            left = qd.basic_integral(k, OvalSpec(h, Annulus.LEFT)).value
            assert left == pytest.approx((-1.0) ** k * right, abs=1e-10)


def test_positivity_of_integrals_and_derivatives():
    for h in np.linspace(-0.24, -0.01, 50):
        for k in range(5):
            assert qd.basic_integral(k, OvalSpec(h)).value > 0
        d = pf.derivatives_via_pf(h, 1)
        assert d[1][0] > 0 and d[1][1] > 0


def test_general_integral_even_l_exact_zero():
    v = qd.general_integral(3, 2, OvalSpec(-0.1))
    assert v.value == 0.0 and v.est_error == 0.0


def test_general_integral_l1_matches_basic():
    for k in (0, 1, 2):
        a = qd.general_integral(k, 1, OvalSpec(-0.07)).value
        b = qd.basic_integral(k, OvalSpec(-0.07)).value
        assert a == pytest.approx(b, rel=1e-11)


def test_general_integral_ii5_reduction():
    # moment (1,3) against its basic-integral reduction
    for h in (-0.2, -0.1, -0.05):
        lhs = qd.general_integral(1, 3, OvalSpec(h)).value
        i1 = qd.basic_integral(1, OvalSpec(h)).value
        assert lhs == pytest.approx(0.375 * (1.0 + 4.0 * h) * i1, abs=1e-10)


def test_cycle_integral_of_exact_forms_vanishes(rng):
    spec = OvalSpec(-0.12)
    for _ in range(20):
        F = rng.normal(size=(4, 4))
        form = qd.OneForm.differential_of(F)
        assert abs(qd.cycle_integral(form, spec).value) <= 1e-9


def test_cycle_integral_examples():
    # y dx recovers I0; x^2 part of dy recovers nothing extra
    form = qd.OneForm(P=qd.poly_from_terms({(0, 1): 1.0}))
    assert qd.cycle_integral(form, OvalSpec(0.0)).value \
        == pytest.approx(4.0 / 3.0, abs=1e-9)
    exact = qd.OneForm(P=qd.poly_from_terms({(1, 1): 2.0}),
                       Q=qd.poly_from_terms({(2, 0): 1.0}))
    assert abs(qd.cycle_integral(exact, OvalSpec(-0.1)).value) <= 1e-10


def test_cycle_integral_pfaffian_a10():
    from eightloop.hamiltonian import PerturbationCoeffs

    p = PerturbationCoeffs.from_dict({"a10": 1.0})
    form = qd.OneForm.pfaffian(p)
    got = qd.cycle_integral(form, OvalSpec(-0.1)).value
    assert got == pytest.approx(qd.basic_integral(0, OvalSpec(-0.1)).value,
                                rel=1e-10)


def test_poly_helpers(rng):
    a = rng.normal(size=(3, 2))
    b = rng.normal(size=(2, 3))
    x, y = 0.6, -0.8
    assert qd.poly_eval(qd.poly_mul(a, b), x, y) \
        == pytest.approx(qd.poly_eval(a, x, y) * qd.poly_eval(b, x, y),
                         rel=1e-12)
    # differentiation against a finite difference
    d = 1e-6
    fx = (qd.poly_eval(a, x + d, y) - qd.poly_eval(a, x - d, y)) / (2 * d)
    assert qd.poly_eval(qd.poly_diff_x(a), x, y) == pytest.approx(fx, rel=1e-8)
    fy = (qd.poly_eval(a, x, y + d) - qd.poly_eval(a, x, y - d)) / (2 * d)
    assert qd.poly_eval(qd.poly_diff_y(a), x, y) == pytest.approx(fy, rel=1e-8)


def test_near_center_switch_continuity():
    # values straddling the series/quadrature handover must agree
    for s in (0.5e-4, 0.9e-4, 1.1e-4, 2e-4):
        h = -0.25 + s
        i0 = qd.basic_integral(0, OvalSpec(h)).value
        series = pf.basic_integral_series(0, OvalSpec(h))
        assert i0 == pytest.approx(series, rel=1e-9)


def test_oneform_validation():
    with pytest.raises(ValueError):
        qd.OneForm(P=np.zeros((12, 12)))
    with pytest.raises(ValueError):
        qd.OneForm(P=np.array([[np.inf]]))


def test_default_table_consistency():
    table = qd.default_table()
    coeffs = np.array([1.0, 0.5, -2.0, 0.25, 3.0, -1.0])
    rows = table.envelope_values(coeffs)
    i = np.searchsorted(table.h, -0.1)
    h = table.h[i]
    from eightloop.melnikov import Envelope, evaluate_envelope

    e = Envelope(*coeffs)
    direct = evaluate_envelope(e, OvalSpec(h))
    assert rows[0][i] == pytest.approx(direct, rel=1e-9)

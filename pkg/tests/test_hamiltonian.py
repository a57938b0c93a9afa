"""Geometry layer: Hamiltonian symmetries, oval extents, coefficient packing."""

import math

import numpy as np
import pytest

from eightloop.hamiltonian import (Annulus, DomainError, OvalSpec,
                                   PerturbationCoeffs, branch_roots,
                                   hamiltonian_value, oval_height,
                                   oval_x_range, vector_field)


def test_hamiltonian_symmetries(rng):
    pts = rng.uniform(-2, 2, size=(50, 2))
    for x, y in pts:
        h = hamiltonian_value(x, y)
        assert hamiltonian_value(-x, -y) == pytest.approx(h, abs=1e-14)
        assert hamiltonian_value(x, -y) == pytest.approx(h, abs=1e-14)


def test_critical_values():
    assert hamiltonian_value(0.0, 0.0) == 0.0
    assert hamiltonian_value(1.0, 0.0) == -0.25
    assert hamiltonian_value(-1.0, 0.0) == -0.25


def test_branch_roots_satisfy_radicand():
    for h in np.linspace(-0.24, -0.01, 20):
        x1, x2 = branch_roots(h)
        for x in (x1, x2):
            assert 2 * h + x * x - 0.5 * x**4 == pytest.approx(0.0, abs=1e-13)
    assert branch_roots(-0.25) == (1.0, 1.0)
    x1, x2 = branch_roots(0.0)
    assert x1 == 0.0
    assert x2 == pytest.approx(math.sqrt(2.0))
    with pytest.raises(DomainError):
        branch_roots(0.1)


def test_oval_x_range_left_is_mirror():
    for h in (-0.2, -0.1, -0.02):
        rlo, rhi = oval_x_range(OvalSpec(h))
        llo, lhi = oval_x_range(OvalSpec(h, Annulus.LEFT))
        assert (llo, lhi) == (-rhi, -rlo)
        assert 0 < rlo < 1 < rhi


def test_oval_height_endpoints_and_interior():
    for h in np.linspace(-0.24, -0.01, 15):
        spec = OvalSpec(h)
        x_lo, x_hi = oval_x_range(spec)
        # roots are exact to ~1e-16 in x; the height scales as the square
        # root of the residual there, so ~1e-8 is the attainable floor
        assert oval_height(x_lo, spec) <= 1e-7
        assert oval_height(x_hi, spec) <= 1e-7
        assert oval_height(1.0, spec) > 0
    assert oval_height(1.0, OvalSpec(0.0)) == pytest.approx(math.sqrt(0.5))
    assert oval_height(math.sqrt(0.5), OvalSpec(-3.0 / 16.0)) \
        == pytest.approx(0.0, abs=1e-7)
    with pytest.raises(DomainError):
        oval_height(0.1, OvalSpec(-0.2))


def test_ovalspec_domain_and_s():
    with pytest.raises(DomainError):
        OvalSpec(-0.3)
    with pytest.raises(DomainError):
        OvalSpec(0.1)
    assert OvalSpec(-0.1).s == pytest.approx(0.15)


def test_coeffs_roundtrip_and_validation():
    p = PerturbationCoeffs.from_dict({"a10": 1.5, "b02": -2.0, "a03": 0.25})
    assert p.to_dict() == {"a10": 1.5, "b02": -2.0, "a03": 0.25}
    with pytest.raises(KeyError):
        PerturbationCoeffs.from_dict({"c10": 1.0})
    with pytest.raises(KeyError):
        PerturbationCoeffs.from_dict({"a40": 1.0})
    with pytest.raises(KeyError):
        PerturbationCoeffs.from_dict({"a22": 1.0})


def test_lam_mu_combinations():
    p = PerturbationCoeffs.from_dict({"a11": 3.0, "b02": 1.0,
                                      "a21": 0.5, "b12": -2.0})
    assert p.lam == pytest.approx(2.5)
    assert p.mu == pytest.approx(-1.5)


def test_packed_matches_polynomial_eval(rng):
    vals = rng.normal(size=20)
    keys = ["a00", "a10", "a20", "a30", "a01", "a11", "a21", "a02", "a12",
            "a03", "b00", "b10", "b20", "b30", "b01", "b11", "b21", "b02",
            "b12", "b03"]
    p = PerturbationCoeffs.from_dict(dict(zip(keys, vals)))
    x, y = 0.7, -1.3
    f_direct = sum(p.a[i, j] * x**i * y**j
                   for i in range(4) for j in range(4) if i + j <= 3)
    g_direct = sum(p.b[i, j] * x**i * y**j
                   for i in range(4) for j in range(4) if i + j <= 3)
    assert p.f(x, y) == pytest.approx(f_direct, rel=1e-13)
    assert p.g(x, y) == pytest.approx(g_direct, rel=1e-13)


def test_conjugated_flips_even_degree(rng):
    p = PerturbationCoeffs.from_dict({"a00": 1.0, "a10": 2.0, "a11": 3.0,
                                      "b30": 4.0, "b02": 5.0})
    q = p.conjugated()
    # f(-x,-y) = -f_conj(x,y) termwise: even-degree terms flip sign
    x, y = 0.4, 0.9
    assert q.f(x, y) == pytest.approx(-p.f(-x, -y), rel=1e-13)
    assert q.g(x, y) == pytest.approx(-p.g(-x, -y), rel=1e-13)
    assert q.conjugated().a == pytest.approx(p.a)


def test_vector_field_examples():
    p0 = PerturbationCoeffs()
    assert vector_field(1.0, 0.0, p0, 0.0) == (0.0, 0.0)
    dx, dy = vector_field(math.sqrt(2.0), 0.0, p0, 0.0)
    assert dx == 0.0
    assert dy == pytest.approx(-math.sqrt(2.0))
    pa = PerturbationCoeffs.from_dict({"a00": 1.0})
    assert vector_field(0.0, 1.0, pa, 0.1) == (pytest.approx(1.1), 0.0)

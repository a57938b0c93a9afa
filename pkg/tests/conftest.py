"""Shared fixtures; the expensive simulator scans are session-cached."""

import numpy as np
import pytest

from eightloop import melnikov as mk
from eightloop import simulator as sim
from eightloop.hamiltonian import Annulus


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240824)


@pytest.fixture(scope="session")
def theorem4_cycle_counts():
    """Simulator-confirmed (right, left) cycle counts per construction.

    Each construction takes minutes of orbit integration, so the scans run
    once per session and are shared by every test that needs them.
    """
    out = {}
    for target in ("FiveZero", "FourOne", "ThreeThree"):
        env, _ = mk.derive_delta_ladder(target)
        p = mk.realize_m2(env)
        nr = sim.find_limit_cycles(p, eps=1e-3, annulus=Annulus.RIGHT)
        nl = sim.find_limit_cycles(p, eps=1e-3, annulus=Annulus.LEFT)
        out[target] = (nr, nl)
    return out

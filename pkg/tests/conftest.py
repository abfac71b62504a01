"""Shared fixtures: the standard potentials used across the suite."""

import numpy as np
import pytest

import sturmspec as ss


@pytest.fixture(scope="session")
def q_zero():
    return ss.make_potential({"kind": "const", "params": {"c": 0.0}}, nodes=16)


@pytest.fixture(scope="session")
def q_five():
    return ss.make_potential({"kind": "const", "params": {"c": 5.0}}, nodes=16)


@pytest.fixture(scope="session")
def q_cos2():
    """cos(2 pi x): symmetric about 1/2, opens the lowest spectral gaps."""
    return ss.make_potential(
        {"kind": "trig", "params": {"terms": [{"fn": "cos", "amplitude": 1.0, "frequency": 1.0}]}},
        nodes=1000,
    )


@pytest.fixture(scope="session")
def q_cos4():
    """cos(4 pi x): symmetric about 1/2 and about 1/4 on the half interval."""
    return ss.make_potential(
        {"kind": "trig", "params": {"terms": [{"fn": "cos", "amplitude": 1.0, "frequency": 2.0}]}},
        nodes=1000,
    )


@pytest.fixture(scope="session")
def q_linear():
    """q(x) = x: the simplest asymmetric witness."""
    return ss.make_potential({"kind": "poly", "params": {"coeffs": [0.0, 1.0]}}, nodes=1000)


@pytest.fixture(scope="session")
def q_bump():
    """3x(1-x): a symmetric, non-constant polynomial."""
    return ss.make_potential({"kind": "poly", "params": {"coeffs": [0.0, 3.0, -3.0]}}, nodes=1000)


@pytest.fixture(scope="session")
def q_exp():
    """exp(x): asymmetric with a jump in its periodic extension."""
    return ss.from_callable(np.exp, nodes=1000, label="exp(x)")


@pytest.fixture(scope="session")
def q_bb():
    """Constructed so its even part equals the squared integral of its odd
    part: Dirichlet and Neumann spectra coincide except at zero."""
    return ss.make_potential(
        {"kind": "bb", "params": {"q2": {"kind": "poly", "params": {"coeffs": [-2.0, 4.0]}}}},
        nodes=4000,
    )

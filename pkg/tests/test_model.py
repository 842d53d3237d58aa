import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hcbchain import oracle
from hcbchain.errors import InvalidInputError
from hcbchain.model import ModelParams, ThermalParams, dispersion, spin_hamiltonian_description


def test_params_validation():
    with pytest.raises(InvalidInputError):
        ModelParams(0.0, 0.1, 4)
    with pytest.raises(InvalidInputError):
        ModelParams(1.0, 0.1, 1)
    with pytest.raises(InvalidInputError):
        ModelParams(1.0, 0.1, 3.5)
    with pytest.raises(InvalidInputError):
        ThermalParams(-0.1)
    assert ThermalParams(0.0).is_ground


@pytest.mark.parametrize(
    "w,mu,L,k,expected",
    [(1, 0, 4, 4, -2.0), (1, 0.2, 4, 2, 1.8), (1, 0.3, 4, 1, -0.3)],
)
def test_dispersion_examples(w, mu, L, k, expected):
    assert math.isclose(dispersion(ModelParams(w, mu, L), k), expected, abs_tol=1e-15)


def test_dispersion_range():
    p = ModelParams(1, 0, 4)
    for k in (0, 5):
        with pytest.raises(InvalidInputError):
            dispersion(p, k)


@given(
    w=st.floats(0.1, 5),
    mu=st.floats(-5, 5),
    L=st.integers(2, 64),
)
def test_dispersion_sum_and_symmetry(w, mu, L):
    p = ModelParams(w, mu, L)
    eps = [dispersion(p, k) for k in range(1, L + 1)]
    assert abs(sum(eps) + L * mu) <= 1e-12 * L * (w + abs(mu) + 1)
    for k in range(1, L):
        assert abs(eps[k - 1] - eps[L - k - 1]) <= 1e-12 * (w + abs(mu) + 1)


def test_description_examples():
    t = spin_hamiltonian_description(ModelParams(1, 0, 2))
    assert t.bonds == ((1, 2, -1.0),)
    assert all(c == 0 for _, c in t.fields)
    t = spin_hamiltonian_description(ModelParams(1, 0.4, 3))
    assert [c for *_, c in t.bonds] == [-0.5] * 3
    assert [(i, j) for i, j, _ in t.bonds] == [(1, 2), (2, 3), (3, 1)]
    assert [c for _, c in t.fields] == pytest.approx([0.2] * 3)
    t = spin_hamiltonian_description(ModelParams(2, -1, 4))
    assert [c for *_, c in t.bonds] == [-1.0] * 4
    assert [c for _, c in t.fields] == [-0.5] * 4
    assert t.constant == 2.0


@pytest.mark.parametrize("L", [2, 3, 4])
@pytest.mark.parametrize("w,mu", [(1.0, 0.0), (1.0, 0.7), (0.6, -1.3)])
def test_spin_form_equals_hardcore_bosons(L, w, mu):
    p = ModelParams(w, mu, L)
    spin = oracle.build_hamiltonian(p) + spin_hamiltonian_description(p).constant * np.eye(1 << L)
    boson = oracle.build_hardcore_boson_hamiltonian(p)
    assert np.max(np.abs(spin - boson)) <= 1e-12

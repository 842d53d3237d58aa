import math

import numpy as np
import pytest

from hcbchain import freefermion as ff
from hcbchain import oracle
from hcbchain.errors import InvalidInputError
from hcbchain.model import ModelParams

# exact diagonalisation at w=1, mu=0.2, T=0.5, L=8 (independent kron-built ED)
ED_L8 = {
    "M": -0.06985926318186364,
    "Kxx1": 0.5698855082270293,
    "Kxx2": 0.3473463171556377,
    "Kzz1": -0.3066000127187902,
    "Kzz2": 0.0032785907689609345,
}
# periodic-grid closed form at the same point (plain loops over q below)
CYCLIC_L8 = {
    "M": -0.07442129503429448,
    "Kxx1": 0.5517495494145838,
    "Kxx2": 0.3078306047969976,
    "Kzz1": -0.2988890361246147,
    "Kzz2": 0.0034475989389052787,
}

REF = ModelParams(1.0, 0.2, 8)


def loop_g(params, T, r):
    total = 0.0
    for q in range(1, params.L + 1):
        eps = -2 * params.w * math.cos(2 * math.pi * q / params.L) - params.mu
        total += math.cos(2 * math.pi * q * r / params.L) * math.tanh(eps / (2 * T))
    return -total / params.L


def test_frozen_cyclic_values_from_loops():
    G = [loop_g(REF, 0.5, r) for r in range(3)]
    M = -G[0]
    assert math.isclose(M, CYCLIC_L8["M"], abs_tol=1e-14)
    assert math.isclose(G[1], CYCLIC_L8["Kxx1"], abs_tol=1e-14)
    assert math.isclose(G[1] ** 2 - G[0] * G[2], CYCLIC_L8["Kxx2"], abs_tol=1e-14)
    assert math.isclose(M * M - G[1] ** 2, CYCLIC_L8["Kzz1"], abs_tol=1e-14)
    assert math.isclose(M * M - G[2] ** 2, CYCLIC_L8["Kzz2"], abs_tol=1e-14)


def test_correlator_set_matches_frozen_values():
    c = ff.correlator_set(REF, 0.5, 2)
    got = {"M": c.M, "Kxx1": c.Kxx[1], "Kxx2": c.Kxx[2], "Kzz1": c.Kzz[1], "Kzz2": c.Kzz[2]}
    for k, v in CYCLIC_L8.items():
        assert abs(got[k] - v) <= 1e-13, k
    assert c.Kyy == c.Kxx


def test_frozen_oracle_values(thermal_rho):
    rho = thermal_rho(8)
    assert abs(oracle.magnetization(rho) - ED_L8["M"]) <= 1e-12
    for r in (1, 2):
        assert abs(oracle.correlator(rho, "x", 1, 1 + r) - ED_L8[f"Kxx{r}"]) <= 1e-12
        assert abs(oracle.correlator(rho, "y", 3, 3 + r) - ED_L8[f"Kxx{r}"]) <= 1e-12
        assert abs(oracle.correlator(rho, "z", 1, 1 + r) - ED_L8[f"Kzz{r}"]) <= 1e-12


@pytest.mark.parametrize("L", [4, 6, 8])
@pytest.mark.parametrize("mu,T", [(0.2, 0.5), (-0.7, 0.3), (1.4, 1.0)])
def test_parity_projection_reproduces_oracle(L, mu, T, thermal_rho):
    # confirms the Toeplitz and Wick structure: only the boundary term is missing
    p = ModelParams(1.0, mu, L)
    rho = thermal_rho(L, mu, T)
    c = ff.parity_projected_correlators(p, T, 2)
    assert abs(c.M - oracle.magnetization(rho)) <= 1e-12
    for r in (1, 2):
        assert abs(c.Kxx[r] - oracle.correlator(rho, "x", 1, 1 + r)) <= 1e-12
        assert abs(c.Kzz[r] - oracle.correlator(rho, "z", 1, 1 + r)) <= 1e-12


def test_cyclic_error_is_a_boundary_effect():
    # the periodic-grid result approaches the exact one as L grows
    errs = []
    for L in (8, 16, 32):
        p = ModelParams(1.0, 0.2, L)
        a, b = ff.correlator_set(p, 0.5, 2), ff.parity_projected_correlators(p, 0.5, 2)
        errs.append(max(abs(a.Kxx[2] - b.Kxx[2]), abs(a.M - b.M)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-5


def test_thermal_magnetization_examples():
    for L in (4, 8, 10):
        for T in (0.1, 0.5, 3.0):
            assert abs(ff.thermal_magnetization(ModelParams(1.3, 0.0, L), T)) <= 1e-15
    assert abs(ff.thermal_magnetization(ModelParams(1, 0.7, 12), 1e6)) < 1e-5
    with pytest.raises(InvalidInputError):
        ff.thermal_magnetization(REF, 0)


# points where the periodic grid is the right parity sector for the ground state
@pytest.mark.parametrize(
    "L,mu,expected",
    [(4, -1.5, 0.5), (4, 1.0, -0.5), (5, 0.5, -0.2), (6, 1.0, -1 / 3), (6, -1.5, 2 / 3),
     (7, -0.5, 1 / 7), (8, 0.5, -0.25), (8, 2.5, -1.0)],
)
def test_low_temperature_sign_matches_oracle_ground_state(L, mu, expected):
    p = ModelParams(1.0, mu, L)
    M0 = oracle.magnetization(oracle.density_matrix(p, 0))
    assert abs(M0 - expected) <= 1e-10
    assert abs(ff.thermal_magnetization(p, 1e-3) - M0) <= 1e-9
    assert abs(ff.correlator_set(p, 0, 1).M - M0) <= 1e-12


def test_zero_temperature_zero_mode():
    # mu=0, L=4 has eps=0 at q=1,3: sign(0)=0 keeps M at zero
    c = ff.correlator_set(ModelParams(1, 0, 4), 0, 1)
    assert c.M == 0.0


def test_ground_magnetization():
    assert ff.ground_magnetization(1, 0) == 0
    assert ff.ground_magnetization(1, 2) == -1
    assert ff.ground_magnetization(1, -2) == 1
    assert ff.ground_magnetization(1, 5) == -1
    assert math.isclose(ff.ground_magnetization(1, 1), -1 / 3, abs_tol=1e-15)
    assert math.isclose(ff.ground_magnetization(2, 2), -1 / 3, abs_tol=1e-15)
    assert abs(ff.ground_magnetization(1, 2 - 1e-12) + 1) < 1e-5
    with pytest.raises(InvalidInputError):
        ff.ground_magnetization(0, 0)


def test_ground_magnetization_is_large_l_limit():
    p = ModelParams(1.0, 0.9, 4001)
    assert abs(ff.correlator_set(p, 0, 1).M - ff.ground_magnetization(1.0, 0.9)) < 1e-3


def test_g_function():
    p = ModelParams(1, 0.35, 10)
    assert math.isclose(ff.g_function(p, 0.4, 0), -ff.thermal_magnetization(p, 0.4), abs_tol=1e-15)
    for r in range(5):
        assert abs(ff.g_function(p, 1e6, r)) < 1e-5
        assert math.isclose(ff.g_function(p, 0.4, r), loop_g(p, 0.4, r), abs_tol=1e-14)
    with pytest.raises(InvalidInputError):
        ff.g_function(p, 0.4, 10)
    with pytest.raises(InvalidInputError):
        ff.g_function(p, 0.0, 1)


def test_g_vector_symmetry_and_bounds():
    g = ff.g_vector(ModelParams(1, -0.4, 50), 0.2, 10)
    for r in range(11):
        assert g[r] == g[-r]
        assert abs(g[r]) <= 1
    with pytest.raises(InvalidInputError):
        g[11]


def test_kxx_small_determinants():
    g = ff.g_vector(ModelParams(1, 0.3, 12), 0.4, 4)
    assert ff.kxx(g, 1) == g[1]
    assert math.isclose(ff.kxx(g, 2), g[1] ** 2 - g[0] * g[2], abs_tol=1e-15)
    # 3x3 by cofactor expansion
    a = [[g[1], g[0], g[-1]], [g[2], g[1], g[0]], [g[3], g[2], g[1]]]
    det3 = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    assert math.isclose(ff.kxx(g, 3), det3, abs_tol=1e-15)
    assert ff.kxx(g, 0) == 1.0
    with pytest.raises(InvalidInputError):
        ff.kxx(g, 5)


def test_kzz_examples():
    hot = ff.g_vector(ModelParams(1, 0.5, 8), 1e7, 3)
    assert abs(ff.kzz(hot, -hot[0], 2)) < 1e-12
    g = ff.g_vector(ModelParams(1, 0.0, 8), 0.5, 3)
    assert ff.kzz(g, 0.0, 2) == -g[2] ** 2
    assert ff.kzz(g, 0.3, 0) == 1.0


@pytest.mark.parametrize("mu", [-2.5, -1.0, 0.0, 0.2, 1.7, 3.0])
@pytest.mark.parametrize("T", [0.0, 0.05, 0.5, 5.0])
def test_correlators_bounded(mu, T):
    c = ff.correlator_set(ModelParams(1, mu, 40), T, 6)
    assert abs(c.M) <= 1
    for r in range(1, 7):
        assert abs(c.Kxx[r]) <= 1 + 1e-12
        assert abs(c.Kzz[r]) <= 1 + 1e-12


def test_correlators_smooth_in_temperature():
    p = ModelParams(1, 0.6, 200)
    temps = np.arange(0.05, 2.0, 0.01)
    rows = np.array([[c.M, c.Kxx[1], c.Kxx[2], c.Kzz[1]] for c in (ff.correlator_set(p, T, 2) for T in temps)])
    assert np.max(np.abs(np.diff(rows, axis=0))) < 0.05


def test_particle_hole_magnitude():
    for mu in (0.3, 1.1):
        a = ff.thermal_magnetization(ModelParams(1, mu, 16), 0.4)
        b = ff.thermal_magnetization(ModelParams(1, -mu, 16), 0.4)
        assert abs(a + b) <= 1e-14


def test_large_chain_is_fast():
    c = ff.correlator_set(ModelParams(1, 0.2, 10_000), 0.5, 8)
    assert len(c.Kxx) == 8

"""Brute-force exact diagonalisation of the periodic XX chain.

Everything here is dense and scales as ``4**L`` in memory; it serves as the
reference for the free-fermion formulas and is the only route to the
multipartite measure.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import InvalidInputError, ResourceLimitError
from .model import ModelParams, ring_bonds, spin_hamiltonian_description

MAX_SITES = 12
DEGENERACY_RTOL = 1e-10

# hardcore boson on one site, occupation basis (|0>, |1>)
_ANNIHILATE = np.array([[0, 1], [0, 0]], dtype=np.complex128)
_NUMBER = np.diag([0.0, 1.0]).astype(np.complex128)


def _guard(L: int) -> None:
    if L > MAX_SITES:
        raise ResourceLimitError(f"L={L} exceeds the dense limit of {MAX_SITES} sites")


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """Spin-form Hamiltonian (constant dropped) as a dense ``2**L`` matrix."""
    _guard(params.L)
    L = params.L
    terms = spin_hamiltonian_description(params)
    h = np.zeros((1 << L, 1 << L), dtype=np.complex128)
    for i, j, c in terms.bonds:
        h += c * linalg.site_operator(L, {i: "x", j: "x"})
        h += c * linalg.site_operator(L, {i: "y", j: "y"})
    for i, c in terms.fields:
        h += c * linalg.site_operator(L, {i: "z"})
    return h


def build_hardcore_boson_hamiltonian(params: ModelParams) -> np.ndarray:
    """The boson Hamiltonian in the occupation basis, constant included.

    Built from truncated boson operators rather than Pauli matrices; occupation
    ``n`` on a site is basis state ``|n>``, so it shares the spin basis.
    """
    _guard(params.L)
    L = params.L
    dim = 1 << L
    h = np.zeros((dim, dim), dtype=np.complex128)
    a_dag = _ANNIHILATE.conj().T
    for i, j, mult in ring_bonds(L):
        hop = linalg.site_operator(L, {i: a_dag, j: _ANNIHILATE})
        h += -params.w * mult * (hop + hop.conj().T)
    for i in range(1, L + 1):
        h += -params.mu * linalg.site_operator(L, {i: _NUMBER})
    return h


def total_sz(L: int) -> np.ndarray:
    _guard(L)
    return sum(linalg.site_operator(L, {i: "z"}) for i in range(1, L + 1))


def thermal_state(h, T: float) -> np.ndarray:
    """Gibbs state ``exp(-h/T)/Z``; energies are shifted by the minimum first."""
    if not T > 0:
        raise InvalidInputError(f"temperature must be > 0 (use ground_state), got {T}")
    vals, vecs = linalg.hermitian_eig(h)
    weights = np.exp(-(vals - vals.min()) / T)
    weights /= weights.sum()
    rho = (vecs * weights) @ vecs.conj().T
    return 0.5 * (rho + rho.conj().T)


def ground_state(h) -> np.ndarray:
    """Ground-state projector, or the equal mixture over a degenerate ground space."""
    vals, vecs = linalg.hermitian_eig(h)
    scale = max(float(np.max(np.abs(vals))), 1.0)
    lowest = vals.min()
    ground = vecs[:, vals - lowest <= DEGENERACY_RTOL * scale]
    rho = ground @ ground.conj().T / ground.shape[1]
    return 0.5 * (rho + rho.conj().T)


def density_matrix(params: ModelParams, T: float) -> np.ndarray:
    h = build_hamiltonian(params)
    return ground_state(h) if T == 0 else thermal_state(h, T)


def correlator(rho, axis: str, i: int, j: int) -> float:
    """``tr(rho sigma^a_i sigma^a_j)`` for distinct 1-based sites."""
    a = np.asarray(rho)
    L = linalg.num_sites(a.shape[0])
    if axis not in ("x", "y", "z"):
        raise InvalidInputError(f"axis must be x, y or z, got {axis!r}")
    if i == j or not (1 <= i <= L and 1 <= j <= L):
        raise InvalidInputError(f"need distinct sites in 1..{L}, got {i}, {j}")
    pair = linalg.partial_trace(a, L, {i, j})
    s = linalg.PAULI[axis]
    val = np.trace(pair @ np.kron(s, s))
    if abs(val.imag) > 1e-12:
        raise InvalidInputError(f"correlator has imaginary part {val.imag:.3e}")
    return float(val.real)


def site_magnetizations(rho) -> np.ndarray:
    a = np.asarray(rho)
    L = linalg.num_sites(a.shape[0])
    z = linalg.PAULI["z"]
    return np.array([np.trace(linalg.partial_trace(a, L, {i}) @ z).real for i in range(1, L + 1)])


def magnetization(rho) -> float:
    return float(np.mean(site_magnetizations(rho)))


def global_entanglement_direct(rho) -> float:
    """``2 [1 - (1/L) sum_j tr(rho_j^2)]`` from single-site reduced matrices."""
    a = np.asarray(rho)
    L = linalg.num_sites(a.shape[0])
    purity = 0.0
    for i in range(1, L + 1):
        r1 = linalg.partial_trace(a, L, {i})
        purity += np.trace(r1 @ r1).real
    return float(2.0 * (1.0 - purity / L))

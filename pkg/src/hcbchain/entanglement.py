"""Entanglement measures: global entanglement, two-site negativity and the
spin-flip multipartite measure."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import freefermion, linalg, oracle
from .errors import (
    DomainError,
    InvalidInputError,
    NotPSDError,
    UnphysicalCorrelatorsError,
    UnsupportedInputError,
)
from .model import ModelParams

PHYS_TOL = 1e-10
EIG_ZERO = 1e-12
EL_ZERO = 1e-10
ORACLE_EL_MAX_SITES = 10


def global_entanglement(M: float) -> float:
    if abs(M) > 1.0 + 1e-12:
        raise InvalidInputError(f"|M| must be <= 1, got {M}")
    return max(0.0, 1.0 - M * M)


def global_entanglement_derivative(w: float, mu: float) -> float:
    """dE/dmu of the ground state for ``|mu| < 2w``; diverges at the edges."""
    if not w > 0:
        raise InvalidInputError(f"hopping w must be > 0, got {w}")
    if abs(mu) >= 2.0 * w:
        raise DomainError(f"derivative only defined for |mu| < 2w (mu={mu}, w={w})")
    root = math.sqrt(4.0 * w * w - mu * mu)
    return 4.0 / (math.pi**2 * root) * (2.0 * math.acos(mu / (2.0 * w)) - math.pi)


@dataclass(frozen=True)
class TwoSiteState:
    """X-shaped two-site density matrix in the basis |00>, |01>, |10>, |11>.

    ``p`` is the shared middle diagonal entry, ``t`` the |01><10| coherence.
    """

    u: float
    v: float
    p: float
    t: float

    def __post_init__(self):
        lo = -PHYS_TOL
        if self.u < lo or self.v < lo or self.p < lo:
            raise UnphysicalCorrelatorsError(f"negative population in {self}")
        if abs(self.t) > self.p + PHYS_TOL:
            raise UnphysicalCorrelatorsError(f"|t| exceeds p in {self}")
        if abs(self.u + self.v + 2.0 * self.p - 1.0) > PHYS_TOL:
            raise UnphysicalCorrelatorsError(f"trace differs from 1 in {self}")

    def matrix(self) -> np.ndarray:
        u, v, p, t = self.u, self.v, self.p, self.t
        return np.array(
            [[u, 0, 0, 0], [0, p, t, 0], [0, t, p, 0], [0, 0, 0, v]], dtype=np.complex128
        )


def two_site_rho(M: float, Kxx: float, Kzz: float) -> TwoSiteState:
    return TwoSiteState(
        u=(Kzz + 2.0 * M + 1.0) / 4.0,
        v=(Kzz - 2.0 * M + 1.0) / 4.0,
        p=(1.0 - Kzz) / 4.0,
        t=Kxx / 2.0,
    )


def negativity_xstate(s: TwoSiteState) -> float:
    """Closed-form negativity; zero unless ``t**2 > u*v``."""
    return max(0.0, math.sqrt((s.u - s.v) ** 2 + 4.0 * s.t * s.t) - (s.u + s.v))


def negativity_general(rho, total_sites: int, transpose_set) -> float:
    """Twice the magnitude of the negative spectrum of the partial transpose."""
    a = linalg.check_density_matrix(rho)
    pt = linalg.partial_transpose(a, total_sites, transpose_set)
    vals = linalg.hermitian_eigvals(pt)
    neg = vals[vals < -EIG_ZERO]
    return float(2.0 * abs(neg.sum()))


def _flip_sign(dim: int) -> np.ndarray:
    """``(-1)**popcount(~b)`` for every basis index ``b``."""
    idx = np.arange(dim)[::-1]
    parity = np.array([bin(int(b)).count("1") & 1 for b in idx])
    return 1.0 - 2.0 * parity


def spin_flip(rho) -> np.ndarray:
    """``Y^{(x)L} conj(rho) Y^{(x)L}``: the state conjugated by time reversal.

    ``Y^{(x)L} |b> = i^L (-1)^{|b|} |~b>``, so the flip reverses both indices
    and applies the popcount sign twice; the ``i^L`` phases cancel.
    """
    a = np.asarray(rho)
    linalg.num_sites(a.shape[0])
    sign = _flip_sign(a.shape[0])
    return np.outer(sign, sign) * a.conj()[::-1, ::-1]


def spin_flip_spectrum(rho, method: str = "svd") -> np.ndarray:
    """Decreasing ``nu_j``, the eigenvalue moduli of ``sqrt(rho U rho U^-1)``.

    ``nu_j**2`` are the eigenvalues of ``sqrt(rho) rho~ sqrt(rho)``.  The
    default route takes them as singular values of ``sqrt(rho) sqrt(rho~)``
    restricted to the numerical support of ``rho``, which avoids turning
    round-off eigenvalues near zero into ``sqrt(eps)``-sized ``nu_j``.
    ``method="hermitian"`` diagonalises ``sqrt(rho) rho~ sqrt(rho)`` directly.
    """
    a = np.asarray(rho)
    if method == "hermitian":
        root = linalg.psd_sqrt(a)
        r = root @ spin_flip(a) @ root
        vals = linalg.hermitian_eigvals(0.5 * (r + r.conj().T))
        return np.sqrt(np.clip(vals, 0.0, None))
    if method != "svd":
        raise InvalidInputError(f"unknown method {method!r}")
    lam, vecs = linalg.hermitian_eig(a)
    if lam[-1] < -linalg.PSD_CLAMP:
        raise NotPSDError(f"minimum eigenvalue {lam[-1]:.3e} below -{linalg.PSD_CLAMP:g}")
    floor = a.shape[0] * np.finfo(float).eps * max(lam[0], 0.0)
    keep = lam > floor
    lam, vecs = lam[keep], vecs[:, keep]
    flipped = _flip_sign(a.shape[0])[:, np.newaxis] * vecs.conj()[::-1, :]
    half = np.sqrt(lam)
    core = half[:, np.newaxis] * (vecs.conj().T @ flipped) * half[np.newaxis, :]
    nu = np.linalg.svd(core, compute_uv=False)
    return np.concatenate([nu, np.zeros(a.shape[0] - nu.size)])


def multipartite_measure(rho, L: int) -> float:
    if L % 2:
        raise UnsupportedInputError(f"multipartite measure needs an even number of sites, got {L}")
    a = linalg.check_density_matrix(rho)
    if a.shape[0] != 1 << L:
        raise InvalidInputError(f"matrix of dim {a.shape[0]} does not describe {L} sites")
    nu = spin_flip_spectrum(a)
    val = nu[0] - nu[1:].sum()
    return float(val) if val > EL_ZERO else 0.0


def thermal_negativity(params: ModelParams, T: float, r: int) -> float:
    """Two-site negativity at separation ``r`` from the free-fermion correlators."""
    c = freefermion.correlator_set(params, T, r)
    return negativity_xstate(two_site_rho(c.M, c.Kxx[r], c.Kzz[r]))


def thermal_multipartite(params: ModelParams, T: float) -> float:
    return multipartite_measure(oracle.density_matrix(params, T), params.L)


@dataclass(frozen=True)
class EntanglementReport:
    """All measures at one parameter point.

    ``E`` and ``dE_dmu`` are infinite-chain ground-state values; ``dE_dmu`` is
    ``None`` exactly at the transition.  ``E_L`` is ``None`` when the oracle
    route is unavailable (odd or large L).
    """

    E: float
    dE_dmu: Optional[float]
    N: float
    E_L: Optional[float]


def entanglement_report(params: ModelParams, T: float, r: int = 1) -> EntanglementReport:
    w, mu = params.w, params.mu
    E = global_entanglement(freefermion.ground_magnetization(w, mu))
    if abs(abs(mu) - 2.0 * w) <= 1e-9:
        dE = None
    elif abs(mu) > 2.0 * w:
        dE = 0.0
    else:
        dE = global_entanglement_derivative(w, mu)
    N = thermal_negativity(params, T, r)
    E_L = None
    if params.L % 2 == 0 and params.L <= ORACLE_EL_MAX_SITES:
        E_L = thermal_multipartite(params, T)
    return EntanglementReport(E=E, dE_dmu=dE, N=N, E_L=E_L)

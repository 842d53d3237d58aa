"""Chain parameters and the hardcore-boson to spin-1/2 XX mapping.

With occupation ``n_i`` and ``sigma^z_i = 1 - 2 n_i`` the hardcore-boson
chain

    H = -w sum_<ij> (a_i^+ a_j + h.c.) - mu sum_i n_i

becomes, up to the constant ``-mu L / 2``,

    H = -(w/2) sum_i (X_i X_{i+1} + Y_i Y_{i+1}) + (mu/2) sum_i Z_i

on a periodic ring.  An empty site is spin up (basis state ``|0>``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError


@dataclass(frozen=True)
class ModelParams:
    w: float
    mu: float
    L: int

    def __post_init__(self):
        if not self.w > 0:
            raise InvalidInputError(f"hopping w must be > 0, got {self.w}")
        if not math.isfinite(self.mu):
            raise InvalidInputError(f"chemical potential must be finite, got {self.mu}")
        if int(self.L) != self.L or self.L < 2:
            raise InvalidInputError(f"L must be an integer >= 2, got {self.L}")
        object.__setattr__(self, "L", int(self.L))

    def with_mu(self, mu: float) -> "ModelParams":
        return ModelParams(self.w, mu, self.L)

    def with_L(self, L: int) -> "ModelParams":
        return ModelParams(self.w, self.mu, L)


@dataclass(frozen=True)
class ThermalParams:
    """Temperature in energy units (k_B = 1); ``T == 0`` is the ground state."""

    T: float

    def __post_init__(self):
        if not self.T >= 0 or not math.isfinite(self.T):
            raise InvalidInputError(f"temperature must be finite and >= 0, got {self.T}")

    @property
    def is_ground(self) -> bool:
        return self.T == 0


@dataclass(frozen=True)
class HamiltonianTerms:
    """Pauli-string coefficients of the spin form of the chain.

    ``bonds`` holds ``(i, j, c)`` meaning ``c (X_i X_j + Y_i Y_j)``;
    ``fields`` holds ``(i, c)`` meaning ``c Z_i``; sites are 1-based.
    ``constant`` is the dropped identity term.
    """

    bonds: tuple[tuple[int, int, float], ...]
    fields: tuple[tuple[int, float], ...]
    constant: float


def dispersion(params: ModelParams, k: int) -> float:
    """Single-fermion mode energy ``-2 w cos(2 pi k / L) - mu`` for ``k`` in 1..L."""
    if int(k) != k or not 1 <= k <= params.L:
        raise InvalidInputError(f"mode index {k} outside 1..{params.L}")
    return -2.0 * params.w * math.cos(2.0 * math.pi * k / params.L) - params.mu


def ring_bonds(L: int) -> list[tuple[int, int, int]]:
    """Nearest-neighbour bonds ``(i, j, multiplicity)`` of a periodic ring.

    For ``L == 2`` the bonds 1->2 and 2->1 coincide and are emitted once with
    multiplicity 2.
    """
    if L == 2:
        return [(1, 2, 2)]
    return [(i, i % L + 1, 1) for i in range(1, L + 1)]


def spin_hamiltonian_description(params: ModelParams) -> HamiltonianTerms:
    half_w = -0.5 * params.w
    bonds = tuple((i, j, half_w * mult) for i, j, mult in ring_bonds(params.L))
    fields = tuple((i, 0.5 * params.mu) for i in range(1, params.L + 1))
    return HamiltonianTerms(bonds, fields, -0.5 * params.mu * params.L)

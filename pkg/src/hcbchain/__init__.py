"""Entanglement in the hardcore-boson Hubbard chain (spin-1/2 XX ring).

Modules: ``linalg`` (dense kernel), ``model`` (parameters and mapping),
``freefermion`` (closed-form correlators), ``oracle`` (exact
diagonalisation), ``entanglement`` (measures) and ``cli``.
"""

from .entanglement import (
    EntanglementReport,
    TwoSiteState,
    entanglement_report,
    global_entanglement,
    global_entanglement_derivative,
    multipartite_measure,
    negativity_general,
    negativity_xstate,
    two_site_rho,
)
from .errors import (
    DomainError,
    HCBError,
    InvalidInputError,
    NotPSDError,
    ResourceLimitError,
    UnphysicalCorrelatorsError,
    UnsupportedInputError,
)
from .freefermion import CorrelatorSet, correlator_set, ground_magnetization, thermal_magnetization
from .model import ModelParams, ThermalParams, dispersion, spin_hamiltonian_description

__version__ = "0.1.0"

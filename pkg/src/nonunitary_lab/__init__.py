"""Non-unitary criticality in SSH chains with PT-symmetric impurities."""

__version__ = "0.1.0"

from .model import (Boundary, ChainSpec, ImpuritySpec, SpecError, build_hamiltonian,
                    cell_index, fine_tuned_chain, impurity_chain, pt_operator)
from .eigensys import (BiorthSystem, ManyBodyState, PTPhase, classify_pt, diagonalize,
                       energy_vs_size, ground_state, solve)
from .entanglement import (CorrelationMatrix, EntropyCurve, correlation_matrix,
                           entropy_profile, subsystem_entropy)
from .scaling import FitError, FitResult, fit_energy, fit_entropy
from .fidelity import FidelityCurve, fidelity_susceptibility, gs_overlap
from .analytic import EpReport, check_ep, ep_candidate

__all__ = [
    "Boundary", "ChainSpec", "ImpuritySpec", "SpecError", "build_hamiltonian", "cell_index",
    "fine_tuned_chain", "impurity_chain", "pt_operator", "BiorthSystem", "ManyBodyState",
    "PTPhase", "classify_pt", "diagonalize", "energy_vs_size", "ground_state", "solve",
    "CorrelationMatrix", "EntropyCurve", "correlation_matrix", "entropy_profile",
    "subsystem_entropy", "FitError", "FitResult", "fit_energy", "fit_entropy",
    "FidelityCurve", "fidelity_susceptibility", "gs_overlap", "EpReport", "check_ep",
    "ep_candidate",
]

"""Number-phase complementarity of a laser-driven four-level atom."""

__version__ = "0.1.0"

from .complementarity import Mu2Result, convex_form, find_mu2, uncertainty_sum
from .knowledge import (
    KnowledgeReport,
    PhaseDistribution,
    knowledge_number,
    knowledge_phase,
    knowledge_report,
    mixedness,
    number_distribution,
    phase_distribution,
)
from .lindblad import Liouvillian, SystemParams, build_hamiltonian, build_liouvillian, evolve, steady_state
from .spinspace import (
    FOUR_LEVEL,
    DensityMatrix,
    PhaseKernel,
    SpinBasis,
    coherent_amplitude,
    coherent_amplitudes,
    make_pure,
    phase_kernel,
)
from .sweep import SweepConfig, SweepResult, emit_csv, emit_plot, parse_config, run_sweep

__all__ = [
    "FOUR_LEVEL", "DensityMatrix", "KnowledgeReport", "Liouvillian", "Mu2Result", "PhaseDistribution",
    "PhaseKernel", "SpinBasis", "SweepConfig", "SweepResult", "SystemParams", "build_hamiltonian",
    "build_liouvillian", "coherent_amplitude", "coherent_amplitudes", "convex_form", "emit_csv",
    "emit_plot", "evolve", "find_mu2", "knowledge_number", "knowledge_phase", "knowledge_report",
    "make_pure", "mixedness", "number_distribution", "parse_config", "phase_distribution",
    "phase_kernel", "run_sweep", "steady_state", "uncertainty_sum",
]

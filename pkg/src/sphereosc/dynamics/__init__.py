"""Spectra, perturbative transitions, propagation and resonance scans."""
from .compare import DiscrepancyReport, compare_first_order_vs_exact, operator_norm_scaling
from .propagate import NormDriftError, PropagationResult, propagate, rk4_refinement_ratio, suggest_dt
from .scan import Peak, ResonanceScan, find_peaks, golden_rule_peak_area, scan_resonances
from .spectrum import (
    SimultaneousDiagonalizationError,
    SpectrumResult,
    cluster_spreads,
    diagonalize,
    spectrum_diagnostics,
    spectrum_of,
)
from .tdpt import (
    ABSORPTION,
    EMISSION,
    KERNELS,
    RateTable,
    TransitionRecord,
    a_n_pm,
    golden_rule_rate,
    tdpt_amplitude,
    tdpt_probability_full,
    tdpt_probability_rw,
    transition_record,
)

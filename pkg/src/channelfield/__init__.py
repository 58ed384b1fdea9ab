"""Simulation and checks for a random planar field built from a marked Poisson process.

Marked points carry a footprint, an exponential length, a Pareto strength
and a direction.  Each point owns a unit-wide rectangle; the strongest
rectangle covering a site sets the raw field there, and a bump mollifier
smooths it.  The package samples the field, integrates its curves, detects
chains of blocking channels and checks the rates, kernels and laws that
govern them.
"""

__version__ = "0.1.0"

from .chains import ChainRecord, detect_chain, is_successor, residual_length, blocking_times
from .estimator import ChannelField
from .flow import Curve, integrate_curve, ratio_stats, resume_curve
from .geometry import Rect
from .markov import (
    ChainState,
    DELTA,
    RateTable,
    couple_pareto,
    exact_block_ratio,
    g_mass,
    lambda0_split,
    lambda_j,
    p_lower,
    q_tail,
    rate_table,
    sample_Q,
    simulate_F,
    survival_estimate,
    transition_sample,
)
from .mixing import MixingReport, empirical_mixing, overlap_bound, strong_markov_test
from .mollify import MollifierSpec, v_at
from .pointfield import (
    Configuration,
    IntensityParams,
    MarkedPoint,
    intensity_density,
    mu_dinv_rect,
    read_configuration,
    sample_configuration,
    write_configuration,
)
from .tessellation import THETA, TessellationView

__all__ = [
    "ChainRecord", "ChainState", "ChannelField", "Configuration", "Curve", "DELTA", "IntensityParams",
    "MarkedPoint", "MixingReport", "MollifierSpec", "RateTable", "Rect", "THETA", "TessellationView",
    "blocking_times", "couple_pareto", "detect_chain", "empirical_mixing", "exact_block_ratio", "g_mass",
    "integrate_curve", "intensity_density", "is_successor", "lambda0_split", "lambda_j", "mu_dinv_rect",
    "overlap_bound", "p_lower", "q_tail", "rate_table", "ratio_stats", "read_configuration",
    "residual_length", "resume_curve", "sample_Q", "sample_configuration", "simulate_F",
    "strong_markov_test", "survival_estimate", "transition_sample", "v_at", "write_configuration",
]

"""Evidential Markov decision model.

Dempster-Shafer bodies of evidence measured from continuous-time Markov
dynamics, used to predict the disjunction effect in categorization-decision
experiments.
"""

from .evidence import (
    ALL_METHODS,
    EntropyMethod,
    FocalSet,
    FrameOfDiscernment,
    MassFunction,
    ProbabilityDistribution,
    alt_entropy,
    belief,
    deng_entropy,
    entropy,
    make_mass,
    pignistic,
    plausibility,
)
from .markov import (
    GeneratorMode,
    IntensityMatrix,
    MeasurementSelector,
    StateVector,
    TransitionMatrix,
    assemble_block_K,
    build_K_bad,
    build_K_good,
    evolve,
    matrix_exponential,
    response_probability,
    total_probability_demo,
)
from .model import (
    EmParams,
    ModelResult,
    condition_on_category,
    eud_gamma,
    initial_state,
    measure_bpa_cd,
    measure_bpa_d,
    predict,
    run_model,
)
from .calibration import FitResult, FitTarget, fit_experiment, fit_rates
from .datasets import ExperimentRecord, load_experiments
from .config import RunConfig
from .experiments import entropy_bakeoff, run_table3, summary_report

__version__ = "0.1.0"

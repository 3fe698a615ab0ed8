"""Monte Carlo simulator for joint MTC activity detection and channel
estimation with a coexisting broadband user: pilot design, MMSE+SIC
removal of the broadband signal, and MMV-AMP sparse recovery."""

from .amp import (
    AmpState,
    DenoiserParams,
    DetectionResult,
    StateEvolutionSampler,
    amp_run,
    denoise,
    denoise_jacobian_trace,
    detect,
    state_evolution_run,
    state_evolution_step,
)
from .embb_sic import CleanedSignal, EmbbEstimate, correlate, mmse_estimate, perfect_estimate, sic
from .harness import ExperimentSpec, run_experiment, run_trial, seed_stream
from .metrics import RocCurve, RrmseReport, auc, pmd_pfa, roc_sweep, rrmse
from .pilots import (
    CollisionBound,
    InfeasibleCollisionBound,
    PilotBasis,
    PilotSet,
    PilotStrategy,
    gen_bernoulli,
    gen_pilot_I,
    gen_pilot_II,
    make_pilots,
    min_subset_size,
    orthogonal_basis,
)
from .sysmodel import ScenarioRealization, SystemConfig, sample_activity, sample_channels, synthesize

__version__ = "0.1.0"

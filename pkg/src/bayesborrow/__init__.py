"""Bayesian sample size determination with borrowing from historical data.

Builds commensurate predictive priors from summarized historical trials,
aggregates them into a single collective prior by precision weighting,
transforms elicited discrepancy weights so the sample size responds uniformly
to them, and evaluates the resulting designs by seeded Monte Carlo.
"""

from ._backend import active_backend
from .borrowing import (
    AggregationMethod,
    CollectivePrior,
    HistoricalSource,
    WeightKind,
    WeightVector,
    aggregate_legacy,
    aggregate_precision_weighted,
    commensurate_variance,
    synthesis_weights_legacy,
)
from .design import (
    BinaryTwoArmEndpoint,
    DesignParams,
    EndpointModel,
    LegacyAggregationWarning,
    NormalEndpoint,
    RawWeightsWarning,
    SampleSizeResult,
    SingleArmBinaryEndpoint,
    SweepTable,
    TimeToEventEndpoint,
    events_required_tte,
    required_precision,
    round_allocation,
    sample_size_binary_two_arm,
    sample_size_borrow_normal,
    sample_size_for_endpoint,
    sample_size_frequentist,
    sample_size_no_borrow,
    sample_size_single_arm_binary,
    sweep_surface,
)
from .inference import (
    DecisionOutcome,
    PosteriorSummary,
    Verdict,
    decide,
    posterior_update,
    posterior_update_precision,
    prob_efficacy,
    prob_futility,
)
from .linearize import (
    PrecisionEndpoints,
    interpolate_precision,
    invert_precision,
    linearize_all,
    linearize_weight,
    precision_endpoints,
)
from .scenario import (
    ScenarioFile,
    ScenarioValidationError,
    bundled_scenario_names,
    bundled_scenario_path,
    load_bundled,
    parse_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .simulate import (
    SimulationConfig,
    SimulationResult,
    run_replicate,
    run_simulation,
)
from .stats import (
    GammaMixtureHyperparams,
    Probability,
    inverse_gamma_mixture_mean,
    std_normal_cdf,
    std_normal_quantile,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationMethod",
    "BinaryTwoArmEndpoint",
    "CollectivePrior",
    "DecisionOutcome",
    "DesignParams",
    "EndpointModel",
    "GammaMixtureHyperparams",
    "HistoricalSource",
    "LegacyAggregationWarning",
    "NormalEndpoint",
    "PosteriorSummary",
    "PrecisionEndpoints",
    "Probability",
    "RawWeightsWarning",
    "SampleSizeResult",
    "ScenarioFile",
    "ScenarioValidationError",
    "SimulationConfig",
    "SimulationResult",
    "SingleArmBinaryEndpoint",
    "SweepTable",
    "TimeToEventEndpoint",
    "Verdict",
    "WeightKind",
    "WeightVector",
    "active_backend",
    "aggregate_legacy",
    "aggregate_precision_weighted",
    "bundled_scenario_names",
    "bundled_scenario_path",
    "commensurate_variance",
    "decide",
    "events_required_tte",
    "interpolate_precision",
    "inverse_gamma_mixture_mean",
    "invert_precision",
    "linearize_all",
    "linearize_weight",
    "load_bundled",
    "parse_scenario",
    "posterior_update",
    "posterior_update_precision",
    "precision_endpoints",
    "prob_efficacy",
    "prob_futility",
    "required_precision",
    "round_allocation",
    "run_replicate",
    "run_simulation",
    "sample_size_binary_two_arm",
    "sample_size_borrow_normal",
    "sample_size_for_endpoint",
    "sample_size_frequentist",
    "sample_size_no_borrow",
    "sample_size_single_arm_binary",
    "scenario_from_dict",
    "scenario_to_dict",
    "std_normal_cdf",
    "std_normal_quantile",
    "sweep_surface",
    "synthesis_weights_legacy",
]

"""Estimation bounds and rate trade-offs for bistatic integrated sensing
and communication: stochastic CRB, closed-form and numeric Ziv-Zakai bounds,
a priori bound, ergodic rate, and the sweep/Pareto experiment harness."""

__version__ = "0.1.0"

from .array_model import (
    Beamformer,
    Scenario,
    Target,
    perturbed_covariance,
    received_covariance,
    sensing_multibeam,
    sensing_snr,
    sjb_beamformer,
    steered_beamformer,
    steering_derivative,
    steering_vector,
    target_effective_power,
)
from .bounds import (
    BoundReport,
    apriori_bound,
    crb_stochastic,
    mainlobe_width,
    pmin_general,
    pmin_mainlobe,
    pmin_null,
    u_tilde,
    zzb_closed,
    zzb_numeric_oracle,
)
from .comm_rate import CommChannel, ergodic_rate_closed, ergodic_rate_mc, instantaneous_rate
from .config import ConfigBundle, config_from_dict, default_config, load_config
from .errors import (
    ConfigError,
    DegenerateCombination,
    DomainError,
    EmptyInput,
    GridTooCoarse,
    InfeasibleSeparation,
    IsacBoundsError,
    NotPositiveDefinite,
    SingularFisher,
    TooFewPoints,
)
from .experiments import (
    ExperimentConfig,
    SweepRow,
    TradeoffPoint,
    alpha_sweep,
    bound_vs_snr_sweep,
    draw_aoas,
    pareto_front,
    pareto_sweep,
    rmse_aggregate,
)
from .numerics import (
    HermitianMatrix,
    exp_integral_e1,
    exp_scaled_e1,
    hermitian_inverse,
    log_det,
    q_function,
    reg_lower_gamma_3half,
)

__all__ = [
    "__version__",
    "Beamformer",
    "BoundReport",
    "CommChannel",
    "ConfigBundle",
    "ConfigError",
    "DegenerateCombination",
    "DomainError",
    "EmptyInput",
    "ExperimentConfig",
    "GridTooCoarse",
    "HermitianMatrix",
    "InfeasibleSeparation",
    "IsacBoundsError",
    "NotPositiveDefinite",
    "Scenario",
    "SingularFisher",
    "SweepRow",
    "Target",
    "TooFewPoints",
    "TradeoffPoint",
    "alpha_sweep",
    "apriori_bound",
    "bound_vs_snr_sweep",
    "config_from_dict",
    "crb_stochastic",
    "default_config",
    "draw_aoas",
    "ergodic_rate_closed",
    "ergodic_rate_mc",
    "exp_integral_e1",
    "exp_scaled_e1",
    "hermitian_inverse",
    "instantaneous_rate",
    "load_config",
    "log_det",
    "mainlobe_width",
    "pareto_front",
    "pareto_sweep",
    "perturbed_covariance",
    "pmin_general",
    "pmin_mainlobe",
    "pmin_null",
    "q_function",
    "received_covariance",
    "reg_lower_gamma_3half",
    "rmse_aggregate",
    "sensing_multibeam",
    "sensing_snr",
    "sjb_beamformer",
    "steered_beamformer",
    "steering_derivative",
    "steering_vector",
    "target_effective_power",
    "u_tilde",
    "zzb_closed",
    "zzb_numeric_oracle",
]

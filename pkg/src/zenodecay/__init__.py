"""Unstable-state decay under repeated measurement.

A discrete level coupled to a continuum decays with survival probability
P(t); projective measurements at interval τ replace the natural rate γ₀
by the effective rate γ(τ) = −ln P(τ)/τ.  This package computes P(t)
exactly (Lorentzian coupling) or numerically (general couplings), finds
the resonance pole and its renormalization Z, and locates the transition
time τ* separating the Zeno (slowed) from the inverse-Zeno (accelerated)
regime, including the Z < 1 existence criterion.
"""

from .amplitude import (
    SurvivalMethod,
    SurvivalSeries,
    pole_approximation,
    spectral_density,
    survival_closed_form_lorentzian,
    survival_spectral_integral,
)
from .config import RunConfig, parse_config, validate_mapping
from .errors import (
    BelowThresholdWarning,
    ConfigError,
    ContinuationUnsupportedError,
    ConvergenceError,
    DomainError,
    GridError,
    NoDecayError,
    OutOfRangeError,
    ToleranceError,
    ZenoDecayError,
)
from .formfactor import (
    BandwidthPoint,
    FormFactor,
    LorentzianCoupling,
    TabulatedCoupling,
    ThresholdPowerLawCoupling,
    coupling_strength_squared,
    effective_bandwidth_coupling,
    zeno_time,
)
from .model import DecayModel, ExponentialDecayModel
from .resolvent import (
    BoundState,
    PoleData,
    find_bound_states,
    find_pole,
    golden_rule_rate,
    lorentzian_pole_closed_form,
)
from .selfenergy import SelfEnergyValue, Sheet, real_shift, self_energy
from .zeno import (
    CharacteristicScales,
    EffectiveRateCurve,
    ExistenceCriteria,
    Regime,
    TransitionReport,
    characteristic_scales,
    classify_regime,
    effective_rate,
    effective_rate_curve,
    existence_criteria,
    find_transition_time,
    interpolated_survival,
    repeated_survival,
)

__version__ = "0.1.0"

__all__ = [
    "BandwidthPoint",
    "BelowThresholdWarning",
    "BoundState",
    "CharacteristicScales",
    "ConfigError",
    "ContinuationUnsupportedError",
    "ConvergenceError",
    "DecayModel",
    "DomainError",
    "EffectiveRateCurve",
    "ExistenceCriteria",
    "ExponentialDecayModel",
    "FormFactor",
    "GridError",
    "LorentzianCoupling",
    "NoDecayError",
    "OutOfRangeError",
    "PoleData",
    "Regime",
    "RunConfig",
    "SelfEnergyValue",
    "Sheet",
    "SurvivalMethod",
    "SurvivalSeries",
    "TabulatedCoupling",
    "ThresholdPowerLawCoupling",
    "ToleranceError",
    "TransitionReport",
    "ZenoDecayError",
    "characteristic_scales",
    "classify_regime",
    "coupling_strength_squared",
    "effective_bandwidth_coupling",
    "effective_rate",
    "effective_rate_curve",
    "existence_criteria",
    "find_bound_states",
    "find_pole",
    "find_transition_time",
    "golden_rule_rate",
    "interpolated_survival",
    "lorentzian_pole_closed_form",
    "parse_config",
    "pole_approximation",
    "real_shift",
    "repeated_survival",
    "self_energy",
    "spectral_density",
    "survival_closed_form_lorentzian",
    "survival_spectral_integral",
    "validate_mapping",
    "zeno_time",
]

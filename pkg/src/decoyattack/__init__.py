"""Hybrid measurement attack on vacuum+weak decoy-state BB84 with a
partially phase-randomized source.

Closed-form interception statistics, the resulting channel gains and
error rates, the legitimate parties' decoy-state key-rate estimate, and
an event-level Monte Carlo oracle that cross-validates every closed form.
"""

from .optics import (
    LO_PHASES,
    PHASE_ALPHABET,
    EveParams,
    QuadratureConfig,
    SourceParams,
    binary_entropy,
    homodyne_mean,
    homodyne_pdf,
    homodyne_tail,
    phase_averaged_pdf,
    phase_averaged_tail,
    spd_click_probs,
)
from .attack import (
    DEFAULT_ERROR_MATRICES,
    AttackSummary,
    ErrorMatrices,
    ResendDecision,
    VACUUM,
    attack_summary,
    decide_resend,
    resend_probs,
)
from .channel import (
    BobParams,
    ChannelStats,
    FIBER_LOSS_DB_PER_KM,
    attacked_channel,
    attacked_stats,
    equivalent_length,
    honest_channel,
    honest_stats,
)
from .decoy import KeyRateReport, e1_upper, gllp_rate, key_rate_report, y1_lower
from .montecarlo import (
    McConfig,
    McEstimate,
    IntensityEstimate,
    RoundRecord,
    ValueWithError,
    estimate,
    simulate_round,
)
from .sweep import (
    DEFAULT_SCENARIO,
    MonitorVerdict,
    Scenario,
    ScenarioError,
    SweepAxis,
    SweepGrid,
    SweepRow,
    emit,
    load_scenario,
    monitor_check,
    run_sweep,
    scenario_from_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AttackSummary",
    "BobParams",
    "ChannelStats",
    "DEFAULT_ERROR_MATRICES",
    "DEFAULT_SCENARIO",
    "ErrorMatrices",
    "EveParams",
    "FIBER_LOSS_DB_PER_KM",
    "IntensityEstimate",
    "KeyRateReport",
    "LO_PHASES",
    "McConfig",
    "McEstimate",
    "MonitorVerdict",
    "PHASE_ALPHABET",
    "QuadratureConfig",
    "ResendDecision",
    "RoundRecord",
    "Scenario",
    "ScenarioError",
    "SourceParams",
    "SweepAxis",
    "SweepGrid",
    "SweepRow",
    "VACUUM",
    "ValueWithError",
    "attack_summary",
    "attacked_channel",
    "attacked_stats",
    "binary_entropy",
    "decide_resend",
    "e1_upper",
    "emit",
    "equivalent_length",
    "estimate",
    "gllp_rate",
    "homodyne_mean",
    "homodyne_pdf",
    "homodyne_tail",
    "honest_channel",
    "honest_stats",
    "key_rate_report",
    "load_scenario",
    "monitor_check",
    "phase_averaged_pdf",
    "phase_averaged_tail",
    "resend_probs",
    "run_sweep",
    "scenario_from_dict",
    "simulate_round",
    "spd_click_probs",
    "y1_lower",
]

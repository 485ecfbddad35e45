"""Serial-monopoly posted-price dynamics with quasi-patient buyers.

Exact piecewise-linear demand curves, an exact simulator of the per-round
revenue-maximizing price path, closed-form admission-price bounds, and
trajectory validation utilities.
"""

from .analysis import (
    AdmissionEstimate,
    SweepRow,
    ValidationReport,
    delta_sweep,
    detect_collapse,
    estimate_map,
    demand_law_checks,
    validate,
    write_sweep_csv,
)
from .bounds import (
    BoundReport,
    KeyQuantities,
    NotApplicableError,
    asymptotic_admission_lb,
    bound_report,
    certificate_value,
    collapse_predicted,
    delta_min,
    forbidden_interval,
    key_quantities,
    p_ser_delta,
    pent_up_weight,
    tightness_thresholds,
)
from .demand import (
    CurveFamily,
    DemandCurve,
    DemandError,
    NoSolutionError,
    from_knots,
    load_curve,
    make_linear,
    make_q_epsilon,
    parse_curve_text,
)
from .engine import (
    EngineError,
    PentUpState,
    Segment,
    SimConfig,
    StepRecord,
    new_state,
    revenue_diff,
    run,
    run_with_states,
    step,
    total_demand,
    write_trajectory_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissionEstimate",
    "BoundReport",
    "CurveFamily",
    "DemandCurve",
    "DemandError",
    "EngineError",
    "KeyQuantities",
    "NoSolutionError",
    "NotApplicableError",
    "PentUpState",
    "Segment",
    "SimConfig",
    "StepRecord",
    "SweepRow",
    "ValidationReport",
    "asymptotic_admission_lb",
    "bound_report",
    "certificate_value",
    "collapse_predicted",
    "delta_min",
    "delta_sweep",
    "detect_collapse",
    "estimate_map",
    "forbidden_interval",
    "from_knots",
    "key_quantities",
    "demand_law_checks",
    "load_curve",
    "make_linear",
    "make_q_epsilon",
    "new_state",
    "p_ser_delta",
    "parse_curve_text",
    "pent_up_weight",
    "revenue_diff",
    "run",
    "run_with_states",
    "step",
    "total_demand",
    "validate",
    "write_sweep_csv",
    "write_trajectory_csv",
]

"""Evidence-based trust: representation, propagation, and maintenance.

Trust is carried as evidence pairs ⟨r, s⟩ with a principled certainty
functional, moved through referral networks by concatenation/aggregation,
and maintained by update methods that score how accurate each received
estimate turned out to be.  A deterministic simulation layer and CLI sit on
top for experiments and feedback-prediction pipelines.
"""

from .core import (
    Belief,
    Evidence,
    certainty,
    expected_quality,
    from_belief,
    pcdf,
    to_belief,
)
from .errors import ConvergenceError, EvitrustError, FeedbackFormatError
from .numerics import (
    DEFAULT_TOLERANCE,
    Tolerance,
    find_unit_crossings,
    integrate,
    log_beta,
    log_gamma,
    regularized_incomplete_beta,
)
from .propagation import ReferralPath, aggregate, combine_referrals, concatenate
from .simulation import (
    BehaviorProfile,
    CombinationResult,
    Damping,
    ExperimentConfig,
    GoodThenCorrupted,
    HistoryMode,
    Honest,
    Momentum,
    Periodic,
    Probability,
    Random,
    RandomWalk,
    ReferrerProfile,
    Rumor,
    TimestepRecord,
    Truthful,
    behavior_sequence,
    behavior_value,
    make_report,
    prediction_error,
    records_to_csv,
    records_to_json,
    run_combination_experiment,
    run_history_experiment,
    run_referrer_experiment,
    sample_transactions,
)
from .amazon import (
    AmazonConfig,
    AmazonMode,
    FeedbackRecord,
    load_feedback_csv,
    parse_feedback_csv,
    predict_feedback,
    rating_to_evidence,
    run_amazon_experiment,
    synthesize_feedback,
)
from .updates import (
    AccuracyMethod,
    HistoryState,
    HistoryUpdate,
    UpdateConfig,
    UpdateMethod,
    accuracy_average,
    accuracy_average_integral,
    accuracy_linear,
    accuracy_max_certainty,
    accuracy_sensitivity,
    general_update,
    history_update,
    update_referrer,
)

__version__ = "0.1.0"

__all__ = [
    "Belief",
    "Evidence",
    "certainty",
    "expected_quality",
    "from_belief",
    "pcdf",
    "to_belief",
    "ConvergenceError",
    "EvitrustError",
    "FeedbackFormatError",
    "DEFAULT_TOLERANCE",
    "Tolerance",
    "find_unit_crossings",
    "integrate",
    "log_beta",
    "log_gamma",
    "regularized_incomplete_beta",
    "ReferralPath",
    "aggregate",
    "combine_referrals",
    "concatenate",
    "AccuracyMethod",
    "HistoryState",
    "HistoryUpdate",
    "UpdateConfig",
    "UpdateMethod",
    "accuracy_average",
    "accuracy_average_integral",
    "accuracy_linear",
    "accuracy_max_certainty",
    "accuracy_sensitivity",
    "general_update",
    "history_update",
    "update_referrer",
    "BehaviorProfile",
    "CombinationResult",
    "Damping",
    "ExperimentConfig",
    "GoodThenCorrupted",
    "HistoryMode",
    "Honest",
    "Momentum",
    "Periodic",
    "Probability",
    "Random",
    "RandomWalk",
    "ReferrerProfile",
    "Rumor",
    "TimestepRecord",
    "Truthful",
    "behavior_sequence",
    "behavior_value",
    "make_report",
    "prediction_error",
    "records_to_csv",
    "records_to_json",
    "run_combination_experiment",
    "run_history_experiment",
    "run_referrer_experiment",
    "sample_transactions",
    "AmazonConfig",
    "AmazonMode",
    "FeedbackRecord",
    "load_feedback_csv",
    "parse_feedback_csv",
    "predict_feedback",
    "rating_to_evidence",
    "run_amazon_experiment",
    "synthesize_feedback",
]

"""Marketplace feedback prediction: ratings as evidence, three predictors.

Ratings in {1..5} normalize to v = (rating−1)/4 and count as ten
transactions' worth of evidence, ⟨10v, 10(1−v)⟩, so a 5 becomes ⟨10, 0⟩ and
a 2 becomes ⟨2.5, 7.5⟩.  Each feedback is predicted from its predecessors
under one of three schemes:

* Unweighted: the plain mean of past normalized ratings.
* GeometricWeights(λ): weights λ^age with the oldest feedback carrying the
  highest power of λ.
* TrustInHistory: threads the evidence stream through the self-tuning
  history update and predicts with the carried evidence's expected quality.

Prediction errors are reported on the normalized scale (multiply by 4 for
the 1-to-5 scale).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np

from .core import Evidence, expected_quality
from .errors import FeedbackFormatError
from .simulation import BehaviorProfile, Probability, behavior_sequence
from .updates import HistoryState, history_update

__all__ = [
    "FeedbackRecord",
    "AmazonMode",
    "AmazonConfig",
    "rating_to_evidence",
    "normalize_rating",
    "load_feedback_csv",
    "parse_feedback_csv",
    "predict_feedback",
    "run_amazon_experiment",
    "SellerModeError",
    "synthesize_feedback",
]

_EXPECTED_HEADER = ["seller_id", "t", "rating"]


@dataclass(frozen=True)
class FeedbackRecord:
    """One marketplace feedback: seller, arrival order, integer rating 1..5."""

    seller_id: str
    t: int
    rating: int

    def __post_init__(self):
        if self.rating not in (1, 2, 3, 4, 5):
            raise ValueError(f"rating must be an integer in 1..5, got {self.rating}")


class AmazonMode(str, Enum):
    UNWEIGHTED = "Unweighted"
    GEOMETRIC = "GeometricWeights"
    TRUST_IN_HISTORY = "TrustInHistory"


@dataclass(frozen=True)
class AmazonConfig:
    """Predictor selection; ``lambda_`` is the geometric retention weight."""

    mode: AmazonMode = AmazonMode.TRUST_IN_HISTORY
    lambda_: float = 0.9

    def __post_init__(self):
        if not (0.0 <= self.lambda_ <= 1.0):
            raise ValueError(f"lambda_ must be in [0, 1], got {self.lambda_}")


def normalize_rating(rating: int) -> float:
    """Map {1..5} onto {0, 0.25, 0.5, 0.75, 1}."""
    if rating not in (1, 2, 3, 4, 5):
        raise ValueError(f"rating must be an integer in 1..5, got {rating}")
    return (rating - 1) / 4.0


def rating_to_evidence(rating: int) -> Evidence:
    """A rating as ten transactions at its normalized value: ⟨10v, 10(1−v)⟩."""
    v = normalize_rating(rating)
    return Evidence(10.0 * v, 10.0 * (1.0 - v))


def parse_feedback_csv(text: str) -> List[FeedbackRecord]:
    """Parse feedback CSV content with header ``seller_id,t,rating``.

    Rows are validated (integer fields, rating range, strictly increasing t
    per seller); problems raise :class:`FeedbackFormatError` naming the
    1-based line number.  Returns records in file order.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FeedbackFormatError("empty file: expected header 'seller_id,t,rating'")
    if [h.strip() for h in header] != _EXPECTED_HEADER:
        raise FeedbackFormatError(
            f"bad header {header!r}: expected {','.join(_EXPECTED_HEADER)}", line=1
        )

    records: List[FeedbackRecord] = []
    last_t: Dict[str, int] = {}
    for line_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 3:
            raise FeedbackFormatError(f"expected 3 fields, got {len(row)}", line=line_no)
        seller = row[0].strip()
        if not seller:
            raise FeedbackFormatError("empty seller_id", line=line_no)
        try:
            t = int(row[1])
        except ValueError:
            raise FeedbackFormatError(f"t must be an integer, got {row[1]!r}", line=line_no)
        try:
            rating = int(row[2])
        except ValueError:
            raise FeedbackFormatError(f"rating must be an integer, got {row[2]!r}", line=line_no)
        if rating not in (1, 2, 3, 4, 5):
            raise FeedbackFormatError(f"rating must be in 1..5, got {rating}", line=line_no)
        if seller in last_t and t <= last_t[seller]:
            raise FeedbackFormatError(
                f"t must be strictly increasing per seller; seller {seller!r} "
                f"has t={t} after t={last_t[seller]}",
                line=line_no,
            )
        last_t[seller] = t
        records.append(FeedbackRecord(seller, t, rating))
    return records


def load_feedback_csv(path: str) -> List[FeedbackRecord]:
    """Read and validate a feedback CSV file (see :func:`parse_feedback_csv`)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FeedbackFormatError(f"cannot read {path}: {exc}")
    return parse_feedback_csv(text)


def predict_feedback(
    history: Sequence[float],
    config: AmazonConfig,
    state: Optional[HistoryState] = None,
) -> float:
    """Predict the next normalized feedback from past normalized feedbacks.

    Unweighted returns the plain mean.  GeometricWeights returns
    Σ vᵢ·λ^(ageᵢ) / Σ λ^(ageᵢ) where the most recent feedback has age 0.
    TrustInHistory replays the history through the self-tuning update (each
    feedback as ⟨10v, 10(1−v)⟩ evidence), or continues from ``state`` if
    given, and predicts the carried evidence's expected quality.
    """
    mode = AmazonMode(config.mode)
    if mode is AmazonMode.TRUST_IN_HISTORY:
        if state is None:
            state = HistoryState()
            for v in history:
                ev = Evidence(10.0 * v, 10.0 * (1.0 - v))
                state = history_update(state, ev).state
        return expected_quality(state.carried)

    values = list(history)
    if not values:
        raise ValueError(f"{mode.value} prediction requires a non-empty history")
    if mode is AmazonMode.UNWEIGHTED:
        return sum(values) / len(values)
    lam = config.lambda_
    weights = [lam ** (len(values) - 1 - i) for i in range(len(values))]
    wsum = sum(weights)
    if wsum == 0.0:
        # lambda = 0 keeps only the newest feedback.
        return values[-1]
    return sum(v * w for v, w in zip(values, weights)) / wsum


@dataclass(frozen=True)
class SellerModeError:
    """Mean absolute prediction error for one seller under one predictor."""

    seller_id: str
    mode: AmazonMode
    lambda_: Optional[float]
    error: float

    @property
    def error_scale5(self) -> float:
        return 4.0 * self.error


def run_amazon_experiment(
    records: Sequence[FeedbackRecord],
    configs: Sequence[AmazonConfig],
) -> List[SellerModeError]:
    """Predict every feedback from its predecessors, per seller and config.

    The first feedback of a seller has no predecessors and is skipped for
    all predictors.  Sellers with fewer than two feedbacks cannot be scored
    and are skipped entirely.  Returns one row per (seller, config), sellers
    in first-appearance order.
    """
    by_seller: Dict[str, List[FeedbackRecord]] = {}
    order: List[str] = []
    for rec in records:
        if rec.seller_id not in by_seller:
            by_seller[rec.seller_id] = []
            order.append(rec.seller_id)
        by_seller[rec.seller_id].append(rec)

    results: List[SellerModeError] = []
    for seller in order:
        feedback = by_seller[seller]
        if len(feedback) < 2:
            continue
        values = [normalize_rating(rec.rating) for rec in feedback]
        for config in configs:
            mode = AmazonMode(config.mode)
            gaps: List[float] = []
            state = HistoryState()
            for i, actual in enumerate(values):
                if i > 0:
                    if mode is AmazonMode.TRUST_IN_HISTORY:
                        pred = predict_feedback(values[:i], config, state=state)
                    else:
                        pred = predict_feedback(values[:i], config)
                    gaps.append(abs(pred - actual))
                if mode is AmazonMode.TRUST_IN_HISTORY:
                    ev = Evidence(10.0 * actual, 10.0 * (1.0 - actual))
                    state = history_update(state, ev).state
            lam = config.lambda_ if mode is AmazonMode.GEOMETRIC else None
            results.append(SellerModeError(seller, mode, lam, sum(gaps) / len(gaps)))
    return results


def synthesize_feedback(
    sellers: int = 5,
    feedbacks_per_seller: int = 80,
    seed: int = 0,
    profile: Optional[BehaviorProfile] = None,
) -> List[FeedbackRecord]:
    """Seeded synthetic feedback streams for out-of-the-box runs.

    Each seller's per-step quality follows a behavior profile (default
    Probability(0.9)); the rating is 1 + Binomial(4, X_t), so mostly-good
    sellers earn mostly 4s and 5s with occasional slumps.
    """
    if profile is None:
        profile = Probability(0.9)
    root = np.random.SeedSequence(seed)
    records: List[FeedbackRecord] = []
    for idx, child in enumerate(root.spawn(sellers)):
        rng = np.random.Generator(np.random.PCG64(child))
        xs = behavior_sequence(profile, rng, feedbacks_per_seller)
        for t, x in enumerate(xs, start=1):
            rating = 1 + int(rng.binomial(4, x))
            records.append(FeedbackRecord(f"seller{idx + 1:02d}", t, rating))
    return records

"""Deterministic, seeded trust-maintenance experiments.

Three experiment drivers share a common shape: at each timestep a provider
behaves according to a behavior profile, the client observes a batch of
transactions, some prediction of the provider's quality is made before
observing, and a trust state is updated afterwards.  Per-step results land in
:class:`TimestepRecord` lists that serialize to CSV/JSON with a fixed schema.

Determinism contract: every random draw comes from numpy PCG64 generators
derived from the experiment seed with a fixed spawn layout (one independent
stream per role), so a (config, seed) pair reproduces byte-identical output
regardless of host or what else has run in the process.

Behavior profiles (per-step quality X_t in [0, 1]):

    Probability(p)        1.0 with probability p, else 0.0
    Periodic              1.0 when ⌊t/2⌋ is odd, else 0.0 (period 4)
    Damping(horizon)      1.0 while t <= horizon/2, then 0.0
    Random                fresh U(0, 1) each step
    RandomWalk(gamma)     X_{t-1} + gamma·U(-1, 1), clamped to [0, 1]
    Momentum(gamma, psi)  adds psi·(X_{t-1} - X_{t-2}) to the walk step

Referrer profiles shape the reports a referrer derives from its experience:
Truthful and Honest pass the experience through, Rumor exaggerates the
evidence counts after its switch step, GoodThenCorrupted flips the polarity
of its reports after the switch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Sequence, Union

import numpy as np

from .core import Evidence, certainty, expected_quality, from_belief, to_belief
from .propagation import ReferralPath, combine_referrals, concatenate
from .updates import (
    HistoryState,
    UpdateConfig,
    UpdateMethod,
    history_update,
    update_referrer,
)

__all__ = [
    "Probability",
    "Periodic",
    "Damping",
    "Random",
    "RandomWalk",
    "Momentum",
    "BehaviorProfile",
    "Truthful",
    "Honest",
    "Rumor",
    "GoodThenCorrupted",
    "ReferrerProfile",
    "HistoryMode",
    "ExperimentConfig",
    "TimestepRecord",
    "CombinationResult",
    "behavior_value",
    "behavior_sequence",
    "sample_transactions",
    "make_report",
    "prediction_error",
    "run_referrer_experiment",
    "run_combination_experiment",
    "run_history_experiment",
    "records_to_csv",
    "records_to_json",
    "CSV_HEADER",
]


# --------------------------------------------------------------------------
# Behavior profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Probability:
    p: float = 0.9

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ValueError(f"p must be in [0, 1], got {self.p}")


@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class Damping:
    horizon: int = 100

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")


@dataclass(frozen=True)
class Random:
    pass


@dataclass(frozen=True)
class RandomWalk:
    gamma: float = 0.1

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0):
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")


@dataclass(frozen=True)
class Momentum:
    gamma: float = 0.1
    psi: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0) or not (0.0 <= self.psi <= 1.0):
            raise ValueError(f"gamma and psi must be in [0, 1], got {self.gamma}, {self.psi}")


BehaviorProfile = Union[Probability, Periodic, Damping, Random, RandomWalk, Momentum]


def behavior_value(
    profile: BehaviorProfile,
    t: int,
    prev: float = 0.5,
    prev2: float = 0.5,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Quality X_t of a provider following ``profile`` at timestep t.

    ``prev``/``prev2`` supply X_{t-1} and X_{t-2} for the walk and momentum
    variants, whose results are clamped to [0, 1] (X_t is a probability).
    Stochastic profiles draw from ``rng``.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if isinstance(profile, Probability):
        return 1.0 if rng.random() < profile.p else 0.0
    if isinstance(profile, Periodic):
        return 1.0 if (t // 2) % 2 == 1 else 0.0
    if isinstance(profile, Damping):
        return 1.0 if t <= profile.horizon / 2.0 else 0.0
    if isinstance(profile, Random):
        return float(rng.random())
    if isinstance(profile, RandomWalk):
        return min(max(prev + profile.gamma * rng.uniform(-1.0, 1.0), 0.0), 1.0)
    if isinstance(profile, Momentum):
        step = profile.gamma * rng.uniform(-1.0, 1.0) + profile.psi * (prev - prev2)
        return min(max(prev + step, 0.0), 1.0)
    raise TypeError(f"unknown behavior profile: {profile!r}")


def behavior_sequence(
    profile: BehaviorProfile,
    rng: np.random.Generator,
    timesteps: int,
) -> List[float]:
    """X_1 .. X_T for a profile, handling walk/momentum initialization.

    Walk and momentum start from a hidden X_0 ~ U(0, 1); momentum emits
    X_1 = X_0 so its two-step lookback is defined from t = 2 on.
    """
    values: List[float] = []
    if isinstance(profile, (RandomWalk, Momentum)):
        prev = float(rng.random())
        prev2 = prev
        start = 1
        if isinstance(profile, Momentum):
            values.append(prev)
            start = 2
        for t in range(start, timesteps + 1):
            x = behavior_value(profile, t, prev, prev2, rng)
            values.append(x)
            prev2, prev = prev, x
        return values
    for t in range(1, timesteps + 1):
        values.append(behavior_value(profile, t, rng=rng))
    return values


def sample_transactions(x: float, n: int, rng: np.random.Generator) -> Evidence:
    """Outcome counts ⟨k, n−k⟩ of n independent transactions at quality x."""
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x must be in [0, 1], got {x}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k = int(rng.binomial(n, x))
    return Evidence(float(k), float(n - k))


# --------------------------------------------------------------------------
# Referrer profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Truthful:
    pass


@dataclass(frozen=True)
class Honest:
    pass


@dataclass(frozen=True)
class Rumor:
    switch_step: int = 50
    exaggeration: float = 10.0

    def __post_init__(self):
        if self.switch_step < 0:
            raise ValueError(f"switch_step must be >= 0, got {self.switch_step}")
        if self.exaggeration < 1.0:
            raise ValueError(f"exaggeration must be >= 1, got {self.exaggeration}")


@dataclass(frozen=True)
class GoodThenCorrupted:
    switch_step: int = 50

    def __post_init__(self):
        if self.switch_step < 0:
            raise ValueError(f"switch_step must be >= 0, got {self.switch_step}")


ReferrerProfile = Union[Truthful, Honest, Rumor, GoodThenCorrupted]


def make_report(
    profile: ReferrerProfile, true_experience: Evidence, t: int
) -> Evidence:
    """The report a referrer with ``profile`` derives from its experience at t.

    Truthful and Honest report the experience unchanged.  Rumor scales both
    counts by its exaggeration factor once t passes the switch step (claiming
    far more evidence than it has).  GoodThenCorrupted reports the polarity
    inversion ⟨s, r⟩ after the switch.
    """
    if isinstance(profile, (Truthful, Honest)):
        return true_experience
    if isinstance(profile, Rumor):
        if t > profile.switch_step:
            return true_experience.scaled(profile.exaggeration)
        return true_experience
    if isinstance(profile, GoodThenCorrupted):
        if t > profile.switch_step:
            return Evidence(true_experience.s, true_experience.r)
        return true_experience
    raise TypeError(f"unknown referrer profile: {profile!r}")


# --------------------------------------------------------------------------
# Experiment plumbing
# --------------------------------------------------------------------------


class HistoryMode(str, Enum):
    """How run_history_experiment discounts the carried evidence."""

    AMAZON = "Amazon"
    FIXED_BETA = "FixedBeta"
    TRUST_IN_HISTORY = "TrustInHistory"


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared knobs of the experiment drivers.

    ``tx_per_step`` is the number of transactions the client observes per
    timestep; ``referrer_tx_per_step`` is how many a referrer observes for
    its own experience.  ``provider_quality`` is the per-transaction success
    probability of the fixed provider used by the referrer experiments.
    ``horizon`` feeds the Damping profile and defaults to ``timesteps``.
    """

    timesteps: int = 100
    tx_per_step: int = 50
    seed: int = 0
    method: UpdateMethod = UpdateMethod.AVERAGE_BETA
    beta: float = 0.2
    horizon: Optional[int] = None
    referrer_tx_per_step: int = 5
    provider_quality: float = 0.9

    def __post_init__(self):
        if self.timesteps < 1:
            raise ValueError(f"timesteps must be >= 1, got {self.timesteps}")
        if self.tx_per_step < 1:
            raise ValueError(f"tx_per_step must be >= 1, got {self.tx_per_step}")
        if self.referrer_tx_per_step < 1:
            raise ValueError(f"referrer_tx_per_step must be >= 1, got {self.referrer_tx_per_step}")
        if not (0.0 <= self.beta <= 1.0):
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")
        if not (0.0 <= self.provider_quality <= 1.0):
            raise ValueError(f"provider_quality must be in [0, 1], got {self.provider_quality}")
        if self.seed < 0 or self.seed > 2**64 - 1:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    @property
    def effective_horizon(self) -> int:
        return self.timesteps if self.horizon is None else self.horizon


@dataclass(frozen=True)
class TimestepRecord:
    """Per-step snapshot: prediction vs. observation plus the trust state."""

    t: int
    predicted: Evidence
    observed: Evidence
    alpha_pred: float
    alpha_obs: float
    trust_state: Evidence
    certainty_pred: float
    discount: Optional[float] = None


CSV_HEADER = (
    "t,alpha_pred,alpha_obs,r_pred,s_pred,r_obs,s_obs,trust_r,trust_s,certainty,discount"
)


def _fmt(v: float) -> str:
    return repr(float(v))


def _record_row(rec: TimestepRecord) -> List[str]:
    return [
        str(rec.t),
        _fmt(rec.alpha_pred),
        _fmt(rec.alpha_obs),
        _fmt(rec.predicted.r),
        _fmt(rec.predicted.s),
        _fmt(rec.observed.r),
        _fmt(rec.observed.s),
        _fmt(rec.trust_state.r),
        _fmt(rec.trust_state.s),
        _fmt(rec.certainty_pred),
        "" if rec.discount is None else _fmt(rec.discount),
    ]


def records_to_csv(records: Sequence[TimestepRecord]) -> str:
    lines = [CSV_HEADER]
    lines.extend(",".join(_record_row(r)) for r in records)
    return "\n".join(lines) + "\n"


def records_to_json(records: Sequence[TimestepRecord]) -> str:
    names = CSV_HEADER.split(",")
    rows = []
    for rec in records:
        row = _record_row(rec)
        obj = {name: (int(row[0]) if name == "t" else None if cell == "" else float(cell))
               for name, cell in zip(names, row)}
        rows.append(obj)
    return json.dumps(rows, indent=2) + "\n"


def prediction_error(series: Sequence[TimestepRecord]) -> float:
    """Mean absolute gap between predicted and observed quality over a run."""
    if not series:
        raise ValueError("prediction_error requires a non-empty series")
    return sum(abs(r.alpha_pred - r.alpha_obs) for r in series) / len(series)


def _streams(seed: int, n: int) -> List[np.random.Generator]:
    """n independent generators with a fixed spawn layout under one seed."""
    root = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(child)) for child in root.spawn(n)]


# --------------------------------------------------------------------------
# Experiment drivers
# --------------------------------------------------------------------------


def run_referrer_experiment(
    config: ExperimentConfig,
    referrer_behavior: Union[BehaviorProfile, ReferrerProfile],
) -> List[TimestepRecord]:
    """Track one referrer's trust as its referrals are checked against
    direct experience.

    The provider serves at a constant per-transaction quality
    (``config.provider_quality``).  A behavior-profile referrer issues a
    report of strength ``tx_per_step`` whose quality follows X_t.  A
    referrer-profile referrer accumulates its own observations of the
    provider and reports them through :func:`make_report`; the Rumor profile
    exaggerates its current step's fresh experience once it switches, which
    is what makes its inflated claims checkable against the client's
    observations.

    Per step: the referral is generated, the client forms its prediction by
    discounting the referral with its current trust in the referrer
    (concatenation), observes ``tx_per_step`` transactions, and updates the
    referrer trust (prior ⟨1, 1⟩) with ``config.method``.
    """
    rng_behavior, rng_referrer, rng_client = _streams(config.seed, 3)
    ucfg = UpdateConfig(method=config.method, beta=config.beta)
    trust = ucfg.referrer_prior

    profile_driven = isinstance(
        referrer_behavior, (Probability, Periodic, Damping, Random, RandomWalk, Momentum)
    )
    if profile_driven:
        profile = referrer_behavior
        if isinstance(profile, Damping) and config.horizon is not None:
            profile = replace(profile, horizon=config.horizon)
        xs = behavior_sequence(profile, rng_behavior, config.timesteps)
    accumulated = Evidence(0.0, 0.0)

    records: List[TimestepRecord] = []
    for t in range(1, config.timesteps + 1):
        if profile_driven:
            x = xs[t - 1]
            m = float(config.tx_per_step)
            report = Evidence(m * x, m * (1.0 - x))
        else:
            fresh = sample_transactions(
                config.provider_quality, config.referrer_tx_per_step, rng_referrer
            )
            accumulated = accumulated + fresh
            base = fresh if isinstance(referrer_behavior, Rumor) and t > referrer_behavior.switch_step else accumulated
            report = make_report(referrer_behavior, base, t)

        predicted = from_belief(concatenate(to_belief(trust), to_belief(report)))
        observed = sample_transactions(config.provider_quality, config.tx_per_step, rng_client)
        trust = update_referrer(ucfg, observed, report, trust)
        records.append(
            TimestepRecord(
                t=t,
                predicted=predicted,
                observed=observed,
                alpha_pred=expected_quality(predicted),
                alpha_obs=expected_quality(observed),
                trust_state=trust,
                certainty_pred=certainty(predicted),
            )
        )
    return records


@dataclass(frozen=True)
class CombinationResult:
    """Combined-estimate series plus both referrer trust trajectories."""

    records: List[TimestepRecord]
    good_trust: List[Evidence]
    corrupted_trust: List[Evidence]
    switch_step: int


def run_combination_experiment(
    config: ExperimentConfig,
    switch_step: int = 50,
) -> CombinationResult:
    """Two referrers, one good throughout and one corrupted mid-run, feed a
    combined estimate of one provider.

    Both referrers observe the provider themselves (``tx_per_step``
    transactions per step) and report their accumulated experience.  After
    ``switch_step`` the corrupted referrer turns malicious: it reports pure
    negative evidence with the full claimed weight of its experience, the
    over-confident defamation that certainty-weighted combination is supposed
    to neutralize.  Each step the client combines the two discounted reports
    into its estimate (recorded as the prediction), observes its own
    transactions, and updates both referrer trusts independently.

    The returned records carry the corrupted referrer's trust in
    ``trust_state``; both full trust trajectories ride alongside.
    """
    rng_good, rng_bad, rng_client = _streams(config.seed, 3)
    ucfg = UpdateConfig(method=config.method, beta=config.beta)
    trust_good = ucfg.referrer_prior
    trust_bad = ucfg.referrer_prior
    exp_good = Evidence(0.0, 0.0)
    exp_bad = Evidence(0.0, 0.0)

    records: List[TimestepRecord] = []
    goods: List[Evidence] = []
    bads: List[Evidence] = []
    for t in range(1, config.timesteps + 1):
        exp_good = exp_good + sample_transactions(
            config.provider_quality, config.tx_per_step, rng_good
        )
        exp_bad = exp_bad + sample_transactions(
            config.provider_quality, config.tx_per_step, rng_bad
        )
        report_good = exp_good
        if t > switch_step:
            report_bad = Evidence(0.0, exp_bad.total)
        else:
            report_bad = exp_bad

        estimate = combine_referrals(
            [
                ReferralPath(to_belief(trust_good), report_good),
                ReferralPath(to_belief(trust_bad), report_bad),
            ]
        )
        observed = sample_transactions(config.provider_quality, config.tx_per_step, rng_client)
        trust_good = update_referrer(ucfg, observed, report_good, trust_good)
        trust_bad = update_referrer(ucfg, observed, report_bad, trust_bad)

        goods.append(trust_good)
        bads.append(trust_bad)
        records.append(
            TimestepRecord(
                t=t,
                predicted=estimate,
                observed=observed,
                alpha_pred=expected_quality(estimate),
                alpha_obs=expected_quality(observed),
                trust_state=trust_bad,
                certainty_pred=certainty(estimate),
            )
        )
    return CombinationResult(records, goods, bads, switch_step)


def run_history_experiment(
    config: ExperimentConfig,
    profile: BehaviorProfile,
    mode: HistoryMode,
) -> List[TimestepRecord]:
    """Predict a profiled provider from its own discounted history.

    Per step the client observes ``tx_per_step`` transactions at the
    profile's X_t.  The prediction for the step is the expected quality of
    the evidence carried *before* observing.  The carried evidence then
    updates per mode: Amazon keeps everything; FixedBeta retains a (1−β)
    fraction; TrustInHistory lets :func:`history_update` set the retention
    from the consistency of the new observation with the history (initial
    history trust ⟨0.9, 0.1⟩).

    The record's ``discount`` column holds the history retention weight used
    that step (1 for Amazon, 1−β for FixedBeta, the adaptive weight for
    TrustInHistory); ``trust_state`` holds the history trust for
    TrustInHistory and the carried evidence otherwise.
    """
    mode = HistoryMode(mode)
    rng_behavior, rng_tx = _streams(config.seed, 2)
    prof = profile
    if isinstance(prof, Damping) and config.horizon is not None:
        prof = replace(prof, horizon=config.horizon)
    xs = behavior_sequence(prof, rng_behavior, config.timesteps)

    carried = Evidence(0.0, 0.0)
    state = HistoryState()
    records: List[TimestepRecord] = []
    for t in range(1, config.timesteps + 1):
        observed = sample_transactions(xs[t - 1], config.tx_per_step, rng_tx)
        predicted = state.carried if mode is HistoryMode.TRUST_IN_HISTORY else carried
        alpha_pred = expected_quality(predicted)
        cert_pred = certainty(predicted)

        if mode is HistoryMode.AMAZON:
            carried = carried + observed
            retention = 1.0
            trust_state = carried
        elif mode is HistoryMode.FIXED_BETA:
            carried = carried.scaled(1.0 - config.beta) + observed
            retention = 1.0 - config.beta
            trust_state = carried
        else:
            upd = history_update(state, observed)
            state = upd.state
            retention = upd.discount
            trust_state = state.history_trust

        records.append(
            TimestepRecord(
                t=t,
                predicted=predicted,
                observed=observed,
                alpha_pred=alpha_pred,
                alpha_obs=expected_quality(observed),
                trust_state=trust_state,
                certainty_pred=cert_pred,
                discount=retention,
            )
        )
    return records

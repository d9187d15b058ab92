"""Trust propagation through referral paths.

Two operators move trust through a referral network:

* concatenation discounts a referrer's report by the client's belief in the
  referrer:  ⟨b_R, d_R, u_R⟩ ⊗ ⟨b′, d′, u′⟩ = ⟨b_R·b′, b_R·d′, 1 − b_R·b′ − b_R·d′⟩
* aggregation sums evidence from independent paths componentwise.

Concatenation lives in belief space and aggregation in evidence space, so
:func:`combine_referrals` converts each report to a belief, discounts it,
converts the result back to evidence, and sums.  Paths are assumed mutually
independent (non-overlapping); detecting overlap is out of scope here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import Belief, Evidence, from_belief, to_belief
from .numerics import DEFAULT_TOLERANCE, Tolerance

__all__ = ["ReferralPath", "concatenate", "aggregate", "combine_referrals"]


@dataclass(frozen=True)
class ReferralPath:
    """One independent path: the client's trust in a referrer plus that
    referrer's reported evidence about the provider."""

    referrer_trust: Belief
    report: Evidence


def concatenate(m_r: Belief, m_s: Belief) -> Belief:
    """Discount a report m_s by the belief component of m_r.

    Only the belief mass b_R of the referrer trust scales the report; the
    rest of the report's mass moves to uncertainty.  Full belief (b_R = 1)
    passes the report through unchanged; zero belief yields total
    uncertainty.
    """
    b = m_r.b * m_s.b
    d = m_r.b * m_s.d
    return Belief(b, d, 1.0 - b - d)


def aggregate(e1: Evidence, e2: Evidence) -> Evidence:
    """Sum independent evidence componentwise: associative and commutative."""
    return Evidence(e1.r + e2.r, e1.s + e2.s)


def combine_referrals(
    paths: Iterable[ReferralPath],
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> Evidence:
    """Combine independent referral paths into one evidence estimate.

    Each report is discounted by the client's trust in its referrer
    (concatenation in belief space), mapped back to evidence, and the
    per-path evidence is aggregated.  The result is permutation-invariant in
    the path list.
    """
    paths = list(paths)
    if not paths:
        raise ValueError("combine_referrals requires at least one referral path")
    combined = Evidence(0.0, 0.0)
    for path in paths:
        discounted = concatenate(path.referrer_trust, to_belief(path.report, tol))
        combined = aggregate(combined, from_belief(discounted, tol))
    return combined

"""Evidence- and belief-space trust values and the certainty functional.

A trust value in evidence space is a pair ⟨r, s⟩ of non-negative real counts
of positive and negative outcomes.  Conditioning a uniform prior on that
evidence gives the density

    f(x) = xʳ(1−x)ˢ / B(r+1, s+1)      for x in [0, 1],

the probability that the subject's true quality is x.  The certainty of the
evidence is half the L1 distance between f and the uniform density:

    c(r, s) = ½ ∫₀¹ |f(x) − 1| dx,

which is 0 for ⟨0, 0⟩ (uniform), grows with the amount of evidence at a fixed
conflict ratio, and shrinks as conflict grows at a fixed total.  Because f is
normalized, c equals the mass of f above 1 minus the width of the region
where f exceeds 1, which is how :func:`certainty` evaluates it (two unit
crossings plus two incomplete-beta evaluations) instead of integrating |f−1|
directly.

The belief-space view is a triple ⟨b, d, u⟩ (belief, disbelief, uncertainty)
summing to 1.  The two views are linked by α = r/(r+s) and c:

    b = α·c,   d = (1−α)·c,   u = 1 − c.

The inverse direction fixes α and searches for the evidence total that
reproduces the certainty 1−u; certainty is strictly increasing in the total
at fixed α, so bisection is exact in the limit.

All types are immutable and all functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError
from .numerics import (
    DEFAULT_TOLERANCE,
    Tolerance,
    find_unit_crossings,
    log_beta,
    regularized_incomplete_beta,
)

__all__ = [
    "Evidence",
    "Belief",
    "expected_quality",
    "pcdf",
    "certainty",
    "to_belief",
    "from_belief",
    "MAX_EVIDENCE_TOTAL",
]

# from_belief searches totals in [0, MAX_EVIDENCE_TOTAL]; larger totals are
# out of supported range (their certainty is indistinguishable from 1 anyway).
MAX_EVIDENCE_TOTAL = 1e6

_BELIEF_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Evidence:
    """Trust as evidence: ⟨r, s⟩ positive/negative outcome counts.

    Counts are real-valued: discounting and certainty weighting produce
    fractional evidence as a matter of course.
    """

    r: float
    s: float

    def __post_init__(self):
        r, s = float(self.r), float(self.s)
        if not (math.isfinite(r) and math.isfinite(s)):
            raise ValueError(f"evidence counts must be finite, got r={self.r}, s={self.s}")
        if r < 0 or s < 0:
            raise ValueError(f"evidence counts must be non-negative, got r={self.r}, s={self.s}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)

    @property
    def total(self) -> float:
        return self.r + self.s

    def scaled(self, factor: float) -> "Evidence":
        """Componentwise scaling; factor must be non-negative."""
        return Evidence(self.r * factor, self.s * factor)

    def __add__(self, other: "Evidence") -> "Evidence":
        return Evidence(self.r + other.r, self.s + other.s)

    def to_dict(self) -> dict:
        return {"r": self.r, "s": self.s}


@dataclass(frozen=True)
class Belief:
    """Trust as a belief mass triple ⟨b, d, u⟩ with b + d + u = 1.

    Components may be exactly 0 (discounting by a fully distrusted source
    produces them); the sum constraint is enforced to 1e-9.
    """

    b: float
    d: float
    u: float

    def __post_init__(self):
        b, d, u = float(self.b), float(self.d), float(self.u)
        for name, v in (("b", b), ("d", d), ("u", u)):
            if not math.isfinite(v):
                raise ValueError(f"belief component {name} must be finite, got {v}")
            if v < -_BELIEF_SUM_TOL:
                raise ValueError(f"belief component {name} must be non-negative, got {v}")
        if abs(b + d + u - 1.0) > _BELIEF_SUM_TOL:
            raise ValueError(f"belief components must sum to 1, got {b + d + u}")
        object.__setattr__(self, "b", max(b, 0.0))
        object.__setattr__(self, "d", max(d, 0.0))
        object.__setattr__(self, "u", max(u, 0.0))

    @property
    def certainty(self) -> float:
        return 1.0 - self.u

    def to_dict(self) -> dict:
        return {"b": self.b, "d": self.d, "u": self.u}


def expected_quality(e: Evidence) -> float:
    """Expected probability of a positive outcome: r/(r+s), or 0.5 with no evidence."""
    if e.total == 0:
        return 0.5
    return e.r / e.total


def _log_pcdf(r: float, s: float, x: float) -> float:
    """log f(x) for the evidence density, with the 0·log(0) := 0 convention.

    Well-defined on the closed interval [0, 1]; returns -inf where the
    density vanishes (endpoints with a positive exponent on that side).
    """
    acc = -log_beta(r + 1.0, s + 1.0)
    if r > 0.0:
        acc += r * math.log(x) if x > 0.0 else -math.inf
    if s > 0.0:
        acc += s * math.log1p(-x) if x < 1.0 else -math.inf
    return acc


def pcdf(e: Evidence, x: float) -> float:
    """The evidence density f(x) = xʳ(1−x)ˢ / B(r+1, s+1), for x in (0, 1).

    Computed in log space so totals up to 1e6 neither overflow nor underflow
    prematurely.  Integrates to 1 over [0, 1]; uniform when there is no
    evidence.
    """
    if not (0.0 < x < 1.0):
        raise ValueError(f"pcdf is defined on the open interval (0, 1), got x={x}")
    return math.exp(_log_pcdf(e.r, e.s, x))


def certainty(e: Evidence, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Certainty c(r, s) = ½ ∫₀¹ |f(x) − 1| dx, in [0, 1).

    Evaluated as the mass of f above the uniform density minus the width of
    the region where f exceeds 1.  The region boundaries are the unit
    crossings of f around its peak at r/(r+s); one-sided evidence pins the
    region to the matching endpoint.
    """
    if e.total == 0:
        return 0.0
    r, s = e.r, e.s
    # The peak location can round onto an endpoint (s/r below ~1e-17) where
    # the log density is -inf although the density is large just inside;
    # evaluate at the nearest interior float instead.
    peak = min(max(r / (r + s), 5e-324), math.nextafter(1.0, 0.0))

    def log_density(x: float) -> float:
        return _log_pcdf(r, s, x)

    if log_density(peak) <= 0.0:
        # Density never rises above uniform; only possible for tiny totals.
        return 0.0

    roots = find_unit_crossings(log_density, peak, tol)
    lo = next((x for x in roots if x < peak), 0.0)
    hi = next((x for x in roots if x > peak), 1.0)

    mass = regularized_incomplete_beta(hi, r + 1.0, s + 1.0) - regularized_incomplete_beta(
        lo, r + 1.0, s + 1.0
    )
    c = mass - (hi - lo)
    return min(max(c, 0.0), 1.0 - 1e-15)


def to_belief(e: Evidence, tol: Tolerance = DEFAULT_TOLERANCE) -> Belief:
    """Evidence → belief: ⟨α·c, (1−α)·c, 1−c⟩ with α the expected quality."""
    alpha = expected_quality(e)
    c = certainty(e, tol)
    return Belief(alpha * c, (1.0 - alpha) * c, 1.0 - c)


def from_belief(t: Belief, tol: Tolerance = DEFAULT_TOLERANCE) -> Evidence:
    """Belief → evidence: invert :func:`to_belief` by bisecting on the total.

    The returned evidence satisfies expected_quality = b/(b+d) and
    certainty = 1−u to within 1e-9.  A fully uncertain belief (u = 1) maps
    to ⟨0, 0⟩.  Raises :class:`ConvergenceError` if no total in
    [0, MAX_EVIDENCE_TOTAL] reaches the target certainty.
    """
    target = t.certainty
    if target <= 0.0:
        return Evidence(0.0, 0.0)
    alpha = t.b / (t.b + t.d)

    def cert_at(total: float) -> float:
        return certainty(Evidence(alpha * total, (1.0 - alpha) * total), tol)

    lo, hi = 0.0, MAX_EVIDENCE_TOTAL
    c_hi = cert_at(hi)
    if c_hi < target - 1e-9:
        raise ConvergenceError(
            f"no evidence total in [0, {MAX_EVIDENCE_TOTAL:g}] reaches certainty {target}",
            best_estimate=c_hi,
        )
    total = hi
    for _ in range(200):
        total = 0.5 * (lo + hi)
        c_mid = cert_at(total)
        if abs(c_mid - target) <= 1e-9:
            break
        if c_mid < target:
            lo = total
        else:
            hi = total
        if hi - lo <= 1e-12 * max(1.0, lo):
            total = 0.5 * (lo + hi)
            break
    return Evidence(alpha * total, (1.0 - alpha) * total)

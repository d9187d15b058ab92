import math

from evitrust.core import _log_pcdf
from evitrust.numerics import Tolerance, integrate


def certainty_by_quadrature(r: float, s: float, abs_tol: float = 1e-9) -> float:
    """Independent certainty oracle: direct quadrature of ½∫|f(x) − 1|dx.

    Splits the integral at landmarks around the density peak (found by
    bisecting the log density for fixed drop-offs) so the adaptive rule sees
    a narrow spike; shares no code with the incomplete-beta route it checks.
    """
    total = r + s
    if total == 0:
        return 0.0
    peak = r / total
    log_peak = _log_pcdf(r, s, peak)

    def flank_right(drop: float) -> float:
        if _log_pcdf(r, s, 1.0) - log_peak >= -drop:
            return 1.0
        lo, hi = peak, 1.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if (_log_pcdf(r, s, mid) - log_peak) < -drop:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    def flank_left(drop: float) -> float:
        if _log_pcdf(r, s, 0.0) - log_peak >= -drop:
            return 0.0
        lo, hi = 0.0, peak
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if (_log_pcdf(r, s, mid) - log_peak) < -drop:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    cuts = sorted({0.0, 1.0, peak, flank_left(3.0), flank_left(45.0),
                   flank_right(3.0), flank_right(45.0)})

    def integrand(x: float) -> float:
        lf = _log_pcdf(r, s, x)
        f = math.exp(lf) if lf > -745.0 else 0.0
        return abs(f - 1.0)

    tol = Tolerance(abs_tol=abs_tol, max_subdivisions=40)
    value = sum(integrate(integrand, a, b, tol) for a, b in zip(cuts, cuts[1:]) if b > a)
    return 0.5 * value

"""Certified evaluation of the perimeter series, plus the quadrature oracle.

Everything numeric here runs in mpmath extended precision (50 significant
digits by default, more when a tolerance demands it).  Enclosures are
produced the same way throughout: a partial sum of a positive-term series,
a closed-form bound on the omitted tail, and an explicit forward-error
term for the floating arithmetic itself, so

    lo = S - fp_err      hi = S + tail_bound + fp_err

is guaranteed to bracket the true value of the series at the represented
argument.  Two tail bounds are available for B(x) = sum B_n x^n:

  * geometric: the term ratio is ((2n-1)/(2n+2))^2 * x <= x, so the tail
    after N is at most B_(N+1) x^(N+1) / (1 - x) for x < 1;
  * slow-convergence: C(2n,n)/4^n <= 1/sqrt(pi n) gives
    B_n <= 1/(pi n (2n-1)^2) <= 1/(4 pi (n-1)^3), hence for any x <= 1 the
    tail after N is at most 1/(8 pi (N - 1/2)^2).

The engine always uses the smaller of the two, which makes the x = 1
endpoint (where the series converges like 1/n^3) work without a separate
code path.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp

from .series_kernel import b_coeffs_upto, delta_coeffs_upto

__all__ = [
    "WORKING_DPS",
    "ToleranceFloorError",
    "QuadratureBudgetError",
    "Enclosure",
    "Ellipse",
    "lambda_from_eccentricity",
    "eccentricity_from_lambda",
    "eval_A",
    "eval_B",
    "ivory_integral",
    "perimeter",
    "perimeter_ramanujan",
    "discrepancy",
    "discrepancy_ratio",
    "theta_of_lambda",
]

WORKING_DPS = 50

# regime of the series evaluation, recorded on every enclosure
GEOMETRIC_TAIL = "geometric-tail"
SLOW_TAIL = "slow-convergence-tail"
EXACT_POINT = "exact"


class ToleranceFloorError(ValueError):
    """Requested tolerance is below what the term budget can certify."""


class QuadratureBudgetError(RuntimeError):
    """Adaptive quadrature did not reach tolerance within its panel budget."""


def _as_mpf(v):
    """Convert to mpf at the current precision; Fractions round once, here."""
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    return mp.mpf(v)


def _exact_fraction(v) -> Fraction:
    """Exact rational value of an int/float/Fraction/mpf (no rounding)."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, float)):
        return Fraction(v)
    if not hasattr(v, "_mpf_"):
        v = mp.mpf(v)
    sign, man, exp, _bc = v._mpf_
    if man == 0 and exp != 0:  # inf or nan
        raise ValueError(f"cannot take exact value of {v!r}")
    fr = Fraction(man) * Fraction(2) ** exp
    return -fr if sign else fr


def _dps_for_tol(tol: float) -> int:
    need = -mp.log10(mp.mpf(tol)) if tol < 1 else mp.mpf(0)
    return max(WORKING_DPS, int(need) + 16)


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] certified to contain a true real value."""

    lo: object  # mpf
    hi: object  # mpf
    regime: str = ""

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure: [{self.lo}, {self.hi}]")

    @property
    def width(self):
        with mp.workdps(max(mp.dps, WORKING_DPS + 10)):
            return self.hi - self.lo

    @property
    def mid(self):
        with mp.workdps(max(mp.dps, WORKING_DPS + 10)):
            return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        """Exact containment: endpoints and value compared as rationals."""
        v = _exact_fraction(value)
        return _exact_fraction(self.lo) <= v <= _exact_fraction(self.hi)

    def __repr__(self) -> str:
        return f"Enclosure([{mp.nstr(self.lo, 20)}, {mp.nstr(self.hi, 20)}], regime={self.regime!r})"


def _scaled(enc: Enclosure, c, regime: str | None = None) -> Enclosure:
    """Enclosure multiplied by a positive scalar, widened for the rounding."""
    c = _as_mpf(c)
    if c <= 0:
        raise ValueError("scale factor must be positive")
    u = mp.mpf(10) ** (1 - mp.dps)
    lo = enc.lo * c
    hi = enc.hi * c
    pad = 8 * u * abs(hi)
    return Enclosure(lo - pad, hi + pad, regime if regime is not None else enc.regime)


class Ellipse:
    """Semi-axes with the derived shape parameters.

    Construction normalizes a >= b (swapping if given reversed, and
    recording the swap), computes lam = (a-b)/(a+b) and the eccentricity
    sqrt(1 - (b/a)^2).  A degenerate b = 0 is accepted (lam = ecc = 1).
    """

    __slots__ = ("a", "b", "lam", "ecc", "swapped")

    def __init__(self, a, b):
        with mp.workdps(WORKING_DPS):
            am, bm = _as_mpf(a), _as_mpf(b)
            if not (mp.isfinite(am) and mp.isfinite(bm)):
                raise ValueError("semi-axes must be finite")
            if am < 0 or bm < 0:
                raise ValueError("semi-axes must be nonnegative")
            swapped = bm > am
            if swapped:
                am, bm = bm, am
            if am <= 0:
                raise ValueError("the major semi-axis must be positive")
            self.a = am
            self.b = bm
            self.swapped = swapped
            self.lam = (am - bm) / (am + bm)
            r = bm / am
            self.ecc = mp.sqrt((1 - r) * (1 + r))

    @classmethod
    def from_eccentricity(cls, a, e) -> "Ellipse":
        with mp.workdps(WORKING_DPS):
            em = _as_mpf(e)
            if not 0 <= em <= 1:
                raise ValueError("eccentricity must lie in [0, 1]")
            am = _as_mpf(a)
            return cls(am, am * mp.sqrt((1 - em) * (1 + em)))

    def __repr__(self) -> str:
        return f"Ellipse(a={mp.nstr(self.a, 12)}, b={mp.nstr(self.b, 12)})"


def lambda_from_eccentricity(e):
    """lam = e^2 / (1 + sqrt(1 - e^2))^2; stable for small e."""
    with mp.workdps(WORKING_DPS):
        em = _as_mpf(e)
        if not 0 <= em <= 1:
            raise ValueError("eccentricity must lie in [0, 1]")
        return em**2 / (1 + mp.sqrt((1 - em) * (1 + em))) ** 2


def eccentricity_from_lambda(lam):
    """Inverse map, from e^2 = 4 lam / (1 + lam)^2."""
    with mp.workdps(WORKING_DPS):
        lm = _as_mpf(lam)
        if not 0 <= lm <= 1:
            raise ValueError("lam must lie in [0, 1]")
        return 2 * mp.sqrt(lm) / (1 + lm)


def eval_A(x):
    """Closed-form 1 + 3x/(10 + sqrt(4 - 3x)) at working precision.

    The radicand 4 - 3x stays >= 1 on the domain, so the evaluation is a
    few well-conditioned operations; the result is correct to a few ulp.
    """
    with mp.workdps(WORKING_DPS):
        xm = _as_mpf(x)
        if not 0 <= xm <= 1:
            raise ValueError("x must lie in [0, 1]")
        return 1 + 3 * xm / (10 + mp.sqrt(4 - 3 * xm))


def _slow_tail_bound(n: int):
    # sum_{k > n} B_k x^k <= sum_{k > n} B_k <= 1/(8 pi (n - 1/2)^2), n >= 2
    return 1 / (8 * mp.pi * mp.mpf(n - 0.5) ** 2)


def _tail_clearly_unreachable(xf: float, tol: float, max_terms: int) -> bool:
    """Cheap float screen: True only when no N <= max_terms can reach 2*tol.

    The float bounds here slightly undercut the rigorous ones, so a True
    answer (both bounds above 2*tol at the budget) proves the rigorous
    loop could not have closed at tol; a False answer defers to the loop.
    """
    slow = 1.0 / (8.0 * math.pi * (max_terms - 0.5) ** 2)
    if slow <= 2.0 * tol:
        return False
    if xf >= 1.0:
        return True
    if xf == 0.0:
        return False  # the series terminates immediately
    # geometric bound at the budget: B_(N+1) x^(N+1) / (1-x)
    n = max_terms
    log_geo = (n + 1) * math.log(xf) - math.log(4.0 * math.pi * (n + 1) ** 3) - math.log1p(-xf)
    return log_geo > math.log(2.0 * tol)


def eval_B(x, tol: float = 1e-12, max_terms: int = 250_000) -> Enclosure:
    """Enclosure of B(x) = sum_n [C(2n,n)/(4^n (2n-1))]^2 x^n, width <= tol.

    Terms are generated by the exact ratio B_(n+1)/B_n = ((2n-1)/(2n+2))^2;
    the loop stops as soon as the smaller of the geometric and the
    slow-convergence tail bound (plus the floating-error allowance) fits
    inside ``tol``.  Near x = 1 the geometric bound degrades like 1/(1-x)
    and the slow-convergence bound takes over; the returned enclosure
    records which regime closed it.  Raises ToleranceFloorError when the
    term budget cannot reach ``tol`` (the floor at x = 1 is about
    1/(8 pi max_terms^2)).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    xf = float(x)
    if 0.0 <= xf <= 1.0 and _tail_clearly_unreachable(xf, tol, max_terms):
        raise ToleranceFloorError(
            f"tol={tol} not certifiable within {max_terms} terms at x={xf} "
            f"(achievable floor here is about {1.0 / (8.0 * math.pi * (max_terms - 0.5) ** 2):.3g})"
        )
    dps = _dps_for_tol(tol)
    with mp.workdps(dps):
        xm = _as_mpf(x)
        if not 0 <= xm <= 1:
            raise ValueError("x must lie in [0, 1]")
        tol_m = mp.mpf(tol)
        one_minus = 1 - xm
        u = mp.mpf(10) ** (1 - dps)
        term = mp.mpf(1)
        s = mp.mpf(0)
        n = 0
        while n <= max_terms:
            s += term
            nxt = term * (mp.mpf(2 * n - 1) / (2 * n + 2)) ** 2 * xm
            if n < 64 or n % 16 == 0 or n == max_terms:
                tail = None
                regime = None
                if one_minus > 0:
                    tail = nxt / one_minus
                    regime = GEOMETRIC_TAIL
                if n >= 2:
                    slow = _slow_tail_bound(n)
                    if tail is None or slow < tail:
                        tail = slow
                        regime = SLOW_TAIL
                if tail is not None:
                    # fp_err covers the summation; the term recurrence's own
                    # accumulated rounding (~5n*u relative on nxt) is orders
                    # below the geometric bound's intrinsic slack, since the
                    # true term ratio ((2n-1)/(2n+2))^2 x sits strictly under
                    # the x used by the bound
                    fp_err = 8 * (n + 4) * u * s
                    if tail * (1 + 16 * u) + 2 * fp_err <= tol_m:
                        return Enclosure(
                            s - fp_err, s + tail * (1 + 16 * u) + fp_err, regime
                        )
            term = nxt
            n += 1
        floor = _slow_tail_bound(max_terms)
        raise ToleranceFloorError(
            f"tol={tol} not certifiable within {max_terms} terms at x={mp.nstr(xm, 10)} "
            f"(achievable floor here is about {mp.nstr(floor, 5)})"
        )


# fixed-order Gauss-Legendre rule used on every adaptive panel
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)
_GL_PAIRS = list(zip(_GL_NODES.tolist(), _GL_WEIGHTS.tolist()))


def _gauss_panel(f, a: float, b: float) -> float:
    h = 0.5 * (b - a)
    c = 0.5 * (a + b)
    return h * math.fsum(w * f(c + h * t) for t, w in _GL_PAIRS)


def ivory_integral(x, tol: float = 1e-12, max_panels: int = 4096) -> float:
    """(1/pi) * integral_0^pi sqrt(1 + 2 sqrt(x) cos(2 phi) + x) dphi.

    Adaptive bisection with a 15-point Gauss rule per panel and an
    absolute-error target. The integrand is analytic for x < 1; at x = 1
    it degenerates to 2|cos(phi)|, so the domain is pre-split at pi/2 to
    keep each panel smooth.  This is the quadrature route to the same
    number eval_B produces from the series.
    """
    xf = float(x)
    if not 0.0 <= xf <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    rx = math.sqrt(xf)

    def integrand(phi: float) -> float:
        v = 1.0 + 2.0 * rx * math.cos(2.0 * phi) + xf
        return math.sqrt(v) if v > 0.0 else 0.0

    half = 0.5 * math.pi
    stack = [(0.0, half), (half, math.pi)] if xf == 1.0 else [(0.0, math.pi)]
    span = math.pi
    total = 0.0
    panels = 0
    while stack:
        a, b = stack.pop()
        panels += 1
        if panels > max_panels:
            raise QuadratureBudgetError(
                f"did not reach tol={tol} within {max_panels} panels at x={xf}"
            )
        whole = _gauss_panel(integrand, a, b)
        m = 0.5 * (a + b)
        halves = _gauss_panel(integrand, a, m) + _gauss_panel(integrand, m, b)
        if abs(halves - whole) <= tol * (b - a) / span:
            total += halves
        else:
            stack.append((a, m))
            stack.append((m, b))
    return total / math.pi


def perimeter(ellipse: Ellipse, tol: float | None = None, max_terms: int = 250_000) -> Enclosure:
    """Enclosure of the true perimeter pi*(a+b)*B(((a-b)/(a+b))^2).

    Default tolerance is 1e-12; when lam^2 > 0.999 the series is in its
    slow-convergence regime and the default widens to 1e-6 (the certified
    floor there is set by ``max_terms``).  An explicit ``tol`` is honored
    or rejected with ToleranceFloorError, never silently loosened.
    """
    with mp.workdps(WORKING_DPS):
        x = ellipse.lam**2
    if tol is None:
        tol = 1e-12 if float(x) <= 0.999 else 1e-6
    if tol <= 0:
        raise ValueError("tol must be positive")
    dps = _dps_for_tol(tol)
    with mp.workdps(dps):
        prefactor = mp.pi * (ellipse.a + ellipse.b)
        inner_tol = mp.mpf(tol) / prefactor * mp.mpf("0.9")
        enc = eval_B(x, float(inner_tol), max_terms)
        return _scaled(enc, prefactor)


def perimeter_ramanujan(ellipse: Ellipse):
    """Ramanujan's closed-form approximation, evaluated directly:

        pi * [ (a+b) + 3(a-b)^2 / (10(a+b) + sqrt(a^2 + 14ab + b^2)) ].

    Algebraically identical to pi*(a+b)*A(((a-b)/(a+b))^2); both forms are
    exposed so the identity can be checked, and they agree to a few ulp of
    working precision.
    """
    with mp.workdps(WORKING_DPS):
        a, b = ellipse.a, ellipse.b
        root = mp.sqrt(a * a + 14 * a * b + b * b)
        return mp.pi * ((a + b) + 3 * (a - b) ** 2 / (10 * (a + b) + root))


class _MpfCoefficientCache:
    """Per-precision mpf images of the exact delta_n and B_n tables."""

    def __init__(self):
        self._lock = threading.Lock()
        self._store: dict[int, tuple[list, list]] = {}

    def get(self, dps: int, n_max: int):
        with self._lock:
            deltas, bs = self._store.get(dps, ([], []))
            if len(deltas) <= n_max:
                exact_d = delta_coeffs_upto(n_max + 1)
                exact_b = b_coeffs_upto(n_max + 1)
                with mp.workdps(dps):
                    for n in range(len(deltas), n_max + 2):
                        d = exact_d[n]
                        deltas.append(mp.mpf(d.numerator) / d.denominator)
                        bb = exact_b[n]
                        bs.append(mp.mpf(bb.numerator) / bb.denominator)
                self._store[dps] = (deltas, bs)
            return deltas, bs


_MPF_COEFFS = _MpfCoefficientCache()


def _estimate_delta_terms(xf: float, tol: float, max_terms: int) -> int | None:
    """Smallest N whose tail bound (float estimate) is within tol/2."""
    log_x = math.log(xf) if xf < 1.0 else 0.0
    for n in range(6, max_terms + 1):
        # pi rounded down so the float estimate overstates the true bound
        slow = 1.0 / (8.0 * 3.141592 * (n - 0.5) ** 2)
        best = slow
        if xf < 1.0:
            # B_(n+1) x^(n+1) / (1-x), with B_(n+1) ~ 1/(4 pi (n+1)^3)
            log_geo = (n + 1) * log_x - math.log(4.0 * math.pi * (n + 1) ** 3) - math.log1p(-xf)
            if log_geo < math.log(best):
                best = math.exp(log_geo)
        if best <= 0.5 * tol:
            return n
    return None


def _default_delta_tol(xf: float, max_terms: int) -> float:
    """Width target tracking Delta's own magnitude, floored by the budget."""
    est = 2.288818359375e-5 * xf**5  # delta_5 x^5, a lower bound for Delta
    floor = 1.0 / (8.0 * math.pi * (max_terms - 0.5) ** 2)
    if xf < 1.0:
        lg = (max_terms + 1) * math.log(xf) - math.log(
            4.0 * math.pi * (max_terms + 1) ** 3
        ) - math.log1p(-xf)
        floor = min(floor, math.exp(lg))
    return max(est * 1e-9, 3.0 * floor)


def discrepancy(x, tol: float | None = None, max_terms: int = 6000) -> Enclosure:
    """Enclosure of Delta(x) = B(x) - A(x) for 0 < x <= 1.

    Evaluated from the difference series sum_{n>=5} delta_n x^n with exact
    cached coefficients, which avoids the cancellation a literal B - A
    subtraction would suffer (Delta(x) ~ (3/2^17) x^5 near 0).  The tail
    obeys the same two bounds as eval_B since 0 < delta_n < B_n.  The
    default tolerance tracks the magnitude of Delta itself (about nine
    significant digits), floored by what ``max_terms`` can certify near
    x = 1.
    """
    xf = float(x)
    if not 0 < xf <= 1:
        raise ValueError("x must lie in (0, 1]")
    est = 2.288818359375e-5 * xf**5
    if tol is None:
        tol = _default_delta_tol(xf, max_terms)
    if tol <= 0:
        raise ValueError("tol must be positive")
    n_terms = _estimate_delta_terms(xf, tol, max_terms)
    if n_terms is None:
        raise ToleranceFloorError(
            f"tol={tol} not certifiable within {max_terms} difference terms at x={xf}"
        )
    dps = _dps_for_tol(tol)
    deltas, bs = _MPF_COEFFS.get(dps, n_terms + 1)
    with mp.workdps(dps):
        xm = _as_mpf(x)
        if not 0 < xm <= 1:
            raise ValueError("x must lie in (0, 1]")
        u = mp.mpf(10) ** (1 - dps)
        xp = xm**5
        s = mp.mpf(0)
        for n in range(5, n_terms + 1):
            s += deltas[n] * xp
            xp *= xm
        # xp is now x^(n_terms+1)
        tail = _slow_tail_bound(n_terms)
        regime = SLOW_TAIL
        if xm < 1:
            geo = bs[n_terms + 1] * xp / (1 - xm)
            if geo < tail:
                tail = geo
                regime = GEOMETRIC_TAIL
        fp_err = 8 * (n_terms + 4) * u * (s + est)
        hi = s + tail * (1 + 16 * u) + fp_err
        lo = s - fp_err
        if hi - lo > mp.mpf(tol) * (1 + mp.mpf("1e-6")):
            raise ToleranceFloorError(
                f"tail bound {mp.nstr(tail, 5)} at N={n_terms} exceeds tol={tol} at x={xf}"
            )
        return Enclosure(lo, hi, regime)


def discrepancy_ratio(x, tol: float | None = None, max_terms: int = 6000) -> Enclosure:
    """Enclosure of Delta(x)/x^5, the normalized discrepancy.

    This quantity decreases to delta_5 = 3/2^17 as x -> 0 and climbs to
    4/pi - 14/11 at x = 1.  ``tol`` is the target width of the ratio.
    """
    xf = float(x)
    if not 0 < xf <= 1:
        raise ValueError("x must lie in (0, 1]")
    inner = tol * xf**5 if tol is not None else _default_delta_tol(xf, max_terms)
    if inner == 0.0:  # float underflow at extreme x; fall back to the default
        inner = _default_delta_tol(xf, max_terms)
    enc = discrepancy(x, inner, max_terms)
    with mp.workdps(_dps_for_tol(inner)):
        xm = _as_mpf(x)
        return _scaled(enc, 1 / xm**5)


def theta_of_lambda(lam, tol: float | None = None, max_terms: int = 6000) -> Enclosure:
    """Enclosure of theta(lam) = Delta(lam^2) / lam^10 for 0 < lam <= 1."""
    with mp.workdps(WORKING_DPS):
        lm = _as_mpf(lam)
        if not 0 < lm <= 1:
            raise ValueError("lam must lie in (0, 1]")
        x = lm * lm
    return discrepancy_ratio(x, tol, max_terms)

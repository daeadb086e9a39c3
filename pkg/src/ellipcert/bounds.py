"""Two-sided error bounds for Ramanujan's perimeter approximation.

The approximation underestimates the true perimeter by

    epsilon = pi * (a+b) * theta(lam) * lam^10,      lam = (a-b)/(a+b),

where theta(lam) = Delta(lam^2)/lam^10 grows monotonically on [0, 1] and
satisfies the optimal bounds

    3/2^17 < theta(lam) <= 4/pi - 14/11,

both endpoints being best possible (the lower one is the lam -> 0 limit,
the upper one is attained at lam = 1).  In terms of the eccentricity,

    epsilon(e) = a * delta(e) * (2/(1 + sqrt(1-e^2)))^19 * e^20,

with delta(e) = pi * theta / 2^19 confined to
(3 pi / 2^36, (7/11)(22/7 - pi) / 2^18].  Ramanujan's own error estimate
3 a e^20 / 2^36 sits strictly below epsilon for every e > 0.

A frequently quoted form of the upper constant, (14/11)(22/7 - pi), equals
pi * (4/pi - 14/11) exactly: it bounds pi*theta rather than theta.  Both
labeled values are exposed here and never silently interchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .engine import (
    WORKING_DPS,
    Ellipse,
    Enclosure,
    EXACT_POINT,
    _scaled,
    discrepancy,
    perimeter,
    perimeter_ramanujan,
)

__all__ = [
    "THETA_LOWER",
    "DELTA_E_EXPONENT",
    "theta_upper",
    "scaled_theta_upper",
    "theta_bounds",
    "delta_e_bounds",
    "ErrorReport",
    "error_report",
    "containment_check",
]

# exact lower bound constant for theta; dyadic, so binary floating point
# representations of it are exact
THETA_LOWER = Fraction(3, 2**17)

# delta(e) = pi * theta / 2^DELTA_E_EXPONENT
DELTA_E_EXPONENT = 19

_BOUND_FORM_NOTE = (
    "epsilon = pi*(a+b)*theta(lam)*lam^10 with theta in (3/2^17, 4/pi - 14/11]; "
    "the alternative headline constant (14/11)*(22/7 - pi) equals "
    "pi*(4/pi - 14/11) exactly and bounds pi*theta, not theta; "
    "delta(e) = pi*theta/2^19 reproduces the bounds 3*pi/2^36 and "
    "(7/11)*(22/7 - pi)/2^18"
)


def theta_upper():
    """The sharp upper bound 4/pi - 14/11 for theta, at working precision."""
    with mp.workdps(WORKING_DPS):
        return 4 / mp.pi - mp.mpf(14) / 11


def scaled_theta_upper():
    """(14/11)*(22/7 - pi): equals pi times theta_upper(), exactly.

    This is the pi*theta version of the upper constant; see the module
    docstring for why both labels exist.
    """
    with mp.workdps(WORKING_DPS):
        return (mp.mpf(14) / 11) * (mp.mpf(22) / 7 - mp.pi)


def theta_bounds() -> tuple[Fraction, object]:
    """The implemented theta bounds (3/2^17 exact, 4/pi - 14/11 numeric).

    Verifies, before returning, that the pi-scaled headline constant
    (14/11)(22/7 - pi) equals pi times the upper bound to working
    precision, so the two labelings can never drift apart silently.
    """
    upper = theta_upper()
    with mp.workdps(WORKING_DPS):
        gap = abs(scaled_theta_upper() - mp.pi * upper)
        if gap > mp.mpf(10) ** (12 - WORKING_DPS):
            raise ArithmeticError(f"theta upper-bound labels disagree by {gap}")
    return THETA_LOWER, upper


def delta_e_bounds():
    """The bounds (3 pi / 2^36, (7/11)(22/7 - pi) / 2^18) for delta(e).

    Both equal pi/2^19 times the corresponding theta bound; the identity
    is checked to working precision before returning.
    """
    with mp.workdps(WORKING_DPS):
        lower = 3 * mp.pi / 2**36
        upper = (mp.mpf(7) / 11) * (mp.mpf(22) / 7 - mp.pi) / 2**18
        scale = mp.pi / 2**DELTA_E_EXPONENT
        lo_check = scale * THETA_LOWER.numerator / THETA_LOWER.denominator
        hi_check = scale * theta_upper()
        slop = mp.mpf(10) ** (8 - WORKING_DPS)
        if abs(lower - lo_check) > slop * lower or abs(upper - hi_check) > slop * upper:
            raise ArithmeticError("delta(e) bounds do not match pi/2^19 * theta bounds")
        return lower, upper


@dataclass
class ErrorReport:
    """Everything certified about one ellipse's approximation error.

    ``epsilon_enclosure`` brackets the true defect p - p_R;
    ``lower_bound``/``upper_bound`` are pi*(a+b)*c*lam^10 for the two
    optimal constants c; ``theta`` and ``delta_e`` are enclosures of the
    normalized error coefficients; ``ramanujan_estimate`` is the classical
    3 a e^20 / 2^36, a strict underestimate of the defect.
    """

    a: object
    b: object
    lam: object
    ecc: object
    p_enclosure: Enclosure
    p_R: object
    epsilon_enclosure: Enclosure
    lower_bound: object
    upper_bound: object
    theta: Enclosure
    delta_e: Enclosure
    ramanujan_estimate: object
    bound_form_note: str

    def to_json_dict(self) -> dict:
        def real(v) -> str:
            with mp.workdps(WORKING_DPS):
                return mp.nstr(mp.mpf(v), 25)

        def enc(e: Enclosure) -> dict:
            return {"lo": real(e.lo), "hi": real(e.hi), "regime": e.regime}

        return {
            "a": real(self.a),
            "b": real(self.b),
            "lambda": real(self.lam),
            "eccentricity": real(self.ecc),
            "p_enclosure": enc(self.p_enclosure),
            "p_R": real(self.p_R),
            "epsilon_enclosure": enc(self.epsilon_enclosure),
            "lower_bound": real(self.lower_bound),
            "upper_bound": real(self.upper_bound),
            "theta": enc(self.theta),
            "delta_e": enc(self.delta_e),
            "ramanujan_estimate": real(self.ramanujan_estimate),
            "bound_form_note": self.bound_form_note,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)


def error_report(ellipse: Ellipse, tol: float | None = None) -> ErrorReport:
    """Full error analysis for one ellipse.

    ``tol`` bounds the perimeter enclosure width (default 1e-12, widened
    automatically in the slow-convergence regime); the defect enclosure
    gets its own, much tighter, magnitude-tracking tolerance.  For a
    circle (a = b) every error field is zero and theta/delta_e carry the
    lam -> 0 limit values.  Internal consistency of the lam- and
    eccentricity-parameterizations is asserted before returning.
    """
    p_enc = perimeter(ellipse, tol)
    p_r = perimeter_ramanujan(ellipse)
    with mp.workdps(WORKING_DPS):
        a, b, lam, ecc = ellipse.a, ellipse.b, ellipse.lam, ellipse.ecc
        if lam == 0:
            theta_point = mp.mpf(3) / 2**17  # dyadic: exactly representable
            theta = Enclosure(theta_point, theta_point, EXACT_POINT)
            delta_e = _scaled(theta, mp.pi / 2**DELTA_E_EXPONENT, EXACT_POINT)
            zero = mp.mpf(0)
            return ErrorReport(
                a=a, b=b, lam=lam, ecc=ecc,
                p_enclosure=p_enc, p_R=p_r,
                epsilon_enclosure=Enclosure(zero, zero, EXACT_POINT),
                lower_bound=zero, upper_bound=zero,
                theta=theta, delta_e=delta_e,
                ramanujan_estimate=zero,
                bound_form_note=_BOUND_FORM_NOTE,
            )

        x = lam * lam
    d_enc = discrepancy(x)
    with mp.workdps(WORKING_DPS):
        prefactor = mp.pi * (a + b)
        eps = _scaled(d_enc, prefactor)
        lam10 = lam**10
        theta = _scaled(d_enc, 1 / lam10)
        delta_e = _scaled(theta, mp.pi / 2**DELTA_E_EXPONENT)
        lower = prefactor * (mp.mpf(3) / 2**17) * lam10
        upper = prefactor * (4 / mp.pi - mp.mpf(14) / 11) * lam10
        ram = 3 * a * ecc**20 / 2**36

        # lam-form vs eccentricity-form of epsilon
        stretch = (2 * a / (a + b)) ** 19  # == (2/(1 + sqrt(1-e^2)))^19
        e_form = a * delta_e.mid * stretch * ecc**20
        slack = eps.width + abs(eps.mid) * mp.mpf(10) ** (20 - WORKING_DPS) + mp.mpf("1e-200")
        if abs(e_form - eps.mid) > slack:
            raise ArithmeticError(
                f"epsilon parameterizations disagree: {e_form} vs {eps.mid}"
            )
        # epsilon vs p - p_R
        p_form = p_enc.mid - p_r
        slack2 = (p_enc.width + eps.width) / 2 + abs(p_r) * mp.mpf(10) ** (20 - WORKING_DPS)
        if abs(p_form - eps.mid) > slack2:
            raise ArithmeticError(
                f"epsilon enclosure inconsistent with p - p_R: {eps.mid} vs {p_form}"
            )

        return ErrorReport(
            a=a, b=b, lam=lam, ecc=ecc,
            p_enclosure=p_enc, p_R=p_r,
            epsilon_enclosure=eps,
            lower_bound=lower, upper_bound=upper,
            theta=theta, delta_e=delta_e,
            ramanujan_estimate=ram,
            bound_form_note=_BOUND_FORM_NOTE,
        )


def _verdict_between(mid, width, lower, upper, attained_upper: bool, margin: float):
    """Strictness-aware containment verdicts for an enclosure.

    Strict inequalities pass only with a ``margin``-times-width gap, and
    fail only when the whole enclosure clears the bound; anything in
    between is reported inconclusive rather than silently passed or
    failed.  When the upper endpoint is attained (lam = 1), the upper
    comparison is a plain <= on the midpoint.
    """
    guard = margin * width
    half = width / 2
    if lower - mid > half:  # enclosure entirely below the lower bound
        low = "fail"
    elif mid - lower > guard:
        low = "pass"
    else:
        low = "inconclusive"
    if attained_upper:
        up = "pass" if mid <= upper else ("fail" if mid - upper > half else "inconclusive")
    elif mid - upper > half:  # enclosure entirely above the upper bound
        up = "fail"
    elif upper - mid > guard:
        up = "pass"
    else:
        up = "inconclusive"
    return low, up


def containment_check(report: ErrorReport, margin: float = 10.0) -> dict:
    """Check epsilon and theta against their two-sided bounds.

    Returns verdict strings ("pass" / "fail" / "inconclusive" /
    "not-applicable") for each side of each quantity, plus an overall
    ``ok`` that is False only on a definite failure.
    """
    with mp.workdps(WORKING_DPS):
        if report.lam == 0:
            return {
                "epsilon_lower": "not-applicable",
                "epsilon_upper": "not-applicable",
                "theta_lower": "not-applicable",
                "theta_upper": "not-applicable",
                "ok": True,
            }
        attained = report.lam == 1
        eps_low, eps_up = _verdict_between(
            report.epsilon_enclosure.mid,
            report.epsilon_enclosure.width,
            report.lower_bound,
            report.upper_bound,
            attained,
            margin,
        )
        th_lower = mp.mpf(THETA_LOWER.numerator) / THETA_LOWER.denominator
        th_low, th_up = _verdict_between(
            report.theta.mid,
            report.theta.width,
            th_lower,
            theta_upper(),
            attained,
            margin,
        )
        verdicts = {
            "epsilon_lower": eps_low,
            "epsilon_upper": eps_up,
            "theta_lower": th_low,
            "theta_upper": th_up,
        }
        verdicts["ok"] = all(v != "fail" for v in verdicts.values())
        return verdicts

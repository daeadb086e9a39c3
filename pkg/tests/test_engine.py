"""Engine tests: enclosures, quadrature oracle agreement, perimeter API.

scipy's QUADPACK integrator serves as the independent oracle for both the
trigonometric integral and the arclength form of the perimeter; the
package's own series and adaptive-Gauss routes are checked against it.
"""

import math
import random
from fractions import Fraction as F

import pytest
from mpmath import mp
from scipy.integrate import quad

from ellipcert import (
    Ellipse,
    Enclosure,
    QuadratureBudgetError,
    ToleranceFloorError,
    a_coeffs_upto,
    b_coeff,
    discrepancy,
    discrepancy_ratio,
    eccentricity_from_lambda,
    eval_A,
    eval_B,
    ivory_integral,
    lambda_from_eccentricity,
    perimeter,
    perimeter_ramanujan,
    theta_of_lambda,
)

QUAD_ERR = 5e-12  # allowance for the oracle's own error


def oracle_trig_integral(x: float) -> float:
    rx = math.sqrt(x)

    def f(phi):
        v = 1.0 + 2.0 * rx * math.cos(2.0 * phi) + x
        return math.sqrt(v) if v > 0 else 0.0

    if x == 1.0:
        v1, _ = quad(f, 0.0, math.pi / 2, epsabs=1e-13, limit=200)
        v2, _ = quad(f, math.pi / 2, math.pi, epsabs=1e-13, limit=200)
        return (v1 + v2) / math.pi
    v, _ = quad(f, 0.0, math.pi, epsabs=1e-13, limit=200)
    return v / math.pi


def oracle_arclength(a: float, b: float) -> float:
    def f(phi):
        return math.sqrt(a * a * math.sin(phi) ** 2 + b * b * math.cos(phi) ** 2)

    v, _ = quad(f, 0.0, math.pi / 2, epsabs=1e-13, limit=200)
    return 4.0 * v


# ---------------------------------------------------------------- Ellipse


def test_ellipse_normalizes_and_records_swap():
    e = Ellipse(1, 2)
    assert e.swapped
    assert e.a == 2 and e.b == 1
    assert not Ellipse(2, 1).swapped


def test_ellipse_shape_parameters():
    e = Ellipse(2, 1)
    with mp.workdps(50):
        assert abs(e.lam - mp.mpf(1) / 3) < mp.mpf("1e-45")
        assert abs(e.ecc - mp.sqrt(3) / 2) < mp.mpf("1e-45")
        # lam = e^2 / (1 + sqrt(1 - e^2))^2
        s = mp.sqrt(1 - e.ecc**2)
        assert abs(e.lam - e.ecc**2 / (1 + s) ** 2) < mp.mpf("1e-40")


def test_ellipse_degenerate_and_circle():
    d = Ellipse(1, 0)
    assert d.lam == 1 and d.ecc == 1
    c = Ellipse(3, 3)
    assert c.lam == 0 and c.ecc == 0


def test_ellipse_from_eccentricity():
    e = Ellipse.from_eccentricity(1, 0.5)
    with mp.workdps(50):
        assert abs(e.b - mp.sqrt(mp.mpf(3)) / 2) < mp.mpf("1e-45")
        assert abs(e.ecc - mp.mpf("0.5")) < mp.mpf("1e-45")


def test_ellipse_invalid_inputs():
    with pytest.raises(ValueError):
        Ellipse(-1, 0.5)
    with pytest.raises(ValueError):
        Ellipse(0, 0)
    with pytest.raises(ValueError):
        Ellipse(float("nan"), 1)
    with pytest.raises(ValueError):
        Ellipse.from_eccentricity(1, 1.5)


def test_lambda_eccentricity_roundtrip():
    with mp.workdps(50):
        for e in (0.0, 0.1, 0.6, 0.95, 1.0):
            lam = lambda_from_eccentricity(e)
            back = eccentricity_from_lambda(lam)
            assert abs(back - e) < mp.mpf("1e-40")
        # e^2 = 4 lam / (1 + lam)^2, at the same binary representation of e
        em = mp.mpf(0.6)
        lam = lambda_from_eccentricity(em)
        assert abs(4 * lam / (1 + lam) ** 2 - em**2) < mp.mpf("1e-40")


# ----------------------------------------------------------------- eval_A


def test_eval_A_endpoints():
    with mp.workdps(50):
        assert eval_A(0) == 1
        assert abs(eval_A(1) - mp.mpf(14) / 11) < mp.mpf("1e-45")


def test_eval_A_domain():
    with pytest.raises(ValueError):
        eval_A(-0.01)
    with pytest.raises(ValueError):
        eval_A(1.01)


def test_eval_A_matches_series_partial_sum():
    # partial sum of the composition coefficients plus a tail bound; the
    # tail after N is below B_(N+1) x^(N+1)/(1-x) since |A_n| <= B_n
    coeffs = a_coeffs_upto(60)
    with mp.workdps(50):
        x = mp.mpf("0.5")
        partial = mp.mpf(0)
        for n, c in enumerate(coeffs):
            partial += mp.mpf(c.numerator) / c.denominator * x**n
        tail = F(b_coeff(61)) * F(1, 2) ** 61 * 2
        assert abs(eval_A(x) - partial) < mp.mpf(float(tail)) + mp.mpf("1e-30")
        assert abs(eval_A(x) - partial) < mp.mpf("1e-12")


# ----------------------------------------------------------------- eval_B


def test_eval_B_at_zero():
    enc = eval_B(0)
    assert enc.contains(F(1))
    assert enc.width < mp.mpf("1e-40")


def test_eval_B_at_one():
    enc = eval_B(1.0, 5e-9)
    with mp.workdps(80):
        assert enc.contains(4 / mp.pi)
    assert enc.width < 1e-8
    assert enc.regime == "slow-convergence-tail"


def test_eval_B_width_respects_tol():
    for x in (0.1, 0.3, 0.5, 0.7, 0.9):
        enc = eval_B(x, 1e-13)
        assert enc.width <= mp.mpf("1e-13")
        assert enc.regime == "geometric-tail"


def test_eval_B_domain_and_floor():
    with pytest.raises(ValueError):
        eval_B(-0.2)
    with pytest.raises(ValueError):
        eval_B(1.2)
    with pytest.raises(ToleranceFloorError):
        eval_B(1.0, 1e-12, max_terms=1000)
    with pytest.raises(ValueError):
        eval_B(0.5, -1e-3)


def test_eval_B_soundness_against_quadrature():
    for i in range(0, 21):
        x = round(0.05 * i, 2)
        enc = eval_B(x, 5e-9 if x > 0.999 else 1e-9)
        q = oracle_trig_integral(x)
        assert enc.lo - QUAD_ERR <= q <= enc.hi + QUAD_ERR, f"x={x}"


# --------------------------------------------------------- ivory_integral


def test_ivory_endpoints():
    assert abs(ivory_integral(0.0) - 1.0) < 1e-14
    assert abs(ivory_integral(1.0) - 4.0 / math.pi) < 1e-12


def test_ivory_against_series():
    enc = eval_B(0.7, 1e-12)
    v = ivory_integral(0.7, 1e-12)
    assert abs(v - float(enc.mid)) < 2e-12


def test_ivory_against_scipy():
    for x in (0.15, 0.5, 0.85):
        assert abs(ivory_integral(x, 1e-12) - oracle_trig_integral(x)) < 1e-11


def test_ivory_domain_and_budget():
    with pytest.raises(ValueError):
        ivory_integral(-0.5)
    with pytest.raises(ValueError):
        ivory_integral(2.0)
    with pytest.raises(QuadratureBudgetError):
        ivory_integral(0.9, tol=1e-18, max_panels=8)


# -------------------------------------------------------------- perimeter


def test_perimeter_circle():
    enc = perimeter(Ellipse(1, 1))
    with mp.workdps(80):
        assert enc.contains(2 * mp.pi)
    assert enc.width < 1e-12


def test_perimeter_degenerate():
    enc = perimeter(Ellipse(1, 0))
    assert enc.contains(4)
    assert enc.width < 1e-5


def test_perimeter_against_arclength_oracle():
    enc = perimeter(Ellipse(2, 1))
    q = oracle_arclength(2.0, 1.0)
    assert enc.lo - QUAD_ERR <= q <= enc.hi + QUAD_ERR
    assert enc.width <= 1e-12


def test_perimeter_against_complete_elliptic_integral():
    # third route: p = 4 a E(e^2) via scipy's complete elliptic integral
    from scipy.special import ellipe

    for a, b in ((2.0, 1.0), (1.0, 0.25), (3.0, 2.9), (1.0, 0.0)):
        ell = Ellipse(a, b)
        ref = 4.0 * a * ellipe(float(ell.ecc) ** 2)
        enc = perimeter(ell)
        assert enc.lo - 1e-9 <= ref <= enc.hi + 1e-9, (a, b)


def test_perimeter_axis_order_irrelevant():
    p1 = perimeter(Ellipse(2, 1))
    p2 = perimeter(Ellipse(1, 2))
    assert p1.lo == p2.lo and p1.hi == p2.hi


def test_perimeter_scale_equivariance():
    s = 3.7
    base = perimeter(Ellipse(1.4, 0.6))
    scaled = perimeter(Ellipse(1.4 * s, 0.6 * s))
    with mp.workdps(60):
        diff = abs(scaled.mid - s * base.mid)
        assert diff <= (scaled.width + s * base.width) / 2 + mp.mpf("1e-30")


def test_perimeter_explicit_tolerance():
    enc = perimeter(Ellipse(5, 3), tol=1e-8)
    assert enc.width <= 1e-8
    with pytest.raises(ToleranceFloorError):
        perimeter(Ellipse(1, 0), tol=1e-30)


# ---------------------------------------------------- perimeter_ramanujan


def test_ramanujan_circle_exact():
    with mp.workdps(50):
        v = perimeter_ramanujan(Ellipse(1, 1))
        assert abs(v - 2 * mp.pi) < mp.mpf("1e-45")


def test_ramanujan_degenerate():
    with mp.workdps(50):
        v = perimeter_ramanujan(Ellipse(1, 0))
        assert abs(v - 14 * mp.pi / 11) < mp.mpf("1e-45")


def test_ramanujan_two_forms_agree():
    rng = random.Random(987654)
    with mp.workdps(60):
        for _ in range(25):
            a = rng.uniform(0.3, 3.0)
            b = a * rng.uniform(0.01, 1.0)
            ell = Ellipse(a, b)
            direct = perimeter_ramanujan(ell)
            via_kernel = mp.pi * (ell.a + ell.b) * eval_A(ell.lam**2)
            assert abs(direct - via_kernel) / direct < mp.mpf("5e-49")


def test_ramanujan_underestimates():
    # the enclosure must be tighter than the defect it is meant to expose,
    # so aim two orders below a crude pi*(a+b)*delta_5*lam^10 estimate
    for a, b in ((2, 1), (1, 0.2), (1.5, 1.49), (1, 0)):
        ell = Ellipse(a, b)
        lam = float(ell.lam)
        eps_est = math.pi * (a + b) * 2.288e-5 * lam**10
        tol = min(1e-12, eps_est / 100) if lam < 0.999 else None
        enc = perimeter(ell, tol)
        assert perimeter_ramanujan(ell) < enc.lo, f"(a,b)=({a},{b})"


# ------------------------------------------------------------ discrepancy


def test_discrepancy_domain():
    for bad in (0, -0.5, 1.0001):
        with pytest.raises(ValueError):
            discrepancy(bad)


def test_discrepancy_at_one():
    enc = discrepancy(1.0)
    with mp.workdps(80):
        assert enc.contains(4 / mp.pi - mp.mpf(14) / 11)


def test_discrepancy_small_x_limit():
    # Delta(x)/x^5 -> delta_5 = 3/2^17 as x -> 0
    enc = discrepancy_ratio(1e-8)
    with mp.workdps(50):
        d5 = mp.mpf(3) / 2**17  # dyadic, exact
        assert abs(enc.mid - d5) < mp.mpf("1e-12")
        assert enc.lo > 0


def test_discrepancy_two_sided_envelope():
    # the whole enclosure, not just its midpoint, sits strictly inside
    # (delta_5 x^5, (4/pi - 14/11) x^5] away from the x = 1 endpoint
    with mp.workdps(50):
        for xf in (0.1, 0.5, 0.9):
            enc = discrepancy(xf)
            x = mp.mpf(xf)
            low = (mp.mpf(3) / 2**17) * x**5
            high = (4 / mp.pi - mp.mpf(14) / 11) * x**5
            assert low < enc.lo
            assert enc.hi < high


def test_discrepancy_positive_and_sound_vs_subtraction():
    # direct (cancellation-prone) B - A agrees within combined widths
    for xf in (0.25, 0.75):
        enc = discrepancy(xf)
        b_enc = eval_B(xf, 1e-20)
        with mp.workdps(60):
            direct = b_enc.mid - eval_A(xf)
            assert abs(direct - enc.mid) < b_enc.width + enc.width + mp.mpf("1e-25")
        assert enc.lo > 0


def test_theta_of_lambda_monotone_spot():
    mids = [theta_of_lambda(l).mid for l in (0.2, 0.5, 0.8, 1.0)]
    assert all(mids[i] < mids[i + 1] for i in range(len(mids) - 1))


def test_theta_equals_discrepancy_at_endpoint():
    t = theta_of_lambda(1.0)
    d = discrepancy(1.0)
    with mp.workdps(60):
        assert abs(t.mid - d.mid) < t.width + d.width


# -------------------------------------------------------------- Enclosure


def test_enclosure_invariant():
    with pytest.raises(ValueError):
        Enclosure(mp.mpf(2), mp.mpf(1))


def test_enclosure_contains_is_exact():
    enc = eval_B(0)  # width around 1e-47
    with mp.workdps(5):
        # low ambient precision must not round the comparison away
        assert enc.contains(F(1))
        assert not enc.contains(F(2))


def test_enclosure_rejects_non_finite_values():
    enc = eval_B(0.5)
    with pytest.raises(ValueError):
        enc.contains(mp.inf)

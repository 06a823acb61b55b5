import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkorlicz import young as Y
from hkorlicz.funcspec import Box, constant, exact_lp, indicator, osc_deriv
from hkorlicz.hkint import hk_integrate
from hkorlicz.norms import (
    ALPHA_CEIL,
    ALPHA_FLOOR,
    bisect_norm,
    luxemburg_norm,
    strong_modular,
    weak_modular,
    weak_norm,
)
from hkorlicz.verifier import default_corpus

I02 = Box((0.0,), (2.0,))
CHI = indicator(Box((0.0,), (1.0,)), I02)
P1, P2, P3 = Y.power(1), Y.power(2), Y.power(3)


def brute_abs_integral(a, b, n=2_000_000):
    # midpoint rule for |F'| with F(t) = t^2 sin(1/t^2), far from the origin
    t = a + (np.arange(n) + 0.5) * ((b - a) / n)
    fp = 2 * t * np.sin(t**-2) - 2 / t * np.cos(t**-2)
    return float(np.sum(np.abs(fp)) * (b - a) / n)


class TestStrongModular:
    def test_indicator(self):
        assert strong_modular(CHI, P2, 1.0) == pytest.approx(1.0, abs=1e-4)
        assert strong_modular(CHI, P2, 2.0) == pytest.approx(0.25, abs=1e-4)

    def test_oscillatory_abs(self):
        f = osc_deriv(Box((0.1,), (1.0,)))
        assert strong_modular(f, P1, 1.0, tol=1e-5) == pytest.approx(brute_abs_integral(0.1, 1.0), abs=1e-3)

    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError):
            strong_modular(CHI, P2, 0.0)


class TestLuxemburg:
    def test_examples(self):
        assert luxemburg_norm(constant(0.0, I02), P2).value == 0.0
        assert luxemburg_norm(CHI, P2).value == pytest.approx(1.0, rel=3e-5)
        assert luxemburg_norm(2 * CHI, P2).value == pytest.approx(2.0, rel=3e-5)

    def test_result_fields(self):
        r = luxemburg_norm(CHI, P2, tol=1e-6)
        lo, hi = r.bracket
        assert r.value == hi and lo < hi <= lo + 1e-6 * hi
        assert r.modular_at_value <= 1.0
        assert r.finite and float(r) == r.value
        assert r.iterations > 0

    def test_infinite_sentinel(self):
        # even at the ceiling alpha = 1e9 the modular is (1e20 / 1e9)^2 > 1
        huge = 1e20 * CHI
        r = luxemburg_norm(huge, P2)
        assert r.value == math.inf and not r.finite


class TestWeak:
    def test_modular_examples(self):
        assert weak_modular(CHI, P2, 1.0) == pytest.approx(1.0, rel=1e-8)
        assert weak_modular(CHI, P2, 2.0) == pytest.approx(0.25, rel=1e-8)
        assert weak_modular(constant(0.0, I02), P2, 1.0) == 0.0

    def test_norm_examples(self):
        assert weak_norm(CHI, P2).value == pytest.approx(1.0, rel=1e-5)
        Q = Box((-2.0, -2.0), (2.0, 2.0))
        ball = indicator(Box((-1.0, -1.0), (1.0, 1.0)), Q)
        assert weak_norm(ball, P2).value == pytest.approx(2.0, rel=1e-5)
        assert weak_norm(constant(0.0, I02), P2).value == 0.0

    def test_tolerances_recorded(self):
        r = weak_norm(osc_deriv(Box((0.1,), (1.0,))), P2)
        assert r.tolerances["distribution"] == "estimated"
        assert r.tolerances["level"] is not None


class TestBisect:
    def test_zero_and_infinite(self):
        assert bisect_norm(lambda a: 0.0).value == 0.0
        assert bisect_norm(lambda a: 2.0).value == math.inf

    def test_threshold(self):
        r = bisect_norm(lambda a: (3.0 / a) ** 2, tol=1e-8)
        assert r.value == pytest.approx(3.0, rel=1e-8)
        assert r.value >= 3.0

    def test_floor_and_ceiling(self):
        assert bisect_norm(lambda a: 1e-30 / a).value == 0.0
        assert ALPHA_FLOOR < 1 < ALPHA_CEIL


# properties -----------------------------------------------------------------

CORPUS = default_corpus()
FNAMES = sorted(CORPUS.functions)
YNAMES = list(CORPUS.norm_young)


@settings(max_examples=25)
@given(st.sampled_from(FNAMES), st.sampled_from(YNAMES))
def test_monotone_feasibility(fname, yname):
    f, th = CORPUS.functions[fname], CORPUS.young[yname]
    alphas = np.geomspace(0.05, 20.0, 10)
    feasible = [weak_modular(f, th, a) <= 1.0 for a in alphas]
    # once feasible, always feasible
    assert feasible == sorted(feasible)


@settings(max_examples=25)
@given(st.sampled_from(FNAMES), st.sampled_from(YNAMES), st.sampled_from([-3.0, -0.5, 0.25, 2.0, 7.0]))
def test_weak_homogeneity(fname, yname, c):
    f, th = CORPUS.functions[fname], CORPUS.young[yname]
    base = weak_norm(f, th).value
    scaled = weak_norm(c * f, th).value
    assert scaled == pytest.approx(abs(c) * base, rel=3e-5, abs=3e-5)


@settings(max_examples=8)
@given(st.sampled_from(["chi[0,1]", "step3", "x", "|x|^2", "chi[0,1]^2"]), st.sampled_from([-2.0, 0.5, 3.0]))
def test_strong_homogeneity(fname, c):
    f, th = CORPUS.functions[fname], P2
    base = luxemburg_norm(f, th).value
    assert luxemburg_norm(c * f, th).value == pytest.approx(abs(c) * base, rel=3e-5, abs=3e-4)


@settings(max_examples=15)
@given(st.sampled_from(FNAMES), st.sampled_from(["power1", "power2", "expm"]))
def test_weak_le_strong(fname, yname):
    f, th = CORPUS.functions[fname], CORPUS.young[yname]
    s = luxemburg_norm(f, th).value
    assert weak_norm(f, th).value <= s + 3 * (1e-5 * max(1.0, s) + 1e-4)


@settings(max_examples=20)
@given(st.sampled_from(FNAMES), st.sampled_from(YNAMES))
def test_unit_modular_certificate(fname, yname):
    f, th = CORPUS.functions[fname], CORPUS.young[yname]
    r = weak_norm(f, th)
    if r.finite and r.value > 0:
        assert weak_modular(f, th, r.value) <= 1.0 + 5e-3
        assert r.modular_at_value <= 1.0


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("fname", ["chi[0,1]", "step3", "const0.7", "x", "|x|^2", "|x|^0.5", "2x-1", "chi[0,1]^2", "step2d"])
def test_lp_consistency(fname, p):
    f = CORPUS.functions[fname]
    exact = exact_lp(f, p)
    assert exact is not None
    got = luxemburg_norm(f, Y.power(p), tol=1e-7, int_tol=1e-7).value
    assert got == pytest.approx(exact, rel=1e-5)


def test_strong_modular_is_integral_of_theta():
    f = CORPUS.functions["x"]
    direct = hk_integrate(f.map(lambda v: np.asarray(v) ** 2), None, 1e-8).value
    assert strong_modular(f, P2, 1.0, tol=1e-8) == pytest.approx(direct, abs=1e-7)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkorlicz.funcspec import Box, constant, indicator, linear, osc_deriv, parse_expr, piecewise_const, power
from hkorlicz.hkint import ConvergenceError
from hkorlicz.measure import AGREEMENT, EstimatedDistribution, ball_volume, dist, distribution
from hkorlicz.verifier import default_corpus

I01 = Box((0.0,), (1.0,))
I02 = Box((0.0,), (2.0,))
CHI = indicator(Box((0.0,), (1.0,)), I02)


class TestBallVolume:
    @pytest.mark.parametrize("a, r, n, expected", [((0.0,), 0.5, 1, 1.0), ((0.0, 0.0), 0.5, 2, 1.0), ((1, 2, 3), 1.0, 3, 8.0)])
    def test_examples(self, a, r, n, expected):
        assert ball_volume(a, r, n) == expected

    def test_dimension_from_point(self):
        assert ball_volume((0.0, 0.0), 1.0) == 4.0

    @pytest.mark.parametrize("r", [0.0, -1.0, float("nan")])
    def test_rejects_bad_radius(self, r):
        with pytest.raises(ValueError):
            ball_volume((0.0,), r)


class TestDist:
    def test_indicator(self):
        assert dist(CHI, I02, 0.5) == 1.0
        assert dist(CHI, I02, 1.5) == 0.0
        # strict superlevel set: |f| > 1 is empty
        assert dist(CHI, I02, 1.0) == 0.0
        assert dist(CHI, I02, 0.0) == 1.0

    def test_linear_exact_and_estimated(self):
        f = linear(I01)
        assert distribution(f).mode == "exact"
        assert dist(f, I01, 0.3) == pytest.approx(0.7, abs=1e-12)
        est = EstimatedDistribution(f, I01)
        assert float(est(0.3)) == pytest.approx(0.7, abs=1e-3)

    def test_negative_t_rejected(self):
        with pytest.raises(ValueError):
            dist(CHI, I02, -0.1)

    def test_sub_box(self):
        assert dist(CHI, Box((0.5,), (2.0,)), 0.5) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            distribution(CHI, Box((0, 0), (1, 1)))

    def test_piecewise_two_d(self):
        f = piecewise_const(
            [(Box((0.0, 0.0), (1.0, 2.0)), 1.0), (Box((1.0, 0.0), (2.0, 1.0)), -2.0)], Box((0, 0), (2, 2))
        )
        assert dist(f, None, 0.5) == pytest.approx(3.0)
        assert dist(f, None, 1.5) == pytest.approx(1.0)

    def test_estimated_oscillatory(self):
        f = osc_deriv(Box((0.1,), (1.0,)))
        d = distribution(f)
        assert d.mode == "estimated"
        assert d.level is not None
        # |2t sin(1/t^2) - (2/t) cos(1/t^2)| <= 2t + 2/t
        assert d.ess_sup <= 2 / 0.1 + 2 * 0.1 + 1e-9

    def test_singular_point_masked(self):
        # a 2^k midpoint grid on [-1/2, 1/2] with k = 0 lands on the pinned point 0
        f = osc_deriv(Box((-0.5,), (0.5,)))
        a, w = EstimatedDistribution._sample(f, f.domain, 0)
        assert a.tolist() == [0.0] and w == 1.0

    def test_budget_exhaustion(self, monkeypatch):
        import hkorlicz.measure as M

        monkeypatch.setitem(M.MAX_LEVEL, 1, 5)
        with pytest.raises(ConvergenceError):
            EstimatedDistribution(osc_deriv(I01), I01)

    def test_estimator_agreement_recorded(self):
        d = EstimatedDistribution(parse_expr("sin(6.283185307179586*x1)", 1, I01), I01)
        assert d.gap <= AGREEMENT * d.total


# properties -----------------------------------------------------------------

CORPUS = default_corpus()
FNAMES = sorted(CORPUS.functions)
T_VALUES = st.floats(0.0, 5.0, allow_nan=False)


@settings(max_examples=80)
@given(st.sampled_from(FNAMES), T_VALUES, T_VALUES)
def test_monotone_and_bounded(fname, t1, t2):
    f = CORPUS.functions[fname]
    d = distribution(f)
    lo, hi = sorted((t1, t2))
    a, b = float(d(lo)), float(d(hi))
    assert 0.0 <= b <= a <= f.domain.volume


@settings(max_examples=60)
@given(st.sampled_from(FNAMES), st.floats(0.1, 10.0), st.floats(0.0, 3.0))
def test_scaling(fname, alpha, t):
    f = CORPUS.functions[fname]
    lhs = dist((1.0 / alpha) * f, None, t)
    rhs = dist(f, None, alpha * t)
    exact = distribution(f).mode == "exact"
    if exact:
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
    else:
        assert abs(lhs - rhs) <= 2e-3 * f.domain.volume


@settings(max_examples=60)
@given(st.sampled_from(CORPUS.pairs), st.floats(1e-3, 4.0))
def test_subadditive(pair, t):
    f, g = (CORPUS.functions[n] for n in pair)
    vol = f.domain.volume
    assert dist(f + g, None, t) <= dist(f, None, t / 2) + dist(g, None, t / 2) + 4e-3 * vol


@settings(max_examples=40)
@given(st.floats(-3, 3), st.floats(0.0, 4.0))
def test_constant_is_step(c, t):
    f = constant(c, I02)
    assert dist(f, None, t) == (2.0 if abs(c) > t else 0.0)


@settings(max_examples=40)
@given(st.floats(0.1, 3.0), st.floats(0.0, 1.0))
def test_power_matches_brute_force(p, t):
    f = power(p, I01)
    xs = (np.arange(200_000) + 0.5) / 200_000
    brute = float(np.mean(xs**p > t))
    assert dist(f, None, t) == pytest.approx(brute, abs=1e-4)
    assert math.isfinite(distribution(f).ess_sup)

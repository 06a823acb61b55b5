import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkorlicz.funcspec import (
    Box,
    DomainError,
    NonFiniteError,
    ParseError,
    SingularPointError,
    SpecError,
    constant,
    exact_distribution,
    exact_integral,
    exact_lp,
    function_from_spec,
    indicator,
    linear,
    load_function_spec,
    osc_antiderivative,
    osc_deriv,
    parse,
    parse_expr,
    piecewise_const,
    power,
)

# frozen oracles
SIN1 = 0.8414709848078965
OSC_AT_1 = 2 * math.sin(1.0) - 2 * math.cos(1.0)  # 0.6023374...


class TestBox:
    def test_volume_and_degenerate(self):
        assert Box((0, 0), (2, 3)).volume == 6
        assert Box((1,), (1,)).volume == 0

    def test_invalid(self):
        with pytest.raises(ValueError):
            Box((1,), (0,))
        with pytest.raises(ValueError):
            Box((0, 0), (1,))
        with pytest.raises(ValueError):
            Box((), ())

    def test_max_distance(self):
        b = Box((0.0, 0.0), (1.0, 2.0))
        assert b.max_distance((0.0, 0.0)) == 2.0
        assert b.max_distance((0.5, 1.0)) == 1.0


class TestParse:
    def test_identity(self):
        f = parse_expr("x1", 1)
        assert f(0.5) == 0.5

    def test_oscillatory_body(self):
        f = parse_expr("x1^2*sin(1/x1^2)", 1)
        assert f(1.0) == pytest.approx(SIN1, abs=1e-12)
        assert round(f(1.0), 6) == 0.841471

    def test_incomplete_production(self):
        with pytest.raises(ParseError) as e:
            parse("1+", 1)
        assert e.value.pos == 2
        assert "offset 2" in str(e.value)

    def test_unknown_identifier(self):
        with pytest.raises(ParseError):
            parse("foo(x1)", 1)

    def test_variable_out_of_range(self):
        with pytest.raises(ParseError):
            parse("x3", 2)

    def test_precedence(self):
        # '^' right-associative, unary minus binds tighter than the '^' base
        assert parse_expr("2^3^2", 1)(0.5) == 2.0**9
        assert parse_expr("-x1^2", 1, Box((-2,), (2,)))(-1.5) == 2.25
        assert parse_expr("1-2-3", 1)(0.0) == -4.0
        assert parse_expr("8/4/2", 1)(0.0) == 1.0

    def test_min_max_arity(self):
        assert parse_expr("max(x1, 0.25, 0.5)", 1)(0.1) == 0.5
        with pytest.raises(ParseError):
            parse("sin(x1, x1)", 1)
        with pytest.raises(ParseError):
            parse("max(x1)", 1)


class TestEval:
    def test_indicator_outside_support(self):
        f = indicator(Box((0, 0), (1, 1)), Box((0, 0), (2, 2)))
        assert f((2.0, 0.0)) == 0.0
        assert f((1.0, 1.0)) == 1.0

    def test_osc_deriv_value(self):
        assert osc_deriv()(1.0) == pytest.approx(OSC_AT_1, abs=1e-12)
        assert round(osc_deriv()(1.0), 6) == 0.602337

    def test_osc_deriv_matches_finite_difference(self):
        f = osc_deriv()
        for x in (0.3, 0.5, 0.9):
            h = 1e-6
            fd = (osc_antiderivative(x + h) - osc_antiderivative(x - h)) / (2 * h)
            assert f(x) == pytest.approx(fd, rel=1e-5)

    def test_errors(self):
        f = osc_deriv()
        with pytest.raises(SingularPointError):
            f(0.0)
        with pytest.raises(DomainError):
            f(1.5)
        with pytest.raises(NonFiniteError):
            parse_expr("log(x1)", 1)(0.0)
        with pytest.raises(NonFiniteError):
            parse_expr("1/x1", 1)(0.0)

    def test_builtins(self):
        d = Box((-1.0,), (1.0,))
        assert power(2, d)(-0.5) == 0.25
        assert linear(d, (2.0,), -1.0)(0.25) == -0.5
        assert constant(0.7, d)(0.3) == 0.7
        pc = piecewise_const([(Box((-1.0,), (0.0,)), 2.0), (Box((0.5,), (1.0,)), -1.0)], d)
        assert pc(-0.5) == 2.0 and pc(0.25) == 0.0 and pc(0.75) == -1.0


class TestSpecFile:
    def test_expr_and_builtin(self, tmp_path):
        p = tmp_path / "f.json"
        p.write_text(json.dumps({"kind": "expr", "expr": "x1*x2", "domain": [[0, 1], [0, 2]]}))
        f = load_function_spec(p)
        assert f((0.5, 2.0)) == 1.0
        g = function_from_spec(
            {"kind": "builtin", "builtin": {"name": "indicator", "params": {"box": [[0, 1]]}}, "domain": [[0, 2]]}
        )
        assert g(0.5) == 1.0 and g(1.5) == 0.0

    def test_bad_spec_names_file(self, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text('{"kind": "expr", "domain": [[0, 1]]}')
        with pytest.raises(SpecError, match="broken.json"):
            load_function_spec(p)
        p.write_text("{not json")
        with pytest.raises(SpecError, match="broken.json"):
            load_function_spec(p)


class TestMetadata:
    @pytest.mark.parametrize(
        "f",
        [
            indicator(Box((0.0,), (1.0,)), Box((0.0,), (2.0,))),
            piecewise_const(
                [(Box((0.0,), (0.5,)), 3.0), (Box((0.5,), (1.25,)), -1.0), (Box((1.25,), (2.0,)), 0.5)],
                Box((0.0,), (2.0,)),
            ),
            linear(Box((0.0,), (1.0,))),
            linear(Box((0.0,), (1.0,)), (2.0,), -1.0),
            power(0.5, Box((0.0,), (1.0,))),
            power(2.0, Box((-0.5, 0.0), (1.0, 1.0))),
        ],
        ids=["chi", "step3", "x", "2x-1", "sqrt", "power2-2d"],
    )
    def test_distribution_matches_brute_force(self, f):
        # 10^6 midpoints, relative error 2e-3
        n = f.dim
        m = round(1e6 ** (1 / n))
        axes = [lo + (np.arange(m) + 0.5) * (hi - lo) / m for lo, hi in zip(f.domain.lower, f.domain.upper)]
        X = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
        v = np.abs(f.values(X))
        d = exact_distribution(f)
        assert d is not None and d.mode == "exact"
        vol = f.domain.volume
        for t in np.linspace(0.0, v.max() * 1.1, 23):
            brute = np.count_nonzero(v > t) / len(v) * vol
            assert abs(float(d(t)) - brute) <= 2e-3 * vol

    def test_integral_metadata(self):
        assert exact_integral(osc_deriv()) == pytest.approx(SIN1, abs=1e-15)
        assert exact_integral(linear(Box((0.0,), (1.0,)))) == 0.5
        assert exact_integral(indicator(Box((0, 0), (1, 1)), Box((0, 0), (2, 2)))) == 1.0
        assert exact_integral(parse_expr("sin(x1)", 1)) is None

    def test_lp_metadata(self):
        x = linear(Box((0.0,), (1.0,)))
        assert exact_lp(x, 2) == pytest.approx(1 / math.sqrt(3), rel=1e-15)
        assert exact_lp(power(2.0, Box((0.0,), (1.0,))), 3) == pytest.approx((1 / 7) ** (1 / 3), rel=1e-15)
        assert exact_lp(2 * indicator(Box((0.0,), (1.0,)), Box((0.0,), (2.0,))), 2) == pytest.approx(2.0)


# properties ---------------------------------------------------------------

TOKENS = ["x1", "x2", "1", "2.5", "1e-3", "+", "-", "*", "/", "^", "(", ")", ",", "sin", "cos", "exp", "log", "abs",
          "min", "max", "y", "$", " ", "3."]


@settings(max_examples=400)
@given(st.lists(st.sampled_from(TOKENS), max_size=12))
def test_parser_totality(tokens):
    text = "".join(tokens)
    try:
        parse(text, 2)
    except ParseError as e:
        assert 0 <= e.pos <= len(text)


def _expr(depth):
    leaf = st.one_of(
        st.sampled_from(["x1", "x2"]),
        st.floats(0.0, 100.0, allow_nan=False).map(repr),
    )
    if depth == 0:
        return leaf
    sub = _expr(depth - 1)
    return st.one_of(
        leaf,
        st.tuples(sub, st.sampled_from("+-*/^"), sub).map(lambda t: f"({t[0]}{t[1]}{t[2]})"),
        sub.map(lambda s: f"-{s}"),
        st.tuples(st.sampled_from(["sin", "cos", "abs", "exp"]), sub).map(lambda t: f"{t[0]}({t[1]})"),
        st.tuples(st.sampled_from(["min", "max"]), sub, sub).map(lambda t: f"{t[0]}({t[1]},{t[2]})"),
    )


@settings(max_examples=200)
@given(_expr(3))
def test_print_parse_round_trip(text):
    f = parse_expr(text, 2)
    g = parse_expr(f.text(), 2)
    X = np.random.default_rng(0).random((100, 2))
    with np.errstate(all="ignore"):
        a = f.body.evaluate(X)
        b = g.body.evaluate(X)
    np.testing.assert_array_equal(a, b)

import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import random_expression
from frontforge import expr, presets
from frontforge.expr import (ExprDomainError, ExprSyntaxError, UnknownIdentifierError, differentiate,
                             evaluate, parse, partial, to_string)


def test_parse_quotient_structure():
    assert parse("sinh(v)/cosh(v)^2").sexpr() == ("div", ("sinh", "v"), ("pow", ("cosh", "v"), 2.0))


def test_parse_variable_atom():
    node = parse("u")
    assert isinstance(node, expr.Var) and node.sexpr() == "u"


def test_syntax_error_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse("1 + * v")
    assert info.value.offset == 4


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError):
        parse("foo(u)")


@pytest.mark.parametrize("text", ["", "(u", "u)", "sin(", "2 3"])
def test_malformed(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_precedence_and_associativity():
    assert evaluate(parse("-2^2"), 0, 0) == -4.0
    assert evaluate(parse("2^3^2"), 0, 0) == 512.0
    assert evaluate(parse("1-2-3"), 0, 0) == -4.0
    assert evaluate(parse("8/2/2"), 0, 0) == 2.0
    assert evaluate(parse("1.5e1 + pi"), 0, 0) == 15 + math.pi


def test_eval_hhat_of_cosh_example():
    assert evaluate(parse("(-3+cosh(2*v))/cosh(v)^2"), 0.0, 0.0) == -2.0


def test_eval_zero():
    assert evaluate(parse("0"), 1.7, -3.2) == 0.0


def test_division_by_zero_names_node():
    with pytest.raises(ExprDomainError, match="1 / v"):
        evaluate(parse("1/v"), 0.0, 0.0)


def test_log_domain():
    with pytest.raises(ExprDomainError):
        evaluate(parse("log(u)"), -1.0, 0.0)


def test_eval_is_deterministic_and_vectorized():
    node = parse("sin(u)*exp(v)-u^3/7")
    u = np.linspace(-1, 1, 11)
    a = evaluate(node, u, 0.3)
    b = evaluate(node, u, 0.3)
    assert np.array_equal(a, b)
    assert a[4] == evaluate(node, u[4], 0.3)


def test_derivative_of_lambda_at_zero():
    d = differentiate(parse("sinh(v)/cosh(v)^2"), "v")
    assert evaluate(d, 0.0, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_derivative_without_dependence_folds_to_zero():
    d = differentiate(parse("cosh(v)"), "u")
    assert isinstance(d, expr.Const) and d.value == 0.0


def test_power_rule():
    assert evaluate(differentiate(parse("v^2"), "v"), 0.0, 3.0) == pytest.approx(6.0)


def test_abs_derivative_flagged_at_evaluation():
    d = differentiate(parse("abs(u)"), "u")      # no error here
    with pytest.raises(ExprDomainError):
        evaluate(d, 0.0, 0.0)


def test_derivatives_match_sympy(rng):
    """Iterated partials against sympy on random smooth expressions."""
    su, sv = sp.symbols("u v")
    for _ in range(25):
        text = random_expression(rng)
        node = parse(text)
        sym = sp.sympify(text.replace("^", "**"), locals={"u": su, "v": sv})
        i, j = rng.integers(0, 3, size=2)
        ref = sp.diff(sym, su, int(i), sv, int(j)) if i or j else sym
        p = rng.uniform(-1, 1, 2)
        want = float(ref.subs({su: p[0], sv: p[1]}).evalf(30))
        got = float(evaluate(partial(node, int(i), int(j)), *p))
        assert abs(got - want) <= 1e-11 * (1 + abs(want)), text


def _preset_expressions():
    out = []
    for name in ("cosh_example", "translation", "swallowtail", "lips", "beaks", "generic_edge"):
        p = presets.get(name)
        d = p.data
        fields = [d.metric.E, d.metric.F, d.metric.G, d.metric.lam, d.Hhat, *d.nu]
        out += [(name, k, f.ast) for k, f in enumerate(fields)]
    return out


@pytest.mark.parametrize("name,k,node", _preset_expressions(), ids=lambda x: str(x)[:20])
def test_preset_expression_derivatives_against_fd(name, k, node, rng):
    if isinstance(node, expr.Primitive) or any(isinstance(n, expr.Primitive) for n in expr._topo(node)):
        pytest.skip("quadrature primitive")
    p = presets.get(name)
    (ua, ub), (va, vb) = p.domain
    h = 1e-5
    du, dv = differentiate(node, "u"), differentiate(node, "v")
    pts = np.stack([rng.uniform(ua + 0.01, ub - 0.01, 100), rng.uniform(va + 0.01, vb - 0.01, 100)], 1)
    if name == "cosh_example":
        pts = pts[np.abs(pts[:, 1]) > 1e-3]
    for d, e in ((du, (h, 0)), (dv, (0, h))):
        sym = np.broadcast_to(evaluate(d, pts[:, 0], pts[:, 1]), len(pts))
        fd = (evaluate(node, pts[:, 0] + e[0], pts[:, 1] + e[1])
              - evaluate(node, pts[:, 0] - e[0], pts[:, 1] - e[1])) / (2 * h)
        assert np.max(np.abs(sym - fd) / (1 + np.abs(sym))) < 1e-6


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_print_parse_roundtrip(seed):
    rng = np.random.default_rng(seed)
    node = parse(random_expression(rng, depth=4))
    again = parse(to_string(node))
    pts = rng.uniform(-1, 1, (100, 2))
    a = np.broadcast_to(evaluate(node, pts[:, 0], pts[:, 1]), 100)
    b = np.broadcast_to(evaluate(again, pts[:, 0], pts[:, 1]), 100)
    np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-14)
    assert to_string(again) == to_string(node)


def test_printing_derivatives_reparses():
    node = differentiate(differentiate(parse("sinh(v)/cosh(v)^2*sin(u)"), "v"), "u")
    again = parse(to_string(node))
    assert evaluate(again, 0.4, 0.2) == pytest.approx(evaluate(node, 0.4, 0.2), rel=1e-14)


def test_substitute():
    node = expr.substitute(parse("u^2+v"), {"u": parse("v"), "v": parse("2*u")})
    assert evaluate(node, 1.0, 3.0) == 11.0

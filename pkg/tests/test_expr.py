import math
from fractions import Fraction

import pytest
import sympy as sp

from lagjet import scalar as sc
from lagjet.errors import DomainError, NonRationalError, ParseError
from lagjet.expr import BinOp, Call, Expc, Neg, Num, Pow, Var, evaluate, jet_from_expr, parse, to_source

Q = Fraction
T = sp.Symbol("t")

CORPUS = [
    "t", "1", "3/2", "-t", "--t", "t^2", "t^-1", "t^(-3)", "(t+1)^2", "-t^2",
    "(-t)^2", "t^2^2", "1/2*t", "t/2/3", "(t/2)/3", "t/(2/3)", "2*3/4", "2/3*4",
    "t - (1 - t)", "t - 1 - t", "t*(t+1)*(t-1)", "(t*t)^3", "exp(t)", "exp(-t)",
    "log(t+2)", "sin(t)^2 + cos(t)^2", "sqrt(t^2+1)", "expc(3)", "expc(-1/2)",
    "expc(0)", "2*expc(1) - expc(-1)", "sin(cos(t))", "exp(sin(t)*t)",
    "1/(1-t)", "1/(1-t)^2", "(1+t)/(1-t)", "t^3 - 3/2*t + 1/7", "-(t+1)",
    "-(t*2)", "-3", "(-3)^2", "-3^2", "0.5*t", "1.25 + t", "t^0",
    "log(1+t^2)/sqrt(2+t)", "cos(t)*sin(t) - t", "((t))", "3/2/5", "t^(2)",
]


def test_corpus_has_fifty_entries():
    assert len(CORPUS) == 50


@pytest.mark.parametrize("src", CORPUS)
def test_round_trip(src):
    e = parse(src)
    printed = to_source(e)
    assert parse(printed) == e
    # printing is a fixed point after one pass
    assert to_source(parse(printed)) == printed


def test_precedence():
    assert parse("t^2 + 3/2*t") == BinOp("+", Pow(Var(), 2), BinOp("*", Num(Q(3, 2)), Var()))
    assert parse("-t^2") == Neg(Pow(Var(), 2))
    assert parse("t^2^2") == Pow(Var(), 4)
    assert parse("expc(3)") == Expc(Q(3))
    assert parse("sin(t)") == Call("sin", Var())


@pytest.mark.parametrize(
    "src, fragment",
    [
        ("t^(1/2)", "non-integer exponent"),
        ("foo(t)", "unknown function"),
        ("t +", "line 1"),
        ("t\n  + * 2", "line 2"),
        ("expc(t)", "expc"),
        ("(t", "line 1"),
    ],
)
def test_parse_errors(src, fragment):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert fragment in str(info.value)


def test_error_reports_column():
    with pytest.raises(ParseError) as info:
        parse("t + $")
    assert info.value.line == 1 and info.value.column == 5


def test_polynomial_jet_example():
    assert jet_from_expr(parse("t^2+1"), 2, 3).derivs == (5, 4, 2, 0)


def test_expc_jet_example():
    assert jet_from_expr(parse("expc(3)"), 0, 4).derivs == (1, 3, 9, 27, 81)


@pytest.mark.parametrize("src", ["exp(sin(t))*t^2", "log(1+t^2)/sqrt(2+t)", "1/(1-t)^3", "cos(t)^3 - expc(2)"])
def test_float_jets_against_sympy(src):
    e = parse(src)
    sym = sp.sympify(src.replace("^", "**").replace("expc(2)", "exp(2*t)"), locals={"t": T})
    j = jet_from_expr(e, 0.3, 6, sc.FLOAT)
    for k in range(7):
        expected = float(sp.diff(sym, T, k).subs(T, sp.Rational(3, 10)))
        assert math.isclose(j[k], expected, rel_tol=1e-11, abs_tol=1e-11)


def test_exact_rational_rules():
    assert jet_from_expr(parse("exp(t)"), 0, 3).derivs == (1, 1, 1, 1)
    assert jet_from_expr(parse("sin(t)"), 0, 4).derivs == (0, 1, 0, -1, 0)
    assert jet_from_expr(parse("log(t)"), 1, 3).derivs == (0, 1, -1, 2)
    assert jet_from_expr(parse("sqrt(t)"), Q(4), 2).derivs == (2, Q(1, 4), Q(-1, 32))
    with pytest.raises(NonRationalError):
        jet_from_expr(parse("exp(t)"), 1, 2)
    with pytest.raises(NonRationalError):
        jet_from_expr(parse("sqrt(t)"), 2, 1)


def test_decimals_rejected_on_exact_backend():
    e = parse("0.5*t")
    with pytest.raises(NonRationalError):
        jet_from_expr(e, 0, 1)
    assert jet_from_expr(e, 0.0, 1, sc.FLOAT).derivs == (0.0, 0.5)


def test_domain_errors():
    with pytest.raises(DomainError):
        jet_from_expr(parse("1/t"), 0, 1)
    with pytest.raises(DomainError):
        jet_from_expr(parse("log(t)"), -1.0, 0, sc.FLOAT)
    with pytest.raises(DomainError):
        jet_from_expr(parse("t^-2"), 0, 0)


def test_evaluate():
    assert math.isclose(evaluate(parse("sin(t)^2 + cos(t)^2"), 0.7), 1.0)

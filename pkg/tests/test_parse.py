import pytest

from supersasaki.symexpr import (
    Const,
    ParseError,
    UnknownIdentifierError,
    canonical_text,
    eval_numeric,
    parse_expr,
    to_text,
)


def test_literals_become_exact_rationals():
    e = parse_expr("0.25")
    assert isinstance(e, Const), "decimal literal should parse to a constant"
    assert e.value.numerator == 1 and e.value.denominator == 4

    e = parse_expr("7")
    assert isinstance(e, Const) and e.value == 7


def test_precedence_and_grouping():
    # term binds tighter than sum, power tighter than product
    assert eval_numeric(parse_expr("2 + 3 * 4"), {}) == 14.0
    assert eval_numeric(parse_expr("(2 + 3) * 4"), {}) == 20.0
    assert eval_numeric(parse_expr("2 * 3 ^ 2"), {}) == 18.0
    assert eval_numeric(parse_expr("8 / 2 / 2"), {}) == 2.0
    assert eval_numeric(parse_expr("1 - 2 - 3"), {}) == -4.0


def test_unary_minus_and_functions():
    assert eval_numeric(parse_expr("-3 + 5"), {}) == 2.0
    v = eval_numeric(parse_expr("cos(0) + sin(0) + exp(0)"), {})
    assert v == 2.0
    v = eval_numeric(parse_expr("sqrt(x^2)"), {"x": 3.0})
    assert abs(v - 3.0) < 1e-12


def test_print_parse_round_trip():
    samples = [
        "x^2 + 2*x*y + y^2",
        "1/2*t",
        "cos(theta)^2 + sin(theta)^2",
        "-x + 3/4",
        "(x + y)*(x - y)",
        "exp(x)*ln(y) + sqrt(x)",
    ]
    for text in samples:
        e = parse_expr(text)
        printed = to_text(e)
        again = parse_expr(printed)
        assert to_text(again) == printed, f"printer not a fixpoint on {text!r}"
        assert canonical_text(e) == canonical_text(again)


def test_whitespace_is_ignored():
    a = parse_expr(" x +   2*y ")
    b = parse_expr("x+2*y")
    assert canonical_text(a) == canonical_text(b)


def test_vocabulary_rejects_unknown_names():
    parse_expr("r*cos(theta)", vocabulary=["r", "theta"])
    with pytest.raises(UnknownIdentifierError):
        parse_expr("r*cos(phi)", vocabulary=["r", "theta"])


def test_parse_errors_carry_offsets():
    for bad in ["x +", "(x", "x ^ y", "2 ** 3", "sin()", "x @ y", ""]:
        with pytest.raises(ParseError):
            parse_expr(bad)
    try:
        parse_expr("t +* 2")
    except ParseError as exc:
        assert exc.position == 3, f"offset should point at the '*', got {exc.position}"
    else:
        raise AssertionError("dangling operator should not parse")


def test_unknown_function_head_rejected():
    with pytest.raises(ParseError):
        parse_expr("tan(x)")
    # a bare function name with no parens is just an identifier, so a
    # vocabulary that omits it must reject it
    with pytest.raises(UnknownIdentifierError):
        parse_expr("sin + 1", vocabulary=["x"])

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cvschmidt as cs
from cvschmidt import InputError, NumericalError
from cvschmidt.expr import BinOp, Call, ExpressionSyntaxError, Neg, Num, Var, compile_node, parse, render


def value(src, p=0.7, q=-1.3):
    return complex(cs.parse_expression(src)(p, q))


def test_product():
    assert float(cs.parse_expression("p*q")(2.0, 3.0)) == 6.0


def test_pdc_expression_matches_builtin():
    expr = cs.parse_expression("exp(-(p+q)^2)*sinc((2.135*p+7.455*q)/2)")
    builtin = cs.pdc_amplitude(cs.PdcParams(2.135, 7.455))
    rng = np.random.default_rng(5)
    p, q = rng.normal(scale=1.5, size=(2, 100))
    np.testing.assert_allclose(expr(p, q), builtin(p, q), rtol=1e-12, atol=1e-300)


def test_double_star_is_a_syntax_error_at_offset_2():
    with pytest.raises(ExpressionSyntaxError) as info:
        cs.parse_expression("p**")
    assert info.value.offset == 2


@pytest.mark.parametrize("src, offset", [
    ("", 0), ("p +", 3), ("(p", 2), ("p q", 2), ("exp p", 4), ("2 $ p", 2), ("sin()", 4),
])
def test_syntax_error_positions(src, offset):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse(src)
    assert info.value.offset == offset


def test_unknown_identifier():
    with pytest.raises(InputError, match="unknown identifier 'x'"):
        parse("p + x")


def test_division_by_zero_at_evaluation():
    amp = cs.parse_expression("1/(p-q)")
    assert float(amp(2.0, 1.0)) == 1.0
    with pytest.raises(NumericalError):
        amp(np.array([1.0, 2.0]), np.array([1.0, 0.0]))


@pytest.mark.parametrize("src, expected", [
    ("-p^2", -0.49),
    ("2^3^2", 512.0),
    ("p - q - 1", 0.7 + 1.3 - 1),
    ("8/4/2", 1.0),
    ("-(p+q)^2", -(0.7 - 1.3) ** 2),
    ("2*-q", 2.6),
    ("p^-2", 0.7 ** -2),
    ("+p", 0.7),
    ("abs(q) + sqrt(4) + cos(0) + sin(0)", 1.3 + 2 + 1),
    ("sinc(0) + exp(1)", 1 + math.e),
    ("1.5e2 + .5", 150.5),
])
def test_precedence_and_functions(src, expected):
    assert value(src) == pytest.approx(expected, rel=1e-15)


def test_complex_via_sqrt_of_negative():
    assert value("exp(sqrt(-1)*p)") == pytest.approx(complex(math.cos(0.7), math.sin(0.7)), rel=1e-15)


def test_scalar_expression_broadcasts():
    out = cs.parse_expression("2")(np.zeros((3, 1)), np.zeros((1, 4)))
    assert out.shape == (3, 4) and np.all(out == 2.0)


# --- render / parse round trip ----------------------------------------------

leaves = st.one_of(
    st.builds(Var, st.sampled_from(["p", "q"])),
    st.builds(Num, st.floats(0, 1e6, allow_nan=False, allow_infinity=False)),
)
trees = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.builds(Neg, kids),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "^"]), kids, kids),
        st.builds(Call, st.sampled_from(sorted(cs.expr.FUNCTIONS)), kids),
    ),
    max_leaves=12,
)


@settings(max_examples=300)
@given(trees)
def test_render_parse_round_trip(tree):
    text = render(tree)
    assert parse(text) == tree
    assert render(parse(text)) == text


def _random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return Var(rng.choice(["p", "q"])) if rng.random() < 0.6 else Num(round(rng.uniform(0.1, 3), 3))
    kind = rng.integers(3)
    if kind == 0:
        return Neg(_random_tree(rng, depth - 1))
    if kind == 1:
        return Call(rng.choice(["exp", "sin", "cos", "sinc", "abs"]), _random_tree(rng, depth - 1))
    return BinOp(rng.choice(["+", "-", "*", "^"]), _random_tree(rng, depth - 1), _random_tree(rng, depth - 1))


def test_fifty_expression_corpus():
    rng = np.random.default_rng(2024)
    corpus = [_random_tree(rng, 4) for _ in range(50)]
    p, q = np.linspace(0.2, 1.1, 5), np.linspace(0.3, 0.9, 5)
    for tree in corpus:
        text = render(tree)
        again = parse(text)
        assert render(again) == text
        with np.errstate(all="ignore"):
            a, b = compile_node(tree)(p, q), compile_node(again)(p, q)
        np.testing.assert_array_equal(a, b)


def test_parsed_amplitude_metadata():
    amp = cs.parse_expression("p*q")
    assert amp.metadata == {"kind": "expression", "expr": "p*q"}
    assert amp.norm_hint is None

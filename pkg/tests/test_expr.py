import cmath

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from harmval.corpus import BUILTIN_EXPRESSIONS
from harmval.errors import (
    ExprSyntaxError,
    MathDomainError,
    NonAnalyticConstruct,
    OutsideDisk,
    RangeViolation,
    UnknownIdentifier,
)
from harmval.expr import (
    Z,
    Add,
    Call,
    Const,
    Div,
    Mul,
    Pow,
    Sub,
    Var,
    compose,
    eval_jet,
    evaluate,
    jet_array,
    koebe,
    parse,
    to_text,
)

from .conftest import halton_disk


def jet_tuple(j):
    return (j.f0, j.f1, j.f2, j.f3)


# ---------------------------------------------------------------- parsing


def test_parse_variable():
    assert parse("z") == Var()


def test_parse_koebe_quotient_structure():
    f = parse("z/(1-z)^2")
    assert isinstance(f, Div) and f.guarded
    assert f.left == Var()
    assert isinstance(f.right, Pow) and f.right.n == 2
    assert isinstance(f.right.base, Sub)
    for z in (0.0, 0.3 - 0.2j, -0.7j):
        assert jet_tuple(eval_jet(f, z)) == pytest.approx(jet_tuple(eval_jet(koebe(), z)), rel=1e-14)


def test_whitespace_is_insignificant():
    a = parse(" z ^ 2 +\t0.5i * exp( z ) ")
    b = parse("z^2+0.5i*exp(z)")
    assert a == b


def test_compound_literal():
    f = parse("0.5+0.25i")
    assert complex(evaluate(f, 0.1)) == 0.5 + 0.25j


@pytest.mark.parametrize("text,offset", [("conj(z)", 0), ("1 + |z|", 4), ("z*re(z)", 2)])
def test_non_analytic(text, offset):
    with pytest.raises(NonAnalyticConstruct) as err:
        parse(text)
    assert err.value.offset == offset


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as err:
        parse("z + sin(z)")
    assert err.value.offset == 4


@pytest.mark.parametrize("text,offset", [("z +", 3), ("(z", 2), ("z^1.5", 2), ("2z", 1), ("exp()", 4)])
def test_syntax_errors_report_offsets(text, offset):
    with pytest.raises(ExprSyntaxError) as err:
        parse(text)
    assert err.value.offset == offset


def test_parse_errors_are_value_errors():
    with pytest.raises(ValueError):
        parse("w")


# ---------------------------------------------------------------- jets


def test_identity_jet():
    assert jet_tuple(eval_jet(Z, 0.3)) == (0.3, 1, 0, 0)


def test_koebe_jet_at_origin():
    assert jet_tuple(eval_jet(koebe(), 0)) == pytest.approx((0, 1, 4, 18), abs=1e-15)


def test_exp_jet_at_origin():
    assert jet_tuple(eval_jet(parse("exp(z)"), 0)) == (1, 1, 1, 1)


def test_compose_koebe_half():
    j = eval_jet(compose(koebe(), Z / 2), 0)
    assert j.f0 == 0
    assert j.f1 == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("name", sorted(BUILTIN_EXPRESSIONS))
def test_compose_inner_identity(name):
    f = parse(BUILTIN_EXPRESSIONS[name])
    z = halton_disk(50, 0.85)
    a, _ = jet_array(compose(f, Z), z)
    c, _ = jet_array(f, z)
    for x, w in zip(jet_tuple(a), jet_tuple(c)):
        np.testing.assert_allclose(x, w, rtol=1e-14)


@pytest.mark.parametrize("phi", ["z/2", "(z+0.3)/(1+0.3*z)", "0.3*exp(z)", "z^2*0.9i"])
def test_compose_outer_identity(phi):
    phi = parse(phi)
    z = halton_disk(50, 0.85)
    a, sa = jet_array(compose(Z, phi), z)
    c, _ = jet_array(phi, z)
    assert not sa.any()
    for x, w in zip(jet_tuple(a), jet_tuple(c)):
        np.testing.assert_allclose(x, w, rtol=1e-14)


def test_compose_flags_range_violation():
    z = np.array([0.1, 0.8])
    _, status = jet_array(compose(Z, parse("2*z")), z)
    assert status[0] == 0 and status[1] != 0
    with pytest.raises(RangeViolation):
        eval_jet(compose(Z, parse("2*z")), 0.8)


def _sympy_oracle(text):
    zs = sp.Symbol("z")
    expr = sp.sympify(
        text.replace("^", "**").replace("koebe(z)", "z/(1-z)**2").replace("0.5i", "0.5*I"),
        locals={"z": zs},
    )
    ders = [expr] + [sp.diff(expr, zs, k) for k in (1, 2, 3)]
    return [sp.lambdify(zs, d, "numpy") for d in ders]


@pytest.mark.parametrize("name", sorted(BUILTIN_EXPRESSIONS))
def test_jets_match_symbolic_derivatives(name):
    text = BUILTIN_EXPRESSIONS[name]
    funcs = _sympy_oracle(text)
    z = halton_disk(100)
    jet, status = jet_array(parse(text), z)
    assert not status.any()
    for got, fn in zip(jet_tuple(jet), funcs):
        want = np.broadcast_to(np.asarray(fn(z), dtype=complex), z.shape)
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-13)


def central_difference_errors(f, z, h=1e-5):
    """Max relative error of each jet entry against central differences of
    the entry below it, in both the real and imaginary directions."""
    jet, _ = jet_array(f, z)
    lo = []
    for dz in (h, 1j * h):
        plus, _ = jet_array(f, z + dz)
        minus, _ = jet_array(f, z - dz)
        p, m = jet_tuple(plus), jet_tuple(minus)
        for k in range(3):
            fd = (p[k] - m[k]) / (2 * dz)
            exact = jet_tuple(jet)[k + 1]
            scale = np.maximum(np.abs(exact), np.abs(jet_tuple(jet)[k]))
            lo.append(np.max(np.abs(fd - exact) / scale))
    return max(lo)


@pytest.mark.parametrize("name", sorted(BUILTIN_EXPRESSIONS))
def test_jets_match_finite_differences(name):
    f = parse(BUILTIN_EXPRESSIONS[name])
    assert central_difference_errors(f, halton_disk(100)) < 1e-6


dyadic = st.integers(-64, 64).map(lambda k: k / 64)


@given(c=st.lists(st.tuples(dyadic, dyadic), min_size=4, max_size=4), x=dyadic, y=dyadic)
def test_cubic_jets_exact(c, x, y):
    c0, c1, c2, c3 = (complex(a, b) for a, b in c)
    z = complex(x, y) * 0.5
    f = Const(c0) + Const(c1) * Z + Const(c2) * Z ** 2 + Const(c3) * Z ** 3
    j = eval_jet(f, z)
    assert j.f0 == c0 + c1 * z + c2 * z * z + c3 * z * z * z
    assert j.f1 == c1 + 2 * c2 * z + 3 * c3 * z * z
    assert j.f2 == 2 * c2 + 6 * c3 * z
    assert j.f3 == 6 * c3


def test_log_cut_is_an_error():
    with pytest.raises(MathDomainError):
        eval_jet(parse("log(z-0.5)"), 0.2)


def test_vanishing_denominator():
    with pytest.raises(MathDomainError):
        eval_jet(parse("1/(z-0.5)"), 0.5)


def test_outside_disk():
    with pytest.raises(OutsideDisk):
        eval_jet(Z, 1.0)


def test_array_status_marks_bad_points():
    z = np.array([0.1, 0.5, 0.2j])
    jet, status = jet_array(parse("1/(z-0.5)"), z)
    assert list(status != 0) == [False, True, False]
    assert np.isfinite(jet.f0[[0, 2]]).all()


# ---------------------------------------------------------------- printing


constants = st.builds(complex, st.floats(-3, 3, allow_nan=False), st.floats(-3, 3, allow_nan=False)).map(Const)
leaves = st.one_of(st.just(Z), constants)


def _extend(children):
    return st.one_of(
        st.builds(Add, children, children),
        st.builds(Sub, children, children),
        st.builds(Mul, children, children),
        st.builds(lambda a: Pow(a, 2), children),
        st.builds(lambda a: Call("exp", a), children),
        st.builds(lambda a: Div(a, Const(3) - Z), children),
    )


trees = st.recursive(leaves, _extend, max_leaves=8)


@given(trees)
def test_print_parse_round_trip(f):
    g = parse(to_text(f))
    z = halton_disk(20)
    a, b = evaluate(f, z), evaluate(g, z)
    assert np.all(np.abs(a - b) <= 1e-15 * np.maximum(1.0, np.abs(a)))


def test_print_uses_given_variable_name():
    assert "w" in to_text(koebe(), var="w")
    assert "z" not in to_text(koebe(), var="w")


def test_exp_values():
    assert complex(evaluate(parse("exp(z)"), 0)) == 1
    assert abs(complex(evaluate(compose(parse("exp(z)"), Const(0.5j) * Z), 0.9)) - cmath.exp(0.45j)) < 1e-15

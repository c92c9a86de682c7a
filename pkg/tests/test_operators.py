import cmath

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from harmval.corpus import dilatation_automorphism_map, disk_automorphisms, harmonic_corpus
from harmval.errors import DilatationUnimodular
from harmval.expr import Const, Z, eval_jet, jet_array, koebe, mobius, parse
from harmval.harmonic import make_harmonic
from harmval.operators import (
    analytic_operator_arrays,
    analytic_operators,
    chain_rule_residual,
    compose_map,
    harmonic_operator_arrays,
    harmonic_operators,
    weighted_quantity,
)

from .conftest import halton_disk

ORIENTED = [name for name in harmonic_corpus() if name != "cube"]


def random_mobius(rng):
    """(az+b)/(cz+d) with ad - bc away from 0 and the pole outside |z| < 1.5."""
    while True:
        a, b, c, d = rng.normal(size=4) + 1j * rng.normal(size=4)
        if abs(a * d - b * c) > 0.1 and abs(d) > 1.5 * abs(c):
            return mobius(a, b, c, d)


# ---------------------------------------------------------------- examples


def test_identity_operators():
    for z in (0, 0.5, -0.3j):
        v = analytic_operators(eval_jet(Z, z), z)
        assert (v.p, v.s, v.hyp) == (0, 0, 0)


def test_mobius_example():
    f = parse("(z+0.3)/(1+0.3*z)")
    assert abs(analytic_operators(eval_jet(f, 0.2), 0.2).s) < 1e-12


def test_koebe_at_origin():
    v = analytic_operators(eval_jet(koebe(), 0), 0)
    assert v.p == pytest.approx(4, abs=1e-14)
    assert v.s == pytest.approx(-6, abs=1e-13)


def test_koebe_closed_forms():
    z = halton_disk(200, 0.95)
    vals, status = analytic_operator_arrays(jet_array(koebe(), z)[0], z)
    assert not status.any()
    np.testing.assert_allclose(vals.p, 1 / (1 + z) + 3 / (1 - z), rtol=1e-12)
    np.testing.assert_allclose(vals.s, -6 / (1 - z * z) ** 2, rtol=1e-11)


def test_reduction_example():
    f = make_harmonic("exp(z)+z^2", "0")
    z = 0.3 - 0.1j
    a = harmonic_operators(f, z)
    b = analytic_operators(eval_jet(f.h, z), z)
    assert a.p == b.p and a.s == b.s


def test_omega_z_example():
    v = harmonic_operators(make_harmonic("z", "z^2/2"), 0.5)
    assert v.p == pytest.approx(-2 / 3, abs=1e-15)
    assert v.s == pytest.approx(-2 / 3, abs=1e-15)
    assert abs(v.hyp) == pytest.approx(1, abs=1e-15)
    assert v.becker_q == pytest.approx(1.5, abs=1e-15)


@given(st.floats(-0.95, 0.95), st.floats(-0.95, 0.95))
def test_omega_z_closed_forms(x, y):
    z = complex(x, y)
    if abs(z) >= 0.99:
        return
    v = harmonic_operators(make_harmonic("z", "z^2/2"), z)
    zb = z.conjugate()
    d = 1 - abs(z) ** 2
    assert v.p == pytest.approx(-zb / d, rel=1e-12, abs=1e-15)
    assert v.s == pytest.approx(-1.5 * (zb / d) ** 2, rel=1e-12, abs=1e-15)
    assert v.pre_q == pytest.approx(abs(z), rel=1e-12, abs=1e-15)


def test_affine_example():
    f = make_harmonic("z", "0.5*z")
    for z in (0.0, 0.6, -0.2 + 0.7j):
        v = harmonic_operators(f, z)
        assert (v.p, v.s, v.hyp, v.becker_q) == (0, 0, 0, 0)


def test_unimodular_dilatation():
    f = make_harmonic("z", "z^2/2")
    # |omega| = |z| -> 1; the weighted quantities blow up, scalar calls raise
    with pytest.raises(DilatationUnimodular):
        harmonic_operators(f, 1 - 1e-14)
    vals, _ = harmonic_operator_arrays(f, np.array([1 - 1e-14]))
    assert np.isinf(vals.becker_q[0])


def test_symbolic_oracle_harmonic_koebe():
    """S_H against sympy differentiation of the defining formula."""
    zs = sp.Symbol("z")
    h = (zs - zs ** 2 / 2 + zs ** 3 / 6) / (1 - zs) ** 3
    g = (zs ** 2 / 2 + zs ** 3 / 6) / (1 - zs) ** 3
    w = sp.simplify(sp.diff(g, zs) / sp.diff(h, zs))
    P = sp.diff(h, zs, 2) / sp.diff(h, zs)
    S = sp.diff(P, zs) - P ** 2 / 2
    fns = [sp.lambdify(zs, e, "numpy") for e in (w, sp.diff(w, zs), sp.diff(w, zs, 2), P, S)]
    f = harmonic_corpus()["harmonic_koebe"][0]
    for z in halton_disk(25, 0.8):
        om, dom, ddom, p, s = (complex(fn(z)) for fn in fns)
        k = om.conjugate() / (1 - abs(om) ** 2)
        want_p = p - k * dom
        want_s = s + k * (p * dom - ddom) - 1.5 * (k * dom) ** 2
        v = harmonic_operators(f, z)
        assert v.p == pytest.approx(want_p, rel=1e-10)
        assert v.s == pytest.approx(want_s, rel=1e-9)


# ---------------------------------------------------------------- properties


def test_mobius_annihilation():
    rng = np.random.default_rng(7)
    z = halton_disk(100)
    worst = 0.0
    for _ in range(20):
        vals, status = analytic_operator_arrays(jet_array(random_mobius(rng), z)[0], z)
        assert not status.any()
        worst = max(worst, float(np.max(np.abs(vals.s))))
    assert worst < 1e-12


@pytest.mark.parametrize("text", ["z", "koebe(z)", "exp(z)", "log(1+z)", "z/(1-z^2)",
                                  "z+0.3*z^2", "exp(4*z)", "(z+0.3)/(1+0.3*z)", "z-z^2/2", "koebe(z/2)"])
def test_reduction_bitwise(text):
    f = make_harmonic(text, "0")
    z = halton_disk(300, 0.95)
    a, _ = harmonic_operator_arrays(f, z)
    b, _ = analytic_operator_arrays(jet_array(f.h, z)[0], z)
    assert np.array_equal(a.p, b.p) and np.array_equal(a.s, b.s)


@pytest.mark.parametrize("name", ORIENTED)
def test_becker_is_pre_plus_hyp(name):
    f, _ = harmonic_corpus()[name]
    z = halton_disk(300, 0.95)
    v, _ = harmonic_operator_arrays(f, z)
    assert np.array_equal(v.becker_q, v.pre_q + np.abs(v.hyp))
    assert np.all(v.becker_q >= 0) and np.all(v.nehari_q >= 0)


@pytest.mark.parametrize("name", ORIENTED)
def test_schwarz_pick(name):
    f, _ = harmonic_corpus()[name]
    z = halton_disk(2000, 0.999)
    v, status = harmonic_operator_arrays(f, z)
    assert not status.any()
    assert np.all(np.abs(v.hyp) <= 1 + 1e-12)


@pytest.mark.parametrize("a,theta", [(0.0, 0.0), (0.5, 0.0), (-0.3 + 0.4j, 1.1), (0.7j, -2.5)])
def test_automorphism_dilatation_is_extremal(a, theta):
    f = dilatation_automorphism_map(a, theta)
    z = halton_disk(2000, 0.9)
    v, status = harmonic_operator_arrays(f, z)
    assert not status.any()
    np.testing.assert_allclose(np.abs(v.hyp), 1.0, atol=1e-12)


def test_chain_rule_identity():
    f = harmonic_corpus()["shear"][0]
    assert chain_rule_residual(f, Z, 0.3 + 0.2j) == (0.0, 0.0, 0.0)


def test_chain_rule_koebe_mobius():
    f = make_harmonic("koebe(z)", "0")
    pre, sch, _ = chain_rule_residual(f, parse("(z+0.3)/(1+0.3*z)"), 0.2)
    assert pre < 1e-9 and sch < 1e-9


def test_hyperbolic_chain_inequality_is_strict_for_contractions():
    f = make_harmonic("z", "z^2/2")
    pre, sch, gap = chain_rule_residual(f, Z / 2, 0.4)
    assert pre < 1e-12 and sch < 1e-12
    assert gap < -0.1


@pytest.mark.parametrize("name", ["omega_z", "shear", "harmonic_koebe", "const_dilatation", "auto_dilatation"])
def test_chain_rules_under_automorphisms(name):
    f, _ = harmonic_corpus()[name]
    for phi in disk_automorphisms():
        for z in halton_disk(10, 0.7):
            pre, sch, gap = chain_rule_residual(f, phi, z)
            assert pre < 1e-9 and sch < 1e-9 and gap <= 1e-12


@given(theta=st.floats(0, 2 * np.pi), x=st.floats(-0.9, 0.9), y=st.floats(-0.9, 0.9))
def test_becker_rotation_invariance(theta, x, y):
    z = complex(x, y)
    if abs(z) > 0.95:
        return
    rot = cmath.exp(1j * theta)
    f = harmonic_corpus()["shear"][0]
    F = compose_map(f, Const(rot) * Z)
    a = harmonic_operators(F, z).becker_q
    b = harmonic_operators(f, rot * z).becker_q
    assert a == pytest.approx(b, rel=1e-12, abs=1e-14)


def test_weighted_quantity_channels():
    f = make_harmonic("z", "z^2/2")
    z = np.array([0.5, 0.3j])
    np.testing.assert_allclose(weighted_quantity(f, "pre")(z), np.abs(z), atol=1e-15)
    np.testing.assert_allclose(weighted_quantity(f, "hyp")(z), 1.0, atol=1e-15)
    np.testing.assert_allclose(weighted_quantity(f, "becker")(z), np.abs(z) + 1, atol=1e-15)
    np.testing.assert_allclose(weighted_quantity(f, "nehari")(z), 1.5 * np.abs(z) ** 2, atol=1e-15)
    with pytest.raises(ValueError):
        weighted_quantity(f, "dpre")
    with pytest.raises(ValueError):
        weighted_quantity(f, "nonsense")


def test_derivative_pre_channel():
    z = halton_disk(100, 0.9)
    got = weighted_quantity(koebe(), "dpre")(z)
    want = np.abs(-1 / (1 + z) ** 2 + 3 / (1 - z) ** 2) * (1 - np.abs(z) ** 2) ** 2
    np.testing.assert_allclose(got, want, rtol=1e-11)

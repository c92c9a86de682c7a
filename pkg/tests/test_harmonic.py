import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from harmval.corpus import harmonic_corpus
from harmval.errors import MathDomainError, OrientationError
from harmval.expr import Z, evaluate, parse
from harmval.harmonic import (
    dilatation_from_jets,
    dilatation_jet,
    eval_point,
    from_spec,
    is_analytic,
    make_harmonic,
    map_jets,
    values_array,
)

from .conftest import halton_disk

ORIENTED = [name for name in harmonic_corpus() if name != "cube"]


def test_omega_z():
    f = make_harmonic("z", "z^2/2")
    for z in (0.1, 0.5j, -0.3 + 0.4j):
        assert dilatation_jet(f, z).w0 == pytest.approx(z, abs=1e-15)


def test_orientation_reversing_rejected():
    with pytest.raises(OrientationError):
        make_harmonic("z", "2*z")


def test_equal_derivatives_rejected():
    with pytest.raises(OrientationError):
        make_harmonic("z", "z")


def test_canonicalization_shifts_g():
    f = make_harmonic("z", "1+z^2/2")
    z = halton_disk(20)
    np.testing.assert_allclose(evaluate(f.g, z), z * z / 2, atol=1e-15)
    assert complex(evaluate(f.g, 0.0)) == 0


def test_canonicalization_idempotent():
    f = make_harmonic("exp(z)", "0.3+0.2*z+z^3")
    g = make_harmonic(f.h, f.g)
    z = halton_disk(50)
    np.testing.assert_array_equal(values_array(f, z)[0], values_array(g, z)[0])


def test_affine_jacobian():
    f = make_harmonic("z", "0.5*z")
    for z in (0.0, 0.3, -0.8j):
        p = eval_point(f, z)
        assert p.jacobian == pytest.approx(0.75, abs=1e-15)
        assert not p.negative_jacobian


def test_jacobian_of_omega_z():
    p = eval_point(make_harmonic("z", "z^2/2"), 0.6)
    assert p.jacobian == pytest.approx(0.64, abs=1e-15)
    assert p.value == pytest.approx(0.6 + 0.18)


def test_analytic_jacobian():
    f = make_harmonic("koebe(z)", "0")
    p = eval_point(f, 0.4)
    assert p.jacobian == pytest.approx(abs((1 + 0.4) / (1 - 0.4) ** 3) ** 2)


def test_negative_jacobian_flag():
    # |g'| > |h'| for |z| > 1/2
    f = make_harmonic("z", "z^2")
    assert eval_point(f, 0.7).negative_jacobian
    assert not eval_point(f, 0.3).negative_jacobian


def test_dilatation_examples():
    d = dilatation_jet(make_harmonic("z", "z^2/2"), 0.5)
    assert (d.w0, d.w1, d.w2) == pytest.approx((0.5, 1, 0), abs=1e-15)
    for z in (0.0, 0.7j):
        d = dilatation_jet(make_harmonic("z", "0.5*z"), z)
        assert (d.w0, d.w1, d.w2) == pytest.approx((0.5, 0, 0), abs=1e-15)
    d = dilatation_jet(make_harmonic("z", "z^3/3"), 0.4)
    assert (d.w0, d.w1, d.w2) == pytest.approx((0.16, 0.8, 2), abs=1e-14)


def test_dilatation_needs_locally_univalent_h():
    f = make_harmonic("z^3", "0")
    with pytest.raises(MathDomainError):
        dilatation_jet(f, 0.0)


@pytest.mark.parametrize("name", ORIENTED)
def test_dilatation_in_unit_disk(name):
    f, _ = harmonic_corpus()[name]
    z = halton_disk(2000, 0.999)
    hj, gj, status = map_jets(f, z)
    w0, _, _ = dilatation_from_jets(hj, gj, status)
    assert not status.any()
    assert np.all(np.abs(w0) < 1)


@pytest.mark.parametrize("name", ORIENTED)
def test_jacobian_factorization(name):
    f, _ = harmonic_corpus()[name]
    z = halton_disk(500, 0.95)
    hj, gj, status = map_jets(f, z)
    w0, _, _ = dilatation_from_jets(hj, gj, status)
    _, jac, _ = values_array(f, z)
    np.testing.assert_allclose(jac, np.abs(hj.f1) ** 2 * (1 - np.abs(w0) ** 2), rtol=1e-12)


@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_dilatation_matches_quotient(x, y):
    z = complex(x, y) * 0.7
    f = make_harmonic("koebe(z)", "z^2*koebe(z)/3")
    d = dilatation_jet(f, z)
    # omega = g'/h' with g = z^2 k / 3
    k = z / (1 - z) ** 2
    dk = (1 + z) / (1 - z) ** 3
    want = (2 * z * k + z * z * dk) / 3 / dk
    assert d.w0 == pytest.approx(want, rel=1e-12, abs=1e-15)


def test_from_spec_round_trip():
    f = from_spec({"label": "s", "h": "z + 0.2*z^2", "g": "0.1*z^2"})
    g = from_spec(f.to_spec())
    z = halton_disk(30)
    np.testing.assert_allclose(values_array(f, z)[0], values_array(g, z)[0], rtol=1e-15)
    assert g.label == "s"


def test_is_analytic():
    assert is_analytic(make_harmonic("koebe(z)", "0"))
    assert not is_analytic(make_harmonic(Z, parse("0.01*z^5")))

"""Truncated multivariate jet arithmetic: algebra laws, truncation caps,
series functions, and mixed-group derivative extraction."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finsler_lab.jets import Jet, JetSpace, jlog, jsqrt

floats = st.floats(min_value=-2.0, max_value=2.0,
                   allow_nan=False, allow_infinity=False)


def _space():
    return JetSpace([("y", 2, 3), ("w", 2, 2)])


def _random_jet(space, rng):
    return Jet(space, rng.uniform(-1, 1, size=space.size))


def test_space_is_cached():
    assert JetSpace([("y", 2, 3)]) is JetSpace([("y", 2, 3)])
    assert JetSpace([("y", 2, 3)]) is not JetSpace([("y", 2, 2)])


def test_variable_and_const_structure():
    sp = _space()
    x = sp.var("y", 0, 1.5)
    assert x.value == 1.5
    assert x.c[sp.basis_index("y", 0)] == 1.0
    assert np.count_nonzero(x.c) == 2
    c = sp.const(3.0)
    assert c.value == 3.0
    assert np.count_nonzero(c.c) == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), floats)
def test_ring_laws(seed, scalar):
    sp = _space()
    rng = np.random.RandomState(seed)
    a, b, c = (_random_jet(sp, rng) for _ in range(3))
    assert np.allclose((a + b).c, (b + a).c)
    assert np.allclose((a * b).c, (b * a).c)
    assert np.allclose(((a + b) + c).c, (a + (b + c)).c)
    assert np.allclose((a * (b + c)).c, (a * b + a * c).c, atol=1e-12)
    assert np.allclose(((a * b) * c).c, (a * (b * c)).c, atol=1e-12)
    assert np.allclose((scalar * a).c, (a * scalar).c)
    assert np.allclose((a - a).c, 0.0)


def test_truncation_caps_are_per_group():
    sp = _space()
    y0 = sp.var("y", 0, 0.0)
    w0 = sp.var("w", 0, 0.0)
    # y-cap is 3: y0**4 truncates to zero, y0**3 survives
    assert np.allclose((y0 ** 4).c, 0.0)
    assert (y0 ** 3).deriv(y=(3, 0)) == pytest.approx(6.0)
    # w-cap is 2: w0**3 truncates, but y0**3 * w0**2 is representable
    assert np.allclose((w0 ** 3).c, 0.0)
    mixed = (y0 ** 3) * (w0 ** 2)
    assert mixed.deriv(y=(3, 0), w=(2, 0)) == pytest.approx(6.0 * 2.0)


def test_product_and_chain_rule_derivatives():
    sp = JetSpace([("y", 2, 3)])
    a, b = 0.7, -0.4
    y0 = sp.var("y", 0, a)
    y1 = sp.var("y", 1, b)
    f = (y0 * y0 * y1 + y1) * (1.0 + y0)
    # d^2/dy0 dy1 of (y0^2 y1 + y1)(1 + y0) = d/dy0 [(y0^2+1)(1+y0)]
    assert f.deriv(y=(1, 1)) == pytest.approx(2 * a * (1 + a) + a * a + 1)
    # third derivative d^3/dy0^2 dy1 = d^2/dy0^2 [(y0^2+1)(1+y0)] = 6*y0 + 2
    assert f.deriv(y=(2, 1)) == pytest.approx(6 * a + 2)


def test_reciprocal_sqrt_log_identities():
    sp = _space()
    rng = np.random.RandomState(3)
    x = Jet(sp, rng.uniform(-0.5, 0.5, size=sp.size))
    x = x + 2.0  # push the value away from zero
    assert np.allclose((x * x.reciprocal()).c, sp.const(1.0).c, atol=1e-12)
    r = x.sqrt()
    assert np.allclose((r * r).c, x.c, atol=1e-12)
    assert np.allclose(jlog(x * x).c, (2.0 * jlog(x)).c, atol=1e-12)
    assert np.allclose((x ** 0.5).c, r.c, atol=1e-12)
    assert np.allclose((x ** -1.5).c, (r * x).reciprocal().c, atol=1e-11)


def test_series_helpers_accept_plain_floats():
    assert jsqrt(4.0) == 2.0
    assert jlog(math.e) == pytest.approx(1.0)


def test_division_by_jet_and_rdiv():
    sp = _space()
    x = sp.var("y", 0, 2.0)
    q = 1.0 / x
    assert q.value == pytest.approx(0.5)
    assert q.deriv(y=(1, 0)) == pytest.approx(-0.25)
    assert np.allclose(((x / x)).c, sp.const(1.0).c, atol=1e-14)


def test_nonpositive_base_rejected():
    sp = _space()
    with pytest.raises(ZeroDivisionError):
        sp.var("y", 0, 0.0).reciprocal()
    with pytest.raises(ValueError):
        jsqrt(sp.var("y", 0, -1.0))
    with pytest.raises(ValueError):
        jlog(sp.var("y", 0, 0.0))


def test_integer_pow_matches_repeated_product():
    sp = _space()
    rng = np.random.RandomState(8)
    x = _random_jet(sp, rng)
    prod = sp.const(1.0)
    for k in range(1, 6):
        prod = prod * x
        assert np.allclose((x ** k).c, prod.c, atol=1e-10)


def test_mixed_group_derivative_extraction():
    sp = JetSpace([("y", 2, 3), ("w", 2, 2), ("x", 2, 1)])
    y0 = sp.var("y", 0, 0.3)
    w1 = sp.var("w", 1, -0.2)
    x0 = sp.var("x", 0, 0.1)
    f = jsqrt(1.0 + y0 * y0 + w1 * w1 + x0 * y0)

    def ref(y, w, x):
        return math.sqrt(1.0 + y * y + w * w + x * y)

    h = 1e-5
    fd = (ref(0.3 + h, -0.2, 0.1 + h) - ref(0.3 + h, -0.2, 0.1 - h)
          - ref(0.3 - h, -0.2, 0.1 + h) + ref(0.3 - h, -0.2, 0.1 - h)) / (4 * h * h)
    assert f.deriv(y=(1, 0), x=(1, 0)) == pytest.approx(fd, abs=1e-6)
    # factorials: coefficient of y0^2 w1^2 times 2! * 2!
    g = (y0 * y0) * (w1 * w1)
    assert g.deriv(y=(2, 0), w=(0, 2)) == pytest.approx(4.0)


def test_flat_index_validation():
    sp = _space()
    with pytest.raises(ValueError):
        sp.flat_index({"y": (4, 0)})       # exceeds group cap
    with pytest.raises(ValueError):
        sp.flat_index({"y": (1, 0, 0)})    # wrong arity

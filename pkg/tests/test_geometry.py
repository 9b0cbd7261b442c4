"""Numeric geometry engine: base-metric calculus, beta invariants, jet-based
curvature tensors, homogeneity, degenerations, and convexity checks."""

import math
from fractions import Fraction

import numpy as np
import pytest

from finsler_lab import geometry as geo
from finsler_lab.symbolic import PhiSpec


def _euclidean(n=3):
    return geo.ChartMetric(
        n=n,
        a_fn=lambda x: [[1.0 if i == j else 0.0 for j in range(n)]
                        for i in range(n)],
        b_fn=lambda x: list(x),
        domain=lambda x: True,
        c_fn=lambda x: 1.0,
        name="euclidean")


def _conformal_ball(n=2):
    """a_ij = delta_ij / (1 - |x|^2)^2 on the unit ball."""

    def a_fn(x):
        r2 = sum(v * v for v in x)
        w = 1.0 - r2
        f = (w * w).reciprocal() if hasattr(w, "reciprocal") else 1.0 / (w * w)
        return [[f if i == j else 0.0 * f for j in range(n)] for i in range(n)]

    return geo.ChartMetric(
        n=n, a_fn=a_fn, b_fn=lambda x: [0.0 * v for v in x],
        domain=lambda x: sum(float(v) ** 2 for v in x) < 0.9,
        name="conformal-ball")


def test_christoffel_euclidean_is_zero():
    gamma = geo.christoffel(_euclidean(3), [0.2, -0.1, 0.3])
    assert np.abs(gamma).max() == 0.0


def test_christoffel_matches_finite_differences(entries):
    cases = [(_conformal_ball(2), [0.3, -0.2]),
             (entries["square"].metric, [0.25, 0.1, -0.15])]
    for metric, x in cases:
        _check_christoffel(metric, x)


def _check_christoffel(metric, x):
    gamma = geo.christoffel(metric, x)
    gamma_fd = geo.christoffel_fd(metric, x)
    assert np.abs(gamma - gamma_fd).max() <= 1e-7
    # symmetry in the lower indices
    assert np.abs(gamma - np.transpose(gamma, (0, 2, 1))).max() <= 1e-12


def test_beta_invariants_euclidean_radial():
    metric = _euclidean(3)
    x = np.array([0.3, 0.1, -0.2])
    y = np.array([0.5, -0.4, 0.8])
    inv = geo.beta_invariants(metric, x, y)
    # nabla_j b_i = delta_ij: purely symmetric, conformal with c = 1
    assert np.abs(inv.r_ij - np.eye(3)).max() <= 1e-12
    assert np.abs(inv.s_ij).max() <= 1e-12
    assert inv.fitted_c == pytest.approx(1.0, abs=1e-12)
    assert inv.conformal_residual <= 1e-12
    assert inv.b2 == pytest.approx(float(x @ x), abs=1e-12)
    assert inv.beta == pytest.approx(float(x @ y), abs=1e-12)
    assert inv.r_00 == pytest.approx(float(y @ y), abs=1e-12)


def test_beta_invariants_non_closed_form():
    n = 2
    metric = geo.ChartMetric(
        n=n,
        a_fn=lambda x: [[1.0 if i == j else 0.0 for j in range(n)]
                        for i in range(n)],
        b_fn=lambda x: [x[1] * x[1], 0.0 * x[0]],
        domain=lambda x: True,
        name="non-closed")
    inv = geo.beta_invariants(metric, [0.2, 0.5], [1.0, 0.3])
    # d b_0 / d x^1 = 2 x_1 = 1.0, d b_1 / d x^0 = 0: genuinely non-symmetric
    assert np.abs(inv.s_ij).max() == pytest.approx(0.5, abs=1e-12)
    assert inv.conformal_residual > 0.1


def test_closed_conformal_diagnostic_on_ball_entry(entries):
    entry = entries["square"]
    for x, y in entry.sample_points(5, seed=1):
        inv = geo.beta_invariants(entry.metric, x, y)
        assert inv.conformal_residual <= 1e-9


def test_spray_homogeneity(entries):
    entry = entries["randers"]
    x, y = next(iter(entry.sample_points(1, seed=3)))
    G1 = geo.PointEvaluation(entry.metric, entry.phi, x, y).spray
    lam = 1.7
    G2 = geo.PointEvaluation(entry.metric, entry.phi, x, lam * np.asarray(y)).spray
    assert np.abs(G2 - lam * lam * G1).max() <= 1e-8 * max(np.abs(G2).max(), 1.0)


def test_fundamental_tensor_zero_homogeneity(entries):
    entry = entries["square"]
    x, y = next(iter(entry.sample_points(1, seed=4)))
    g1 = geo.PointEvaluation(entry.metric, entry.phi, x, y).g
    g2 = geo.PointEvaluation(entry.metric, entry.phi, x,
                             2.3 * np.asarray(y)).g
    assert np.abs(g1 - g2).max() <= 1e-9 * max(np.abs(g1).max(), 1.0)


def test_landsberg_y_contraction_vanishes(entries):
    entry = entries["randers"]
    for x, y in entry.sample_points(3, seed=6):
        out = geo.landsberg_and_mean(entry.metric, entry.phi, x, y)
        assert out["y_contraction_L"] <= 1e-9


def test_riemannian_degeneration():
    metric = _euclidean(3)
    phi = PhiSpec(coeffs=[1], b0=0.9)
    x = [0.25, -0.1, 0.2]
    y = [0.7, 0.3, -0.5]
    ev = geo.PointEvaluation(metric, phi, x, y)
    assert np.abs(ev.g - np.eye(3)).max() <= 1e-12
    assert np.abs(ev.cartan).max() <= 1e-12
    assert np.abs(ev.berwald).max() <= 1e-10
    assert np.abs(ev.mean_landsberg()).max() <= 1e-12
    assert ev.F == pytest.approx(math.sqrt(sum(v * v for v in y)), abs=1e-12)


def test_fundamental_tensor_report_fields(entries):
    entry = entries["square"]
    x, y = next(iter(entry.sample_points(1, seed=9)))
    out = geo.fundamental_tensor(entry.metric, entry.phi, x, y)
    assert out["positive_definite"]
    assert out["residual_g"] <= 1e-10
    assert out["residual_det"] <= 1e-10
    assert out["residual_ginv_delta"] <= 1e-10
    assert out["residual_ginv_delta_bad_exponent"] >= 1e-2


def test_spray_structured_refused_off_conformal():
    n = 2
    metric = geo.ChartMetric(
        n=n,
        a_fn=lambda x: [[1.0 if i == j else 0.0 for j in range(n)]
                        for i in range(n)],
        b_fn=lambda x: [x[1] * x[1], 0.0 * x[0]],
        domain=lambda x: True,
        name="non-closed")
    phi = PhiSpec(coeffs=[1, Fraction(1, 4)], b0=0.9)
    out = geo.spray(metric, phi, [0.2, 0.5], [1.0, 0.3])
    # general structured form still matches the definitional spray
    assert out["residual_general"] <= 1e-7
    # closed-conformal form is refused where the hypothesis fails
    assert out["G_structured"] is None
    assert out["residual_structured"] is None


def test_convexity_check_pass_and_fail():
    ok = geo.convexity_check(PhiSpec(coeffs=[1], b0=0.9), b0=0.9, grid=9)
    assert ok["pass"]
    assert ok["worst_margin"] >= 0.9
    bad_phi = PhiSpec(coeffs=[1, 0, -3], b0=0.9, check_positive=False)
    bad = geo.convexity_check(bad_phi, b0=0.9, grid=15)
    assert not bad["pass"]
    assert bad["worst_margin"] < 0.0


def test_randers_positive_definite_at_large_b(entries):
    entry = entries["randers"]
    for x, y in entry.sample_points(5, seed=12):
        g = geo.PointEvaluation(entry.metric, entry.phi, x, y).g
        assert np.all(np.linalg.eigvalsh(g) > 0)


def test_curvature_report_roundtrip(entries):
    entry = entries["riemannian"]
    x, y = next(iter(entry.sample_points(1, seed=2)))
    rep = geo.curvature_report(entry.metric, entry.phi, x, y)
    assert rep.within_tolerances()
    d = rep.to_dict()
    assert set(d["residuals"]) == set(rep.residuals)
    assert d["detg"] == rep.detg

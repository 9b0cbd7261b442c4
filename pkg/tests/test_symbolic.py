"""Exact curvature-condition pipeline: fundamental quantities, condition
numerators, case analysis, and the characterizing family."""

from fractions import Fraction

import pytest

from finsler_lab.ratexpr import ONE, RatExpr, S, U, NonPolynomialError
from finsler_lab.symbolic import (PhiSpec, case_odes_residual,
                                  extract_case_coefficients,
                                  fundamental_quantities, generic_case,
                                  mean_cartan_display_comparison,
                                  mean_cartan_scalar, mean_landsberg_scalar,
                                  njfi, theorem_family_coeffs,
                                  verify_theorem_family,
                                  weak_landsberg_conditions)


def _phi(coeffs):
    return PhiSpec(coeffs=coeffs, check_positive=False)


def test_riemannian_degeneration():
    phi = _phi([1])
    fb = fundamental_quantities(phi)
    assert fb.rho == ONE
    for name in ("rho0", "rho1", "eta", "eta0", "eta1", "Q", "R", "Theta",
                 "Psi", "Pi", "Omega", "E", "H"):
        assert not getattr(fb, name), name
    cond = njfi(phi, 3)
    assert not cond.NJFI
    assert cond.all_zero()


def test_two_psi_equals_minus_eta():
    for coeffs in ([1], [1, 1], [2, 1, 1], [ONE / U, ONE / U ** 2]):
        fb = fundamental_quantities(_phi(list(coeffs)))
        assert 2 * fb.Psi == -fb.eta


def test_mean_cartan_scalar_matches_logdet_not_display():
    # quadratic phi: both repairs are needed for an exact match
    phi = _phi([2, 1, 1])
    cmp = mean_cartan_display_comparison(phi, 3)
    assert cmp["matches_display"] is False
    assert cmp["matches_display_phi2_fix"] is False
    assert cmp["matches_display_phi2_and_eta_sign_fix"] is True
    # linear phi: phi22 = 0 hides the eta-sign defect
    cmp_lin = mean_cartan_display_comparison(_phi([1, 1]), 3)
    assert cmp_lin["matches_display"] is False
    assert cmp_lin["matches_display_phi2_fix"] is True
    assert cmp_lin["matches_display_phi2_and_eta_sign_fix"] is True


def test_mean_cartan_scalar_when_phi22_vanishes():
    # linear phi: V reduces to (n+1)*phi2*(phi - s*phi2)
    phi = _phi([1, 2])
    V = mean_cartan_scalar(phi, 4)
    phi_expr = 1 + 2 * S
    expected = 5 * 2 * (phi_expr - S * 2)
    assert V == expected


def test_family_weak_landsberg_conditions_vanish():
    for m, a in ((1, (1, 1)), (2, (2, 1, 1)),
                 (3, (1, 1, Fraction(1, 4), Fraction(1, 16)))):
        phi = _phi(theorem_family_coeffs(m, a))
        cond = weak_landsberg_conditions(phi)
        assert cond.all_zero(), (m, cond)
        W = mean_landsberg_scalar(phi, 3)
        assert not W, (m, W)


def test_weak_conditions_imply_mean_landsberg_zero():
    # cross-check: whenever the three numerators vanish, so does W, exactly
    for m in (1, 2):
        a = (1,) * (m + 1)
        phi = _phi(theorem_family_coeffs(m, a))
        assert weak_landsberg_conditions(phi).all_zero()
        for n in (2, 3, 4, 5):
            assert not mean_landsberg_scalar(phi, n)


def test_wrong_coefficient_power_breaks_conditions():
    # replace c1 = a1/u^2 by a1/u^3: the mixed condition must not vanish
    phi = _phi([ONE / U, ONE / U ** 3])
    cond = weak_landsberg_conditions(phi)
    assert cond.NP


def test_njfi_linear_in_C_and_T():
    for m in range(1, 7):
        coeffs = [RatExpr.const(k + 1) for k in range(m + 1)]
        cond = njfi(_phi(coeffs), 3)
        if not cond.NJFI:
            continue
        for monom, _ in cond.NJFI.num.terms():
            assert monom[2] + monom[3] == 1, (m, monom)


def test_extract_case_coefficients_splits_exactly():
    phi = _phi([RatExpr.const(1), RatExpr.const(1)])
    cond = njfi(phi, 3)
    r = cond.NJFI.degree_in_s()
    total = RatExpr(0)
    s_pow = ONE
    from finsler_lab.ratexpr import C, T
    for i in range(r + 1):
        fc, ft = extract_case_coefficients(cond.NJFI, i)
        total = total + (C * fc + T * ft) * s_pow
        s_pow = s_pow * S
    assert total == RatExpr(cond.NJFI.num, cond.NJFI.den)
    assert extract_case_coefficients(cond.NJFI, r + 5) == (RatExpr(0), RatExpr(0))


def test_case_odes_constant_coefficients():
    res = case_odes_residual(1, [ONE, ONE])
    assert not res[0]            # c0*c1' - 2*c1*c0' = 0 for constants
    assert res[1] == ONE         # 2*b^2*0 + 1


def test_case_odes_wrong_length():
    with pytest.raises(ValueError):
        case_odes_residual(1, [ONE])
    with pytest.raises(ValueError):
        case_odes_residual(3, [ONE, ONE, ONE])


def test_verify_theorem_family_records_ode_constraint():
    verdict = verify_theorem_family(2, (1, 1, 1), n_list=(2, 3))
    assert verdict["ok"]
    assert verdict["ode_residuals"][0] != "0"     # 2*a2 + a0 != 0 here
    assert verdict["ode_residuals"][1] == "0"
    assert verdict["ode_residuals"][2] == "0"
    constrained = verify_theorem_family(2, (-2, 1, 1), n_list=(2,))
    assert constrained["ode_residuals"] == ["0", "0", "0"]


def test_generic_case_m1():
    gc = generic_case(1)
    assert gc.degree == 2
    fc, ft = gc.split(2)
    assert fc and ft
    # every coefficient is linear in C, T by construction (split succeeds)
    for i in range(3):
        gc.split(i)


def test_phi_spec_validation():
    with pytest.raises(ValueError):
        PhiSpec(coeffs=[], check_positive=False)
    with pytest.raises(ValueError):
        PhiSpec(coeffs=[S], check_positive=False)   # coefficient involves s
    with pytest.raises(ValueError):
        # phi = s is degenerate: phi - s*phi2 vanishes identically
        PhiSpec(coeffs=[RatExpr(0), ONE], check_positive=False)
    with pytest.raises(ValueError):
        # negative phi caught by the construction grid
        PhiSpec(coeffs=[-1], check_positive=True)


def test_symbolic_pipeline_requires_rational_phi():
    import sympy as sp
    t, s = sp.symbols("t s", positive=True)
    phi = PhiSpec(sym=sp.sqrt(1 - t + s ** 2) + s, check_positive=False)
    with pytest.raises(NonPolynomialError):
        fundamental_quantities(phi)
    with pytest.raises(NonPolynomialError):
        njfi(phi, 3)

"""The phi -> curvature-condition formula pipeline.

Everything here is written against a minimal element protocol (+, -, *, /,
and a supplied d/ds operator), so the same formulas run over exact rational
functions in (s, u) for concrete metrics and over a polynomial ring with
formal coefficient symbols for the generic case analysis.

Inputs are always (phi, phi1): the function and its partial derivative with
respect to b**2.  Every other derivative the formulas need is a derivative
in s, so no further b**2-differentiation happens downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Bundle", "DegenerateMetricError", "make_bundle", "w_scalar",
           "v_scalar", "v_scalar_paper_display", "np_condition", "njfi_raw"]


class DegenerateMetricError(ValueError):
    """phi - s*phi2 or the convexity trinomial vanishes identically."""


@dataclass
class Bundle:
    """All s/b**2-functions derived from phi that the curvature formulas use."""

    phi: object
    phi1: object
    phi2: object
    phi22: object
    phi12: object
    phi222: object
    P: object        # phi - s*phi2
    D: object        # phi - s*phi2 + (b2 - s**2)*phi22
    rho: object
    rho0: object
    rho1: object
    eta: object
    eta0: object
    eta1: object
    Q: object
    R: object
    Theta: object
    Psi: object
    Pi: object
    Omega: object
    E: object
    H: object


def make_bundle(phi, phi1, s, b2, ds) -> Bundle:
    """Build every derived function from (phi, phi1).

    ``s`` and ``b2`` are the variable elements; ``ds`` differentiates an
    element with respect to s.
    """
    phi2 = ds(phi)
    phi22 = ds(phi2)
    phi222 = ds(phi22)
    phi12 = ds(phi1)
    P = phi - s * phi2
    if not P:
        raise DegenerateMetricError("phi - s*phi2 vanishes identically")
    A = b2 - s * s
    D = P + A * phi22
    if not D:
        raise DegenerateMetricError("convexity trinomial vanishes identically")
    rho = phi * P
    rho0 = phi * phi22 + phi2 * phi2
    rho1 = P * phi2 - s * phi * phi22
    eta = -phi22 / D
    eta0 = -(rho1 / phi) / D
    eta1 = ((s * phi + A * phi2) * rho1 / (phi * phi)) / D
    Q = phi2 / P
    R = phi1 / P
    Theta = (rho1 / (2 * phi)) / D
    Psi = (phi22 * Fraction(1, 2)) / D
    Pi = ((P * phi12 - s * phi1 * phi22) / P) / D
    Omega = 2 * phi1 / phi - ((s * phi + A * phi2) / phi) * Pi
    H = ((phi22 - 2 * (phi1 - s * phi12)) * Fraction(1, 2)) / D
    E = (phi2 + 2 * s * phi1) / (2 * phi) - H * ((s * phi + A * phi2) / phi)
    return Bundle(phi=phi, phi1=phi1, phi2=phi2, phi22=phi22, phi12=phi12,
                  phi222=phi222, P=P, D=D, rho=rho, rho0=rho0, rho1=rho1,
                  eta=eta, eta0=eta0, eta1=eta1, Q=Q, R=R, Theta=Theta,
                  Psi=Psi, Pi=Pi, Omega=Omega, E=E, H=H)


def w_scalar(bundle: Bundle, s, b2, ds, n):
    """The braced scalar multiplying (b_j - s*l_j) in the mean Landsberg
    closed form J_j = -(c*phi/(2*rho)) * W * (b_j - s*l_j)."""
    E, H, eta = bundle.E, bundle.H, bundle.eta
    phi, phi2 = bundle.phi, bundle.phi2
    E2 = ds(E)
    E22 = ds(E2)
    E222 = ds(E22)
    H2 = ds(H)
    H22 = ds(H2)
    H222 = ds(H22)
    A = b2 - s * s
    G = s * phi + A * phi2
    W = ((E - s * E2) * (n + 1) * phi2
         + 3 * E22 * phi2 * A
         - s * E22 * (n + 1) * phi
         + E222 * phi * A
         + ((H2 - s * H22) * (n + 1) + H222 * A) * G
         + 3 * eta * (E - s * E2) * phi2 * A
         + 3 * eta * E22 * phi2 * A * A
         - 3 * s * eta * E22 * phi * A
         + eta * E222 * A * A * phi
         + eta * (3 * (H2 - s * H22) * A + H222 * A * A) * G)
    return W


def v_scalar(bundle: Bundle, s, b2, ds, n):
    """Scalar V with I_j = 1/(2*alpha*rho) * V * (b_j - s*l_j).

    Derived from d/dy^j of ln(sqrt(det g)) through the closed determinant
    formula: V = rho * d/ds[(n+1)*ln(phi) + (n-2)*ln(P) + ln(D)] / 2 ... with
    the 1/2 absorbed into the report prefactor.  Concretely:

        V = (n+1)*P*phi2 - (n-2)*s*phi*phi22 + phi*P*D'/D,   D' = dD/ds.
    """
    phi, phi2, phi22, P, D = bundle.phi, bundle.phi2, bundle.phi22, bundle.P, bundle.D
    Dp = ds(D)
    return (n + 1) * P * phi2 - (n - 2) * s * phi * phi22 + (phi * P * Dp) / D


def v_scalar_paper_display(bundle: Bundle, s, b2, ds, n):
    """The V_j display as printed (eta-terms with the lemma's signs), kept for
    the documented comparison against the log-det derivation."""
    phi, phi2, phi22, phi222 = bundle.phi, bundle.phi2, bundle.phi22, bundle.phi222
    P, D, eta = bundle.P, bundle.D, bundle.eta
    A = b2 - s * s
    return ((A * P * phi * phi222 + (n + 1) * P * P * phi) / D
            - (n - 2) * A * s * phi * phi22 * eta
            + (n + 1) * P * (A * phi2 - s * phi) * eta)


def np_condition(bundle: Bundle, s, b2, ds):
    """Left side of the third weak-Landsberg condition:
    (E - s*E2)*phi2 + (H2 - s*H22)*(s*phi + (b2 - s**2)*phi2)."""
    E, H = bundle.E, bundle.H
    phi, phi2 = bundle.phi, bundle.phi2
    E2 = ds(E)
    H2 = ds(H)
    H22 = ds(H2)
    A = b2 - s * s
    return (E - s * E2) * phi2 + (H2 - s * H22) * (s * phi + A * phi2)


def njfi_raw(bundle: Bundle, s, b2, ds, n, c_sym, ctilde_sym):
    """(phi / (2*rho)) * (c*W + ctilde*V): the relatively-isotropic mean
    Landsberg condition before numerator extraction.  phi/rho = 1/P."""
    W = w_scalar(bundle, s, b2, ds, n)
    V = v_scalar(bundle, s, b2, ds, n)
    return ((c_sym * W + ctilde_sym * V) / bundle.P) * Fraction(1, 2)

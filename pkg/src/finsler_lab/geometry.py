"""Definition-based numeric computation of Finsler curvature tensors.

Every tensor here is computed straight from its defining derivative via jet
(truncated-Taylor) arithmetic — fundamental tensor, Cartan and mean Cartan
torsion, spray coefficients, Berwald, Landsberg and mean Landsberg curvature —
and then compared against the structured closed forms that the exact pipeline
provides for general (alpha,beta)-metrics with closed conformal beta.  Each
"two paths" pair carries an explicit residual.

The jet layout is one space with three variable groups: a fiber perturbation
``y`` (the delta the third-order y-derivatives act on, cap 3), an auxiliary
fiber perturbation ``w`` (cap 2, realizing the Hessian that defines g_ij as a
function of delta), and a base perturbation ``x`` (cap 1, realizing the
single x-derivative the spray needs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .jets import Jet, JetSpace, jsqrt, jlog
from .symbolic import PhiSpec

__all__ = [
    "ChartMetric",
    "BetaInvariants",
    "CurvatureReport",
    "christoffel",
    "christoffel_fd",
    "beta_invariants",
    "fundamental_tensor",
    "cartan_and_mean_cartan",
    "spray",
    "berwald_curvature",
    "landsberg_and_mean",
    "rimlc_residual",
    "convexity_check",
    "curvature_report",
]


@dataclass(frozen=True)
class ChartMetric:
    """Coordinate presentation of (alpha, beta): a_ij(x), b_i(x).

    ``a_fn`` and ``b_fn`` must accept coordinates that are floats *or* jet
    scalars and return a nested list / list respectively.
    """

    n: int
    a_fn: Callable
    b_fn: Callable
    domain: Callable
    c_fn: Optional[Callable] = None      # known conformal factor, if any
    name: str = ""
    sample_box: tuple = ((-0.5, 0.5),)   # per-coordinate box for point sampling

    def coordinate_box(self):
        box = self.sample_box
        if len(box) == 1:
            box = box * self.n
        return box


@dataclass
class BetaInvariants:
    r_ij: np.ndarray
    r_00: float
    r_i: np.ndarray
    r_0: float
    r: float
    r_up: np.ndarray
    s_ij: np.ndarray
    s0_up: np.ndarray
    s_i: np.ndarray
    s_0: float
    s_up: np.ndarray
    b2: float
    beta: float
    fitted_c: float
    conformal_residual: float


# ---------------------------------------------------------------------------
# Jet-valued linear algebra
# ---------------------------------------------------------------------------


def _jet_solve(A, rhs):
    """Solve A v = rhs for jet (or float) entries by Gaussian elimination with
    partial pivoting on the constant terms."""
    n = len(rhs)
    A = [row[:] for row in A]
    v = rhs[:]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(_val(A[r][col])))
        if abs(_val(A[piv][col])) == 0.0:
            raise np.linalg.LinAlgError("singular jet matrix")
        A[col], A[piv] = A[piv], A[col]
        v[col], v[piv] = v[piv], v[col]
        inv = 1.0 / A[col][col] if isinstance(A[col][col], Jet) else 1.0 / A[col][col]
        for r in range(n):
            if r == col:
                continue
            f = A[r][col] * inv
            for c in range(col, n):
                A[r][c] = A[r][c] - f * A[col][c]
            v[r] = v[r] - f * v[col]
    return [v[i] * (1.0 / A[i][i] if not isinstance(A[i][i], Jet) else A[i][i].reciprocal())
            for i in range(n)]


def _jet_det(A):
    """Determinant of a jet matrix (Gaussian elimination, pivot product)."""
    n = len(A)
    A = [row[:] for row in A]
    sign = 1.0
    det = None
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(_val(A[r][col])))
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            sign = -sign
        p = A[col][col]
        det = p if det is None else det * p
        pinv = p.reciprocal() if isinstance(p, Jet) else 1.0 / p
        for r in range(col + 1, n):
            f = A[r][col] * pinv
            for c in range(col + 1, n):
                A[r][c] = A[r][c] - f * A[col][c]
    return det * sign


def _val(x):
    return x.value if isinstance(x, Jet) else float(x)


# ---------------------------------------------------------------------------
# Base-geometry quantities (Christoffel, beta invariants)
# ---------------------------------------------------------------------------


def _base_first_derivatives(metric: ChartMetric, x):
    """(a, da, b, db, a_inv) with da[k][i][j] = d a_ij / d x^k etc."""
    n = metric.n
    space = JetSpace([("x", n, 1)])
    xj = [space.var("x", i, x[i]) for i in range(n)]
    aj = metric.a_fn(xj)
    bj = metric.b_fn(xj)
    a = np.array([[_val(aj[i][j]) for j in range(n)] for i in range(n)])
    b = np.array([_val(bj[i]) for i in range(n)])
    da = np.zeros((n, n, n))
    db = np.zeros((n, n))
    for k in range(n):
        mono = tuple(1 if t == k else 0 for t in range(n))
        for i in range(n):
            if isinstance(bj[i], Jet):
                db[k, i] = bj[i].deriv(x=mono)
            for j in range(n):
                if isinstance(aj[i][j], Jet):
                    da[k, i, j] = aj[i][j].deriv(x=mono)
    return a, da, b, db, np.linalg.inv(a)


def christoffel(metric: ChartMetric, x) -> np.ndarray:
    """Levi-Civita symbols Gamma^k_ij of a_ij, via jets."""
    a, da, _, _, ainv = _base_first_derivatives(metric, x)
    n = metric.n
    gamma = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for l in range(n):
                    acc += ainv[k, l] * (da[i, l, j] + da[j, l, i] - da[l, i, j])
                gamma[k, i, j] = 0.5 * acc
    return gamma


def christoffel_fd(metric: ChartMetric, x, h: float = 1e-5) -> np.ndarray:
    """Finite-difference oracle for the Christoffel symbols (Richardson on a
    central difference of a_ij)."""
    n = metric.n

    def a_at(pt):
        raw = metric.a_fn(list(pt))
        return np.array([[_val(raw[i][j]) for j in range(n)] for i in range(n)])

    def da_axis(k, step):
        xp = list(x); xp[k] += step
        xm = list(x); xm[k] -= step
        return (a_at(xp) - a_at(xm)) / (2 * step)

    da = np.zeros((n, n, n))
    for k in range(n):
        d1 = da_axis(k, h)
        d2 = da_axis(k, 2 * h)
        da[k] = (4 * d1 - d2) / 3
    ainv = np.linalg.inv(a_at(x))
    gamma = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                gamma[k, i, j] = 0.5 * sum(
                    ainv[k, l] * (da[i, l, j] + da[j, l, i] - da[l, i, j])
                    for l in range(n))
    return gamma


def beta_invariants(metric: ChartMetric, x, y) -> BetaInvariants:
    """The r/s decomposition of the covariant derivative b_{i|j}, plus the
    closed-conformal diagnostics."""
    a, da, b, db, ainv = _base_first_derivatives(metric, x)
    n = metric.n
    gamma = christoffel(metric, x)
    y = np.asarray(y, dtype=float)
    # nabla_j b_i = d b_i / d x^j - Gamma^k_ij b_k
    nab = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            nab[i, j] = db[j, i] - sum(gamma[k, i, j] * b[k] for k in range(n))
    r_ij = 0.5 * (nab + nab.T)
    s_ij = 0.5 * (nab - nab.T)
    b_up = ainv @ b
    r_i = r_ij @ b_up
    s_i = (s_ij.T @ b_up)      # s_i = b^j s_{ji}
    fitted_c = float(np.trace(ainv @ nab)) / n
    conformal_residual = float(np.abs(nab - fitted_c * a).max())
    return BetaInvariants(
        r_ij=r_ij,
        r_00=float(y @ r_ij @ y),
        r_i=r_i,
        r_0=float(r_i @ y),
        r=float(r_i @ b_up),
        r_up=ainv @ r_i,
        s_ij=s_ij,
        s0_up=ainv @ (s_ij @ y),
        s_i=s_i,
        s_0=float(s_i @ y),
        s_up=ainv @ s_i,
        b2=float(b_up @ b),
        beta=float(b @ y),
        fitted_c=fitted_c,
        conformal_residual=conformal_residual,
    )


# ---------------------------------------------------------------------------
# Full pointwise jet evaluation
# ---------------------------------------------------------------------------


class PointEvaluation:
    """Everything the definitional formulas yield at one (x, y), computed from
    a single jet evaluation of F**2(x + e, y + delta + w)."""

    def __init__(self, metric: ChartMetric, phi: PhiSpec, x, y):
        n = metric.n
        self.metric = metric
        self.phi = phi
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.n = n
        space = JetSpace([("y", n, 3), ("w", n, 2), ("x", n, 1)])
        dspace = JetSpace([("y", n, 3)])
        self.space, self.dspace = space, dspace
        xj = [space.var("x", i, float(x[i])) for i in range(n)]
        yj = []
        for i in range(n):
            j = space.var("y", i, float(y[i]))
            j.c[space.basis_index("w", i)] = 1.0
            yj.append(j)
        aj = metric.a_fn(xj)
        bj = metric.b_fn(xj)
        alpha2 = sum(aj[i][j] * yj[i] * yj[j] for i in range(n) for j in range(n))
        beta = sum(bj[i] * yj[i] for i in range(n))
        b_up = _jet_solve([[aj[i][j] for j in range(n)] for i in range(n)], list(bj))
        b2 = sum(b_up[i] * bj[i] for i in range(n))
        alpha = alpha2.sqrt()
        svar = beta / alpha
        F = alpha * phi(b2, svar)
        self.F2 = F * F
        self.F = F.value
        self.alpha = _val(alpha)
        self.beta = _val(beta)
        self.b2 = _val(b2)
        self.s = _val(svar)
        self.b_cov = np.array([_val(v) for v in bj])
        self.a = np.array([[_val(aj[i][j]) for j in range(n)] for i in range(n)])
        self._cache = {}

    # -- extraction helpers -------------------------------------------

    def _subjet(self, w_mono, x_mono) -> Jet:
        """The delta-jet of a w/x mixed partial of F**2 (factorials applied to
        the w and x exponents; delta keeps its Taylor-coefficient role)."""
        sp, dsp = self.space, self.dspace
        out = np.zeros(dsp.size)
        fac = 1
        for e in w_mono:
            fac *= math.factorial(e)
        exps = {"w": tuple(w_mono), "x": tuple(x_mono)}
        for di, dmono in enumerate(dsp._per_monos[0]):
            exps["y"] = dmono
            out[di] = self.F2.c[sp.flat_index(exps)] * fac
        return Jet(dsp, out)

    def _zero_mono(self):
        return (0,) * self.n

    # -- fundamental tensor -------------------------------------------

    def g_delta(self):
        """g_ij as a matrix of delta-jets: half the w-Hessian of F**2."""
        if "g_delta" in self._cache:
            return self._cache["g_delta"]
        n = self.n
        z = self._zero_mono()
        g = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                mono = tuple((1 if k == i else 0) + (1 if k == j else 0)
                             for k in range(n))
                gij = self._subjet(mono, z) * 0.5
                g[i][j] = gij
                g[j][i] = gij
        self._cache["g_delta"] = g
        return g

    @property
    def g(self) -> np.ndarray:
        return np.array([[c.value for c in row] for row in self.g_delta()])

    @property
    def ginv(self) -> np.ndarray:
        return np.linalg.inv(self.g)

    @property
    def detg(self) -> float:
        return float(np.linalg.det(self.g))

    def detg_delta(self) -> Jet:
        return _jet_det(self.g_delta())

    # -- Cartan torsion -----------------------------------------------

    @property
    def cartan(self) -> np.ndarray:
        """C_ijk = (1/4) third fiber derivative of F**2."""
        if "cartan" in self._cache:
            return self._cache["cartan"]
        n = self.n
        C = np.zeros((n, n, n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    mono = [0] * n
                    mono[i] += 1
                    mono[j] += 1
                    mono[k] += 1
                    C[i, j, k] = 0.25 * self.F2.deriv(y=tuple(mono))
        self._cache["cartan"] = C
        return C

    def mean_cartan_trace(self) -> np.ndarray:
        return np.einsum("jk,ijk->i", self.ginv, self.cartan)

    def mean_cartan_logdet(self) -> np.ndarray:
        half_log = self.detg_delta().log() * 0.5
        n = self.n
        return np.array([half_log.deriv(y=tuple(1 if k == i else 0 for k in range(n)))
                         for i in range(n)])

    # -- spray and its fiber derivatives ------------------------------

    def spray_delta(self):
        """G^i as delta-jets from the definitional formula."""
        if "spray_delta" in self._cache:
            return self._cache["spray_delta"]
        n = self.n
        dsp = self.dspace
        z = self._zero_mono()
        ydelta = [dsp.var("y", k, float(self.y[k])) for k in range(n)]
        rhs = []
        for l in range(n):
            el = tuple(1 if k == l else 0 for k in range(n))
            acc = self._subjet(el, z) * 0.0
            for k in range(n):
                ek = tuple(1 if t == k else 0 for t in range(n))
                acc = acc + self._subjet(el, ek) * ydelta[k]
            acc = acc - self._subjet(z, el)
            rhs.append(acc * 0.25)
        G = _jet_solve(self.g_delta(), rhs)
        self._cache["spray_delta"] = G
        return G

    @property
    def spray(self) -> np.ndarray:
        return np.array([gj.value for gj in self.spray_delta()])

    @property
    def berwald(self) -> np.ndarray:
        """B^i_jkl = third fiber derivative of G^i."""
        if "berwald" in self._cache:
            return self._cache["berwald"]
        n = self.n
        G = self.spray_delta()
        B = np.zeros((n, n, n, n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        mono = [0] * n
                        mono[j] += 1
                        mono[k] += 1
                        mono[l] += 1
                        B[i, j, k, l] = G[i].deriv(y=tuple(mono))
        self._cache["berwald"] = B
        return B

    @property
    def landsberg(self) -> np.ndarray:
        """L_ijk = -(1/2) y_m B^m_ijk with y_m = g_mj y^j."""
        y_low = self.g @ self.y
        return -0.5 * np.einsum("m,mijk->ijk", y_low, self.berwald)

    def mean_landsberg(self) -> np.ndarray:
        return np.einsum("jk,ijk->i", self.ginv, self.landsberg)


# ---------------------------------------------------------------------------
# Structured closed-form paths
# ---------------------------------------------------------------------------


def _structured_scalars(phi: PhiSpec, t: float, s: float, n: int) -> dict:
    fns = phi.numeric_pipeline()
    out = {k: float(f(t, s)) for k, f in fns.items() if k not in ("W", "V")}
    out["W"] = float(fns["W"](t, s, n))
    out["V"] = float(fns["V"](t, s, n))
    return out


def _frame(ev: PointEvaluation):
    """(l_i, l^i, b_i, b^i, b_j - s*l_j) at the point."""
    ainv = np.linalg.inv(ev.a)
    l_low = ev.a @ ev.y / ev.alpha
    l_up = ev.y / ev.alpha
    b_low = ev.b_cov
    b_up = ainv @ b_low
    h = b_low - ev.s * l_low
    return ainv, l_low, l_up, b_low, b_up, h


def fundamental_tensor(metric: ChartMetric, phi: PhiSpec, x, y,
                       ev: PointEvaluation | None = None) -> dict:
    """g_ij, det g and g^{ij}: definitional (jets) and structured closed
    forms, with pairwise residuals.  Also runs the inverse-formula exponent
    probe (the alpha**-1 reading versus the alpha**+1 misprint)."""
    ev = ev or PointEvaluation(metric, phi, x, y)
    n = metric.n
    sc = _structured_scalars(phi, ev.b2, ev.s, n)
    ainv, l_low, l_up, b_low, b_up, h = _frame(ev)
    g_struct = (sc["rho"] * ev.a
                + sc["rho0"] * np.outer(b_low, b_low)
                + sc["rho1"] * (np.outer(b_low, l_low) + np.outer(l_low, b_low))
                - ev.s * sc["rho1"] * np.outer(l_low, l_low))
    det_struct = (sc["phi"] ** (n + 1) * sc["P"] ** (n - 2) * sc["D"]
                  * float(np.linalg.det(ev.a)))

    def ginv_formula(alpha_exp):
        mixed = np.outer(b_up, ev.y) + np.outer(ev.y, b_up)
        return (1.0 / sc["rho"]) * (
            ainv + sc["eta"] * np.outer(b_up, b_up)
            + sc["eta0"] * ev.alpha ** alpha_exp * mixed
            + sc["eta1"] * ev.alpha ** (-2) * np.outer(ev.y, ev.y))

    ginv_struct = ginv_formula(-1)
    ginv_bad = ginv_formula(+1)
    g = ev.g
    eye = np.eye(n)
    scale = max(abs(ev.detg), 1e-300)
    out = {
        "g": g,
        "detg": ev.detg,
        "ginv": ev.ginv,
        "g_structured": g_struct,
        "detg_structured": det_struct,
        "ginv_structured": ginv_struct,
        "residual_g": float(np.abs(g - g_struct).max() / max(np.abs(g).max(), 1e-300)),
        "residual_det": float(abs(ev.detg - det_struct) / scale),
        "residual_ginv_delta": float(np.abs(ginv_struct @ g - eye).max()),
        "residual_ginv_delta_bad_exponent": float(np.abs(ginv_bad @ g - eye).max()),
        "positive_definite": bool(np.all(np.linalg.eigvalsh(g) > 0)),
    }
    return out


def cartan_and_mean_cartan(metric: ChartMetric, phi: PhiSpec, x, y,
                           ev: PointEvaluation | None = None) -> dict:
    """C_ijk and the mean Cartan torsion by three routes: g-trace, log-det
    fiber gradient, and the closed form V/(2*alpha*rho)*(b_j - s*l_j)."""
    ev = ev or PointEvaluation(metric, phi, x, y)
    n = metric.n
    sc = _structured_scalars(phi, ev.b2, ev.s, n)
    _, _, _, _, _, h = _frame(ev)
    I_trace = ev.mean_cartan_trace()
    I_logdet = ev.mean_cartan_logdet()
    I_closed = sc["V"] / (2.0 * ev.alpha * sc["rho"]) * h
    scale = max(float(np.abs(I_trace).max()), 1.0)
    return {
        "C": ev.cartan,
        "I_trace": I_trace,
        "I_logdet": I_logdet,
        "I_closed": I_closed,
        "residual_trace_logdet": float(np.abs(I_trace - I_logdet).max() / scale),
        "residual_trace_closed": float(np.abs(I_trace - I_closed).max() / scale),
        "y_contraction": float(abs(I_trace @ ev.y)),
    }


def spray(metric: ChartMetric, phi: PhiSpec, x, y,
          ev: PointEvaluation | None = None,
          conformal_tol: float = 1e-6) -> dict:
    """G^i: definitional, the general structured form, and the closed-conformal
    structured form G_alpha^i + c*alpha**2*(E*l^i + H*b^i)."""
    ev = ev or PointEvaluation(metric, phi, x, y)
    n = metric.n
    inv = beta_invariants(metric, x, y)
    gamma = christoffel(metric, x)
    G_alpha = 0.5 * np.einsum("kij,i,j->k", gamma, ev.y, ev.y)
    sc = _structured_scalars(phi, ev.b2, ev.s, n)
    ainv, l_low, l_up, b_low, b_up, h = _frame(ev)
    al = ev.alpha
    # general structured form
    common = -2 * al * sc["Q"] * inv.s_0 + inv.r_00 + 2 * al * al * sc["R"] * inv.r
    G_general = (G_alpha + al * sc["Q"] * inv.s0_up
                 + (sc["Theta"] * common + al * sc["Omega"] * (inv.r_0 + inv.s_0)) * l_up
                 + (sc["Psi"] * common + al * sc["Pi"] * (inv.r_0 + inv.s_0)) * b_up
                 - al * al * sc["R"] * (inv.r_up + inv.s_up))
    out = {
        "G_definitional": ev.spray,
        "G_general": G_general,
        "G_alpha": G_alpha,
        "conformal_residual": inv.conformal_residual,
    }
    scale = max(float(np.abs(ev.spray).max()), 1.0)
    out["residual_general"] = float(np.abs(ev.spray - G_general).max() / scale)
    if inv.conformal_residual <= conformal_tol:
        c = inv.fitted_c
        G_conf = G_alpha + c * al * al * (sc["E"] * l_up + sc["H"] * b_up)
        out["G_structured"] = G_conf
        out["residual_structured"] = float(np.abs(ev.spray - G_conf).max() / scale)
    else:
        out["G_structured"] = None
        out["residual_structured"] = None
    return out


def berwald_curvature(metric: ChartMetric, phi: PhiSpec, x, y,
                      ev: PointEvaluation | None = None) -> dict:
    ev = ev or PointEvaluation(metric, phi, x, y)
    B = ev.berwald
    sym = max(float(np.abs(B - np.transpose(B, (0, 2, 1, 3))).max()),
              float(np.abs(B - np.transpose(B, (0, 1, 3, 2))).max()))
    return {"B": B, "normB": float(np.sqrt((B * B).sum())), "symmetry_defect": sym}


def landsberg_and_mean(metric: ChartMetric, phi: PhiSpec, x, y,
                       ev: PointEvaluation | None = None,
                       conformal_tol: float = 1e-6) -> dict:
    """L_ijk and J_j: definitional versus the closed form
    J_j = -(c*phi/(2*rho)) * W * (b_j - s*l_j)."""
    ev = ev or PointEvaluation(metric, phi, x, y)
    n = metric.n
    L = ev.landsberg
    J_def = ev.mean_landsberg()
    out = {"L": L, "J_definitional": J_def,
           "normJ": float(np.sqrt((J_def * J_def).sum()))}
    inv = beta_invariants(metric, x, y)
    if inv.conformal_residual <= conformal_tol:
        sc = _structured_scalars(phi, ev.b2, ev.s, n)
        _, l_low, _, b_low, _, h = _frame(ev)
        J_closed = -(inv.fitted_c * sc["phi"] / (2.0 * sc["rho"])) * sc["W"] * h
        out["J_closed"] = J_closed
        scale = max(float(np.abs(J_def).max()), 1.0)
        out["residual_J"] = float(np.abs(J_def - J_closed).max() / scale)
    else:
        out["J_closed"] = None
        out["residual_J"] = None
    out["y_contraction_L"] = float(np.abs(np.einsum("i,ijk->jk", ev.y, L)).max())
    return out


def rimlc_residual(metric: ChartMetric, phi: PhiSpec, ctilde: float, x, y,
                   ev: PointEvaluation | None = None) -> np.ndarray:
    """The covector J + ctilde*F*I; its norm is the relatively-isotropic mean
    Landsberg defect."""
    ev = ev or PointEvaluation(metric, phi, x, y)
    J = ev.mean_landsberg()
    I = ev.mean_cartan_trace()
    return J + ctilde * ev.F * I


def convexity_check(phi: PhiSpec, b0: float, grid: int = 25,
                    s_frac: float = 1.0) -> dict:
    """Evaluate phi > 0 and the strong-convexity trinomial (plus the boundary
    consequence phi - s*phi2 > 0) on a grid |s| <= s_frac*b, b < b0."""
    fns = phi.numeric_pipeline()
    b_min = phi.sample_domain[0]
    worst = (float("inf"), None, None)
    ok = True
    for bi in range(grid):
        b = b_min + (b0 * 0.999 - b_min) * bi / max(grid - 1, 1)
        if b <= 0:
            continue
        for si in range(grid):
            s = s_frac * (-b + 2 * b * si / max(grid - 1, 1))
            vals = (float(fns["phi"](b * b, s)),
                    float(fns["D"](b * b, s)),
                    float(fns["P"](b * b, s)))
            m = min(vals)
            if m < worst[0]:
                worst = (m, b, s)
            if m <= 0:
                ok = False
    return {"pass": ok, "worst_margin": worst[0],
            "at": {"b": worst[1], "s": worst[2]}, "b0": b0, "grid": grid}


# ---------------------------------------------------------------------------
# Aggregate report
# ---------------------------------------------------------------------------

_TOLERANCES = {"algebraic": 1e-9, "spray": 1e-7, "third_order": 1e-6,
               "mean_cartan": 1e-8}


@dataclass
class CurvatureReport:
    x: list
    y: list
    F: float
    b: float
    s: float
    g: list
    detg: float
    ginv: list
    C: list
    I: list
    G_definitional: list
    G_structured: Optional[list]
    B: list
    normB: float
    L: list
    J_definitional: list
    J_closed: Optional[list]
    normJ: float
    normJplus: float
    ctilde: float
    residuals: dict
    tolerances: dict = field(default_factory=lambda: dict(_TOLERANCES))

    def to_dict(self) -> dict:
        def conv(v):
            if isinstance(v, np.ndarray):
                return v.tolist()
            if isinstance(v, (np.floating, np.integer)):
                return float(v)
            if isinstance(v, dict):
                return {k: conv(x) for k, x in v.items()}
            if isinstance(v, list):
                return [conv(x) for x in v]
            return v
        return {k: conv(getattr(self, k)) for k in self.__dataclass_fields__}

    def within_tolerances(self) -> bool:
        tol = self.tolerances
        r = self.residuals
        checks = [
            (r["g"], tol["algebraic"]), (r["det"], tol["algebraic"]),
            (r["ginv"], tol["algebraic"]),
            (r["mean_cartan_trace_logdet"], tol["mean_cartan"]),
            (r["mean_cartan_trace_closed"], tol["mean_cartan"]),
            (r["spray_general"], tol["spray"]),
        ]
        if r.get("spray_structured") is not None:
            checks.append((r["spray_structured"], tol["spray"]))
        if r.get("mean_landsberg") is not None:
            checks.append((r["mean_landsberg"], tol["third_order"]))
        return all(val <= t for val, t in checks)


def curvature_report(metric: ChartMetric, phi: PhiSpec, x, y,
                     ctilde: float = 0.0) -> CurvatureReport:
    """One point, every tensor, every two-path residual."""
    ev = PointEvaluation(metric, phi, x, y)
    ft = fundamental_tensor(metric, phi, x, y, ev=ev)
    cc = cartan_and_mean_cartan(metric, phi, x, y, ev=ev)
    sp_ = spray(metric, phi, x, y, ev=ev)
    bw = berwald_curvature(metric, phi, x, y, ev=ev)
    lm = landsberg_and_mean(metric, phi, x, y, ev=ev)
    plus = rimlc_residual(metric, phi, ctilde, x, y, ev=ev)
    residuals = {
        "g": ft["residual_g"],
        "det": ft["residual_det"],
        "ginv": ft["residual_ginv_delta"],
        "ginv_bad_exponent": ft["residual_ginv_delta_bad_exponent"],
        "mean_cartan_trace_logdet": cc["residual_trace_logdet"],
        "mean_cartan_trace_closed": cc["residual_trace_closed"],
        "spray_general": sp_["residual_general"],
        "spray_structured": sp_["residual_structured"],
        "mean_landsberg": lm["residual_J"],
        "mean_cartan_y_contraction": cc["y_contraction"],
        "landsberg_y_contraction": lm["y_contraction_L"],
    }
    return CurvatureReport(
        x=list(map(float, x)), y=list(map(float, y)),
        F=ev.F, b=math.sqrt(max(ev.b2, 0.0)), s=ev.s,
        g=ft["g"], detg=ev.detg, ginv=ft["ginv"],
        C=cc["C"], I=cc["I_trace"],
        G_definitional=sp_["G_definitional"], G_structured=sp_["G_structured"],
        B=bw["B"], normB=bw["normB"],
        L=lm["L"], J_definitional=lm["J_definitional"], J_closed=lm["J_closed"],
        normJ=lm["normJ"],
        normJplus=float(np.sqrt((plus * plus).sum())),
        ctilde=float(ctilde),
        residuals=residuals,
    )

"""Semi-definite metric data: frontal/admissibility checks, singular set, A_k/Morse labels."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from skimage.measure import find_contours

from . import expr
from .fields import ScalarField, as_field
from .jets import Jet
from .local import first_nonvanishing, gradient, hessian, implicit_curve_jet, kernel_jet, kernel_vector
from .report import Report

TOL_ZERO = 1e-9
TOL_JET = 1e-6
K_MAX = 4


class UnsupportedSingularity(ValueError):
    """Raised for corank-2 points, which neither classifier handles."""


class DegenerateInput(ValueError):
    pass


@dataclass(frozen=True)
class MetricData:
    E: ScalarField
    F: ScalarField
    G: ScalarField
    lam: ScalarField
    lambda_sign: int = 1

    def __post_init__(self):
        for name in ("E", "F", "G", "lam"):
            object.__setattr__(self, name, as_field(getattr(self, name)))

    @classmethod
    def from_text(cls, E, F, G, lam):
        return cls(ScalarField(E), ScalarField(F), ScalarField(G), ScalarField(lam))

    def jets(self, u, v, order):
        return {k: getattr(self, k).taylor(u, v, order) for k in ("E", "F", "G", "lam")}

    def matrix(self, u, v):
        E, F, G = self.E(u, v), self.F(u, v), self.G(u, v)
        return np.array([[E, F], [F, G]], dtype=float)

    def with_flipped_lambda(self):
        return MetricData(self.E, self.F, self.G, ScalarField(-self.lam.ast), -self.lambda_sign)

    def pullback_linear(self, A, b=(0.0, 0.0)):
        """Metric data in coordinates (s, t) with (u, v) = A (s, t) + b."""
        A = np.asarray(A, dtype=float)
        (a, c), (d, e) = A
        uu = float(a) * expr.U + float(c) * expr.V + float(b[0])
        vv = float(d) * expr.U + float(e) * expr.V + float(b[1])
        sub = {"u": uu, "v": vv}
        E, F, G, lam = (expr.substitute(x.ast, sub) for x in (self.E, self.F, self.G, self.lam))
        # J^T g J with J = A
        En = a * a * E + 2 * a * d * F + d * d * G
        Fn = a * c * E + (a * e + c * d) * F + d * e * G
        Gn = c * c * E + 2 * c * e * F + e * e * G
        det = a * e - c * d
        return MetricData(ScalarField(En), ScalarField(Fn), ScalarField(Gn),
                          ScalarField(det * lam), self.lambda_sign)

    def swapped(self):
        """Exchange u and v, negating lambda so the frame stays consistent."""
        return self.pullback_linear([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class MetricSingularCurve:
    t: np.ndarray
    points: np.ndarray
    tangents: np.ndarray
    eta: np.ndarray
    psi: np.ndarray
    closed: bool = False

    def __len__(self):
        return len(self.t)


@dataclass(frozen=True)
class MetricPointClass:
    tag: str
    k: int | None = None
    diagnostics: dict = field(default_factory=dict)


def _samples(sample_set):
    pts = np.asarray(sample_set, dtype=float).reshape(-1, 2)
    return pts[:, 0], pts[:, 1]


def check_frontal(m: MetricData, sample_set, tol=1e-9):
    u, v = _samples(sample_set)
    E, F, G, lam = (np.broadcast_to(x(u, v), u.shape) for x in (m.E, m.F, m.G, m.lam))
    resid = np.abs(E * G - F * F - lam * lam)
    half = 0.5 * (E + G)
    rad = np.sqrt(0.25 * (E - G) ** 2 + F * F)
    eig_min = half - rad
    passed = bool(resid.max() < tol and eig_min.min() > -tol)
    return Report("frontal", passed,
                  {"max_abs_EG_minus_F2_minus_lambda2": float(resid.max())},
                  details={"min_eigenvalue": float(eig_min.min()),
                           "max_eigenvalue": float((half + rad).max())})


def check_admissible(m: MetricData, curves, tol=1e-8):
    """Coordinate conditions F = G = 0, E_v = 2F_u, G_u = G_v = 0 along the singular set."""
    if isinstance(curves, MetricSingularCurve):
        curves = [curves]
    pts = [c.points for c in curves if len(c)]
    if not pts:
        return Report("admissible", True, {}, flags=("vacuous: empty singular set",))
    P = np.concatenate(pts)
    u, v = P[:, 0], P[:, 1]
    ev = expr.evaluate_many([m.F.ast, m.G.ast, m.E.d(0, 1), m.F.d(1, 0), m.G.d(1, 0), m.G.d(0, 1)], u, v)
    F, G, Ev, Fu, Gu, Gv = (np.broadcast_to(x, u.shape) for x in ev)
    res = {
        "F": float(np.max(np.abs(F))),
        "G": float(np.max(np.abs(G))),
        "E_v-2F_u": float(np.max(np.abs(Ev - 2 * Fu))),
        "G_u": float(np.max(np.abs(Gu))),
        "G_v": float(np.max(np.abs(Gv))),
    }
    return Report("admissible", all(x < tol for x in res.values()), res)


# ---------------------------------------------------------------------------
# Singular set
# ---------------------------------------------------------------------------

def _polish(lam, pt, uu, vv):
    """Move a contour vertex (fractional grid indices) onto the zero set along its grid edge."""
    r, c = pt
    ri, ci = round(r), round(c)
    nu, nv = len(uu), len(vv)
    on_row = abs(r - ri) < 1e-9
    on_col = abs(c - ci) < 1e-9
    if on_row and on_col:
        return np.array([uu[ri], vv[ci]])
    if on_row:
        u = uu[ri]
        j = min(int(np.floor(c)), nv - 2)
        g = lambda x: float(lam(u, x))
        a, b = vv[j], vv[j + 1]
        fa, fb = g(a), g(b)
        if fa == 0.0:
            return np.array([u, a])
        if fb == 0.0:
            return np.array([u, b])
        if fa * fb > 0:
            return np.array([u, a + (c - j) * (b - a)])
        return np.array([u, brentq(g, a, b, xtol=1e-13, rtol=4 * np.finfo(float).eps)])
    v = vv[ci]
    i = min(int(np.floor(r)), nu - 2)
    g = lambda x: float(lam(x, v))
    a, b = uu[i], uu[i + 1]
    fa, fb = g(a), g(b)
    if fa == 0.0:
        return np.array([a, v])
    if fb == 0.0:
        return np.array([b, v])
    if fa * fb > 0:
        return np.array([a + (r - i) * (b - a), v])
    return np.array([brentq(g, a, b, xtol=1e-13, rtol=4 * np.finfo(float).eps), v])


def singular_set(m: MetricData, domain, grid_resolution=(101, 101)):
    """Zero curves of lambda, with unit tangents, null vectors and psi = det(gamma', eta)."""
    (u0, u1), (v0, v1) = domain
    nu, nv = (grid_resolution, grid_resolution) if np.isscalar(grid_resolution) else grid_resolution
    uu = np.linspace(u0, u1, int(nu))
    vv = np.linspace(v0, v1, int(nv))
    U, V = np.meshgrid(uu, vv, indexing="ij")
    L = np.broadcast_to(m.lam(U, V), U.shape)
    scale = 1.0 + np.max(np.abs(L))
    zero = np.abs(L) <= 1e-14 * scale
    cells = zero[:-1, :-1] & zero[1:, :-1] & zero[:-1, 1:] & zero[1:, 1:]
    if np.any(cells):
        raise DegenerateInput("lambda vanishes on an open set")
    curves = []
    for poly in find_contours(L, 0.0):
        pts = np.array([_polish(m.lam, p, uu, vv) for p in poly])
        closed = bool(np.allclose(poly[0], poly[-1]))
        keep = np.ones(len(pts), bool)
        keep[1:] = np.any(np.abs(np.diff(pts, axis=0)) > 1e-13, axis=1)
        pts = pts[keep]
        if len(pts) < 2:
            continue
        curves.append(_decorate(m, pts, closed))
    curves.sort(key=lambda c: (round(c.points[0, 0], 9), round(c.points[0, 1], 9)))
    return curves


def _decorate(m, pts, closed):
    u, v = pts[:, 0], pts[:, 1]
    lu, lv, E, F, G = (np.broadcast_to(x, u.shape) for x in expr.evaluate_many(
        [m.lam.d(1, 0), m.lam.d(0, 1), m.E.ast, m.F.ast, m.G.ast], u, v))
    grad = np.hypot(lu, lv)
    tang = np.stack([lv, -lu], axis=1) / np.where(grad > 0, grad, 1.0)[:, None]
    # secant fallback where the gradient vanishes
    sec = np.gradient(pts, axis=0)
    sec /= np.linalg.norm(sec, axis=1)[:, None]
    bad = grad <= TOL_ZERO
    tang[bad] = sec[bad]
    if np.dot(pts[1] - pts[0], tang[0]) < 0:
        pts, tang = pts[::-1], tang[::-1]
        u, v, E, F, G = u[::-1], v[::-1], E[::-1], F[::-1], G[::-1]
    mats = np.stack([np.stack([E, F], -1), np.stack([F, G], -1)], -2)
    _, vecs = np.linalg.eigh(mats)
    eta = vecs[:, :, 0]
    # deterministic start orientation, then continuity
    ref = np.array([-F[0], E[0]]) if abs(E[0]) >= abs(G[0]) else np.array([G[0], -F[0]])
    if np.dot(eta[0], ref) < 0:
        eta[0] = -eta[0]
    for i in range(1, len(pts)):
        if np.dot(tang[i], tang[i - 1]) < 0:
            tang[i] = -tang[i]
        if np.dot(eta[i], eta[i - 1]) < 0:
            eta[i] = -eta[i]
    t = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))])
    psi = tang[:, 0] * eta[:, 1] - tang[:, 1] * eta[:, 0]
    return MetricSingularCurve(t, np.ascontiguousarray(pts), tang, eta, psi, closed)


# ---------------------------------------------------------------------------
# Point classification
# ---------------------------------------------------------------------------

def psi_jet(jets, prefer_eta=None):
    """psi(s) = det(gamma'(s), eta(gamma(s))) along the zero curve of lambda, as a jet in s."""
    cj = implicit_curve_jet(jets["lam"])
    order = cj.du.order
    du, dv = cj.du, cj.dv
    Ec, Fc, Gc = (jets[k].compose(du, dv) for k in ("E", "F", "G"))
    e1, e2 = kernel_jet(Ec, Fc, Gc, prefer=prefer_eta)
    g1, g2 = du.diff(0), dv.diff(0)
    psi = g1 * e2 - g2 * e1
    return psi.truncate(order - 1), cj


def classify_metric_point(m: MetricData, p, curve=None, order=5, tol_zero=TOL_ZERO, tol_jet=TOL_JET):
    u, v = float(p[0]), float(p[1])
    jets = m.jets(u, v, order)
    lam0 = float(jets["lam"].value)
    E0, F0, G0 = (float(jets[k].value) for k in ("E", "F", "G"))
    scale = 1.0 + max(abs(E0), abs(F0), abs(G0))
    zt = tol_zero * scale
    diag = {"lambda": lam0}
    if abs(lam0) > zt:
        return MetricPointClass("Regular", None, diag)
    corank, eta = kernel_vector(np.array([[E0, F0], [F0, G0]]), zt)
    if corank == 2:
        raise UnsupportedSingularity(f"corank-2 metric point at {(u, v)}: not supported")
    if corank == 0:
        return MetricPointClass("Regular", None, diag)
    ref = np.array([-F0, E0]) if abs(E0) >= abs(G0) else np.array([G0, -F0])
    eta = eta if np.dot(eta, ref) >= 0 else -eta
    grad = gradient(jets["lam"])
    diag.update(dlambda=grad, eta=eta)
    if np.hypot(*grad) > zt:
        psi, cj = psi_jet(jets)
        coefs = [float(psi.deriv(j)) for j in range(min(psi.order + 1, K_MAX - 1))]
        diag.update(psi_jet=coefs, tangent=cj.tangent)
        j = first_nonvanishing(coefs, tol_jet)
        if j is None:
            return MetricPointClass("DegenerateOther", None, diag)
        return MetricPointClass(f"A_{j + 2}", j + 2, diag)
    hess = hessian(jets["lam"])
    hdet = float(np.linalg.det(hess))
    eel = float(eta @ hess @ eta)
    diag.update(hess_det=hdet, eta_eta_lambda=eel)
    if abs(hdet) > zt and abs(eel) > zt:
        return MetricPointClass("MorseType", None, diag)
    return MetricPointClass("DegenerateOther", None, diag)

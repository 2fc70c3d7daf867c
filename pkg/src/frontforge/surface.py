"""Constructed (or directly given) fronts: fundamental forms, curvature, singularity labels."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import Vec3Field
from .geomcore import cross, det3, dot
from .jets import Jet
from .local import first_nonvanishing, gradient, hessian, implicit_curve_jet, kernel_jet
from .metric import TOL_JET, TOL_ZERO, UnsupportedSingularity
from .report import Report


class SingularPointError(ValueError):
    pass


class NotSingularError(ValueError):
    pass


class SurfaceJet:
    """A front on a rectangular grid with exact local jets.

    Either ``data`` (a FrontPairData, derivatives from the 1-form) or
    ``f_field`` (a closed-form Vec3Field) supplies the derivatives; ``values``
    holds f at the grid nodes, shape (n_u, n_v, 3).
    """

    def __init__(self, uu, vv, values=None, nu_field=None, data=None, f_field=None,
                 base_point=(0.0, 0.0), base_value=None, tol=1e-10):
        if (data is None) == (f_field is None):
            raise ValueError("exactly one of data / f_field is required")
        self.uu = np.asarray(uu, float)
        self.vv = np.asarray(vv, float)
        self.data = data
        self.f_field = f_field if f_field is None or isinstance(f_field, Vec3Field) else Vec3Field(f_field)
        self.nu_field = nu_field if isinstance(nu_field, Vec3Field) else Vec3Field(nu_field)
        self.base_point = tuple(map(float, base_point))
        self.base_value = np.zeros(3) if base_value is None else np.asarray(base_value, float)
        self.tol = tol
        if values is None:
            U, V = np.meshgrid(self.uu, self.vv, indexing="ij")
            values = np.moveaxis(self.f_at(U.ravel(), V.ravel()), 0, -1).reshape(U.shape + (3,))
        self.values = np.asarray(values, float)

    @classmethod
    def from_closed_form(cls, f, nu, grid):
        (ua, ub), (va, vb), (nu_, nv) = grid
        return cls(np.linspace(ua, ub, nu_), np.linspace(va, vb, nv), None, nu_field=nu,
                   f_field=Vec3Field(f))

    @property
    def provenance(self):
        return "kenmotsu" if self.data is not None else "closed_form"

    def f_at(self, u, v):
        """f at scattered points, shape (3, m)."""
        u = np.atleast_1d(np.asarray(u, float))
        v = np.atleast_1d(np.asarray(v, float))
        if self.f_field is not None:
            return self.f_field(u, v)
        from .kenmotsu import l_path_values  # noqa: PLC0415

        return l_path_values(self.data, self.base_point, self.base_value, u, v, self.tol).T

    def jet(self, u, v, order=3, with_value=False):
        """Jets of f and nu at (u, v). Without ``with_value`` the constant term of f is 0."""
        if self.f_field is not None:
            f = self.f_field.taylor(u, v, order)
            nu = self.nu_field.taylor(u, v, order)
            if not with_value:
                for c in f:
                    c.c[0] = 0.0
            return f, nu
        from .kenmotsu import f_jet_from_omega  # noqa: PLC0415

        J = self.data.jets(u, v, order)
        value = None
        if with_value:
            value = self.f_at(np.ravel(u), np.ravel(v)).reshape((3,) + np.shape(u))
        return f_jet_from_omega(J["omega_u"], J["omega_v"], value), J["nu"]

    def grid_partials(self, order=3):
        """Partials of f at every node: {(i, j): array (n_u, n_v, 3)} for i + j <= order."""
        U, V = np.meshgrid(self.uu, self.vv, indexing="ij")
        f, _ = self.jet(U, V, order)
        from .jets import monomials  # noqa: PLC0415

        out = {}
        for (i, j) in monomials(order):
            if i + j == 0:
                out[(0, 0)] = self.values
            else:
                out[(i, j)] = np.stack([c.deriv(i, j) for c in f], axis=-1)
        return out

    def nu_at(self, u, v):
        return self.nu_field(u, v)


# ---------------------------------------------------------------------------
# Pointwise quantities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FundamentalForms:
    E_f: float
    F_f: float
    G_f: float
    L_f: float
    M_f: float
    N_f: float

    def as_tuple(self):
        return (self.E_f, self.F_f, self.G_f, self.L_f, self.M_f, self.N_f)


@dataclass(frozen=True)
class NuInvariants:
    P: float
    Q: float
    R: float
    D: float
    X: float


def _derivs(s: SurfaceJet, p, order=2):
    f, nu = s.jet(np.asarray(p[0], float), np.asarray(p[1], float), order)
    d = {(i, j): tuple(c.deriv(i, j) for c in f) for i in range(order + 1) for j in range(order + 1 - i)}
    n = tuple(c.value for c in nu)
    nd = {"u": tuple(c.deriv(1, 0) for c in nu), "v": tuple(c.deriv(0, 1) for c in nu)}
    return d, n, nd


def fundamental_forms(s: SurfaceJet, p) -> FundamentalForms:
    d, n, _ = _derivs(s, p)
    fu, fv = d[(1, 0)], d[(0, 1)]
    return FundamentalForms(dot(fu, fu), dot(fu, fv), dot(fv, fv),
                            dot(d[(2, 0)], n), dot(d[(1, 1)], n), dot(d[(0, 2)], n))


def _curvatures(s, p, tol):
    ff = fundamental_forms(s, p)
    E, F, G, L, M, N = ff.as_tuple()
    den = E * G - F * F
    if np.any(np.abs(den) <= tol * (1.0 + np.abs(E * G))):
        raise SingularPointError(f"first fundamental form degenerate at {p}")
    return ff, den


def mean_curvature(s: SurfaceJet, p, tol=1e-12):
    ff, den = _curvatures(s, p, tol)
    E, F, G, L, M, N = ff.as_tuple()
    return (E * N - 2 * F * M + G * L) / (2 * den)


def gaussian_curvature(s: SurfaceJet, p, tol=1e-12):
    ff, den = _curvatures(s, p, tol)
    E, F, G, L, M, N = ff.as_tuple()
    return (L * N - M * M) / den


def signed_area_density(s: SurfaceJet, p):
    d, n, _ = _derivs(s, p, 1)
    return det3(d[(1, 0)], d[(0, 1)], n)


def nu_invariants(data, p) -> NuInvariants:
    J = data.jets(np.asarray(p[0], float), np.asarray(p[1], float), 1)
    nu = tuple(c.value for c in J["nu"])
    nu_u = tuple(c.value for c in J["nu_u"])
    nu_v = tuple(c.value for c in J["nu_v"])
    P, Q, R = dot(nu_u, nu_u), dot(nu_u, nu_v), dot(nu_v, nu_v)
    D = det3(nu_u, nu_v, nu)
    E, F, G, lam = (J[k].value for k in ("E", "F", "G", "lam"))
    X = 2 * lam * D + G * P - 2 * F * Q + E * R
    return NuInvariants(P, Q, R, D, X)


def front_sigma2(s: SurfaceJet, p):
    """Smallest singular value of the 6x2 differential of (f, nu)."""
    d, _, nd = _derivs(s, p, 1)
    A = np.array([list(d[(1, 0)]) + list(nd["u"]), list(d[(0, 1)]) + list(nd["v"])], float).T
    return float(np.linalg.svd(A, compute_uv=False)[-1])


# ---------------------------------------------------------------------------
# Singularity labels
# ---------------------------------------------------------------------------

KIND_LABELS = {1: "CuspidalEdge", 2: "Swallowtail", 3: "CuspidalButterfly"}


@dataclass(frozen=True)
class FrontSingularityLabel:
    tag: str
    kind: int | None = None
    diagnostics: dict = field(default_factory=dict)


def _identifier_and_gram(f, nu):
    fu = tuple(c.diff(0) for c in f)
    fv = tuple(c.diff(1) for c in f)
    order = fu[0].order
    n = tuple(c.truncate(order) for c in nu)
    lam = det3(fu, fv, n)
    return lam, dot(fu, fu), dot(fu, fv), dot(fv, fv), fu, fv


def classify_front_singularity(s: SurfaceJet, p, order=5, tol_zero=TOL_ZERO, tol_jet=TOL_JET):
    u, v = float(p[0]), float(p[1])
    f, nu = s.jet(u, v, order)
    lam, Ef, Ff, Gf, fu, fv = _identifier_and_gram(f, nu)
    A = np.array([[c.value for c in fu], [c.value for c in fv]], float).T
    sv, Vt = np.linalg.svd(A)[1:]
    scale = 1.0 + float(sv[0]) ** 2
    zt = tol_zero * scale
    diag = {"identifier": float(lam.value), "singular_values": sv}
    if abs(float(lam.value)) > zt:
        raise NotSingularError(f"{(u, v)} is not a singular point (area density {float(lam.value):.3e})")
    if sv[0] <= zt:
        raise UnsupportedSingularity(f"corank-2 front singularity at {(u, v)}: not supported")
    sig2 = front_sigma2(s, (u, v))
    diag["front_sigma2"] = sig2
    eta0 = Vt[-1]
    E0, F0, G0 = float(Ef.value), float(Ff.value), float(Gf.value)
    ref = np.array([-F0, E0]) if abs(E0) >= abs(G0) else np.array([G0, -F0])
    if np.dot(eta0, ref) < 0:
        eta0 = -eta0
    diag["eta"] = eta0
    if sig2 <= zt:
        return FrontSingularityLabel("DegenerateOther", None, {**diag, "note": "not a front at p"})
    grad = gradient(lam)
    diag["dlambda"] = grad
    if np.hypot(*grad) > zt:
        cj = implicit_curve_jet(lam)
        Ec, Fc, Gc = (x.compose(cj.du, cj.dv) for x in (Ef, Ff, Gf))
        e1, e2 = kernel_jet(Ec, Fc, Gc, prefer=eta0)
        g1, g2 = cj.du.diff(0), cj.dv.diff(0)
        phi = g1 * e2 - g2 * e1
        coefs = [float(phi.deriv(j)) for j in range(min(phi.order + 1, 3))]
        diag["phi_jet"] = coefs
        j = first_nonvanishing(coefs, tol_jet)
        if j is None:
            return FrontSingularityLabel("DegenerateOther", None, diag)
        return FrontSingularityLabel(KIND_LABELS[j + 1], j + 1, diag)
    hess = hessian(lam)
    hdet = float(np.linalg.det(hess))
    eel = float(eta0 @ hess @ eta0)
    diag.update(hess_det=hdet, eta_eta_lambda=eel)
    if hdet > zt:
        return FrontSingularityLabel("CuspidalLips", None, diag)
    if hdet < -zt and abs(eel) > zt:
        return FrontSingularityLabel("CuspidalBeaks", None, diag)
    return FrontSingularityLabel("DegenerateOther", None, diag)


# labels the construction theorem pairs with metric-side tags
def expected_front_tag(metric_class):
    if metric_class.tag.startswith("A_"):
        return KIND_LABELS.get(metric_class.k - 1, "DegenerateOther")
    if metric_class.tag == "MorseType":
        return "CuspidalLips" if metric_class.diagnostics["hess_det"] > 0 else "CuspidalBeaks"
    return metric_class.tag


# ---------------------------------------------------------------------------
# Identities from the construction
# ---------------------------------------------------------------------------

IDENTITY_NAMES = ("E_f", "F_f", "G_f", "L_f", "M_f", "N_f", "det", "H_f=-Hhat/(2lam)", "H_f=H")


def identity_residuals(s: SurfaceJet, data, sample, reg_tol=1e-6):
    """Scaled residuals |lhs - rhs| / (1 + |lhs| + |rhs|), one array per identity."""
    pts = np.asarray(sample, float).reshape(-1, 2)
    u, v = pts[:, 0], pts[:, 1]
    f, nu_s = s.jet(u, v, 2)
    J = data.jets(u, v, 1)
    nu = tuple(c.value for c in J["nu"])
    nu_u = tuple(c.value for c in J["nu_u"])
    nu_v = tuple(c.value for c in J["nu_v"])
    E, F, G, lam, hh = (J[k].value for k in ("E", "F", "G", "lam", "Hhat"))
    P, Q, R = dot(nu_u, nu_u), dot(nu_u, nu_v), dot(nu_v, nu_v)
    D = det3(nu_u, nu_v, nu)
    X = 2 * lam * D + G * P - 2 * F * Q + E * R
    fu = tuple(c.deriv(1, 0) for c in f)
    fv = tuple(c.deriv(0, 1) for c in f)
    fuu, fuv, fvv = (tuple(c.deriv(*m) for c in f) for m in ((2, 0), (1, 1), (0, 2)))
    Ef, Ff, Gf = dot(fu, fu), dot(fu, fv), dot(fv, fv)
    Lf, Mf, Nf = dot(fuu, nu), dot(fuv, nu), dot(fvv, nu)
    k = X / hh**2
    pairs = {
        "E_f": (Ef, k * E), "F_f": (Ff, k * F), "G_f": (Gf, k * G),
        "L_f": (Lf, -(lam * P + E * D) / hh),
        "M_f": (Mf, -(lam * Q + F * D) / hh),
        "N_f": (Nf, -(lam * R + G * D) / hh),
        "det": (det3(fu, fv, nu), lam * X / hh**2),
    }
    reg = np.abs(lam) > reg_tol
    den = Ef * Gf - Ff**2
    Hf = np.where(reg, (Ef * Nf - 2 * Ff * Mf + Gf * Lf) / (2 * np.where(reg, den, 1.0)), np.nan)
    pairs["H_f=-Hhat/(2lam)"] = (Hf, np.where(reg, -hh / (2 * np.where(reg, lam, 1.0)), np.nan))
    if data.H is not None:
        Hv = np.full(u.shape, np.nan)
        if np.any(reg):
            Hv[reg] = np.broadcast_to(data.H(u[reg], v[reg]), u[reg].shape)
        pairs["H_f=H"] = (Hf, Hv)
    out = {}
    for name, (a, b) in pairs.items():
        a, b = np.broadcast_to(a, u.shape), np.broadcast_to(b, u.shape)
        out[name] = np.abs(a - b) / (1.0 + np.abs(a) + np.abs(b))
    return out, reg


def verify_theorem_identities(s: SurfaceJet, data, sample, tol=1e-8):
    res, reg = identity_residuals(s, data, sample)
    summary = {k: float(np.nanmax(r)) if np.any(np.isfinite(r)) else float("nan") for k, r in res.items()}
    flags = ()
    if not np.all(reg):
        flags = (f"{int(np.sum(~reg))} sample points on or near the singular set skipped for H_f",)
    ok = all(np.isfinite(x) and x < tol for x in summary.values())
    return Report("theorem_identities", bool(ok), summary, flags)

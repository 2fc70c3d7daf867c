"""Invariants of cuspidal edges and swallowtails, each by two independent routes.

The *direct* route evaluates the extrinsic definitions on jets of f and nu
pushed into an adapted chart. The *closed* route uses only the prescribed
data (E, F, G, lam, Hhat, nu) pulled back to the same chart, except for
the orientation sign of kappa_s, which is extrinsic by nature.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geomcore import cross, det3, dot
from .jets import Jet
from .kenmotsu import FrontPairData, f_jet_from_omega
from .local import gradient, implicit_curve_jet, kernel_jet
from .metric import MetricData
from .report import Report


class InvariantError(ValueError):
    """A formula is inapplicable at the requested point (degenerate denominator or wrong kind)."""


# ---------------------------------------------------------------------------
# Charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdaptedChart:
    """Local reparametrization (s, t) -> p + (du(s, t), dv(s, t)), exact as jets."""

    p: np.ndarray
    du: Jet
    dv: Jet
    u_singular: bool
    strongly_adapted: bool

    @property
    def order(self):
        return self.du.order

    @property
    def jacobian(self):
        return np.array([[self.du.coef(1, 0), self.du.coef(0, 1)],
                         [self.dv.coef(1, 0), self.dv.coef(0, 1)]], float)

    def det_jet(self):
        return self.du.diff(0) * self.dv.diff(1) - self.du.diff(1) * self.dv.diff(0)

    def pull(self, jet):
        return jet.compose(self.du, self.dv)

    def pull_vec(self, jets):
        return tuple(self.pull(j) for j in jets)

    def pull_metric(self, J):
        """Chart expressions of E, F, G, lam (and Hhat when present), order N - 1."""
        E, F, G = (self.pull(J[k]) for k in ("E", "F", "G"))
        a, c = self.du.diff(0), self.dv.diff(0)
        b, d = self.du.diff(1), self.dv.diff(1)
        det = a * d - b * c
        out = {
            "E": E * a * a + 2.0 * F * a * c + G * c * c,
            "F": E * a * b + F * (a * d + b * c) + G * c * d,
            "G": E * b * b + 2.0 * F * b * d + G * d * d,
            "lam": self.pull(J["lam"]) * det,
        }
        if "Hhat" in J:
            out["Hhat"] = self.pull(J["Hhat"]) * det
        if "nu" in J:
            out["nu"] = self.pull_vec(J["nu"])
        return out


def _source_jets(source, p, order):
    """Identifier and first fundamental form jets from data, a metric, or a surface."""
    u, v = float(p[0]), float(p[1])
    if isinstance(source, FrontPairData):
        return source.metric.jets(u, v, order)
    if isinstance(source, MetricData):
        return source.jets(u, v, order)
    f, nu = source.jet(u, v, order + 1)
    fu = tuple(c.diff(0) for c in f)
    fv = tuple(c.diff(1) for c in f)
    n = tuple(c.truncate(order) for c in nu)
    return {"E": dot(fu, fu), "F": dot(fu, fv), "G": dot(fv, fv), "lam": det3(fu, fv, n)}


def adapt_chart(source, p, order=5, tol=1e-9):
    """Strongly adapted chart at a first-kind point, else a u-singular chart.

    The chart is (s, t) -> gamma(s) + t * w(s), where gamma parametrizes the
    zero set of the identifier. At a first-kind point w is the null vector
    field along gamma (so the null vector is d/dt on the axis); otherwise w
    is the constant unit normal of the curve at p and the curve is oriented
    along the null vector there.
    """
    J = _source_jets(source, p, order)
    lam = J["lam"]
    if abs(float(lam.value)) > tol * (1.0 + abs(float(J["E"].value)) + abs(float(J["G"].value))):
        raise InvariantError(f"{tuple(p)} is not on the singular set")
    if np.hypot(*gradient(lam)) <= tol:
        raise InvariantError("degenerate singular point: no adapted chart")
    cj = implicit_curve_jet(lam)
    Ec, Fc, Gc = (J[k].compose(cj.du, cj.dv) for k in ("E", "F", "G"))
    e1, e2 = kernel_jet(Ec, Fc, Gc)
    g1, g2 = cj.du.diff(0), cj.dv.diff(0)
    psi0 = float(g1.value * e2.value - g2.value * e1.value)
    N = cj.du.order
    t = Jet.variable(1, N)
    if abs(psi0) > 1e-6:
        if psi0 < 0:
            e1, e2 = -e1, -e2
        return AdaptedChart(np.asarray(p, float), cj.du + t * e1, cj.dv + t * e2, True, True)
    if float(np.dot(cj.tangent, [e1.value, e2.value])) < 0:
        cj = cj.reversed()
    tx, ty = cj.tangent
    n = np.array([-ty, tx])
    return AdaptedChart(np.asarray(p, float), cj.du + t * n[0], cj.dv + t * n[1], True, False)


# ---------------------------------------------------------------------------
# Edge invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeInvariants:
    kappa_s: float
    kappa_nu: float
    kappa_t: float
    kappa_c: float
    route: str
    derivatives: dict = field(default_factory=dict, compare=False)

    def as_tuple(self):
        return (self.kappa_s, self.kappa_nu, self.kappa_t, self.kappa_c)


def _chart_front(s, chart, order):
    f, nu = s.jet(chart.p[0], chart.p[1], order)
    return chart.pull_vec(f), chart.pull_vec(nu)


def _axis(vecjets, order):
    return tuple(c.truncate(order).restrict_t0() for c in vecjets)


def _sgn(x):
    x = float(x)
    if x == 0.0:
        raise InvariantError("sign of a vanishing quantity")
    return 1.0 if x > 0 else -1.0


def _front_axis_derivs(f, nu):
    fu = tuple(c.diff(0) for c in f)
    fv = tuple(c.diff(1) for c in f)
    fuu = tuple(c.diff(0) for c in fu)
    fvv = tuple(c.diff(1) for c in fv)
    fvvu = tuple(c.diff(0) for c in fvv)
    fvvv = tuple(c.diff(1) for c in fvv)
    o = fvvu[0].order
    return {k: _axis(x, o) for k, x in
            dict(fu=fu, fuu=fuu, fvv=fvv, fvvu=fvvu, fvvv=fvvv, nu=nu).items()}


def sigma_sign(s, chart, order=5):
    """sgn det(f_u, f_vv, nu) at p in the chart."""
    f, nu = _chart_front(s, chart, order)
    d = _front_axis_derivs(f, nu)
    return _sgn(det3(d["fu"], d["fvv"], d["nu"]).value)


def edge_invariants_direct(s, p, chart=None, order=5, tol=1e-10):
    if chart is None:
        chart = adapt_chart(s.data if s.data is not None else s, p, order)
    if not chart.strongly_adapted:
        raise InvariantError("edge invariants need a strongly adapted chart (first-kind point)")
    f, nu = _chart_front(s, chart, order)
    d = _front_axis_derivs(f, nu)
    fu, fuu, fvv, fvvu, fvvv, n = (d[k] for k in ("fu", "fuu", "fvv", "fvvu", "fvvv", "nu"))
    cr = cross(fu, fvv)
    cr2 = dot(cr, cr)
    if float(cr2.value) <= tol:
        raise InvariantError("|f_u x f_vv| vanishes: invariant formulas degenerate")
    fu2 = dot(fu, fu)
    sig = _sgn(det3(fu, fvv, n).value)
    ks = det3(fu, fuu, n) * sig / fu2 ** 1.5
    kn = dot(fuu, n) / fu2
    kt = det3(fu, fvv, fvvu) / cr2 - det3(fu, fvv, fuu) * dot(fu, fvv) / (fu2 * cr2)
    kc = fu2 ** 0.75 * det3(fu, fvv, fvvv) / cr2 ** 1.25
    speed = fu2.sqrt()
    ders = {"kappa_s": float(ks.deriv(1)), "kappa_nu": float(kn.deriv(1)),
            "speed": float(speed.value), "sigma": sig}
    return EdgeInvariants(float(ks.value), float(kn.value), float(kt.value), float(kc.value),
                          "direct", ders)


def _chart_data(data, chart, order):
    J = data.jets(chart.p[0], chart.p[1], order)
    C = chart.pull_metric(J)
    nu = C["nu"]
    C["nu_u"] = tuple(c.diff(0) for c in nu)
    C["nu_v"] = tuple(c.diff(1) for c in nu)
    return C


def edge_invariants_closed(data, p, chart=None, s=None, order=5, tol=1e-12):
    """Closed forms in a strongly adapted chart; the sign of kappa_s uses the front."""
    if chart is None:
        chart = adapt_chart(data, p, order)
    if not chart.strongly_adapted:
        raise InvariantError("edge invariants need a strongly adapted chart (first-kind point)")
    C = _chart_data(data, chart, order)
    nu, nu_u, nu_v = C["nu"], C["nu_u"], C["nu_v"]
    nu_uv = tuple(c.diff(1) for c in nu_u)
    o = nu_uv[0].order
    ax = lambda x: _axis(x, o)
    nu, nu_u, nu_v, nu_uv = ax(nu), ax(nu_u), ax(nu_v), ax(nu_uv)
    E = C["E"].truncate(o).restrict_t0()
    hh = C["Hhat"].truncate(o).restrict_t0()
    lam_v = C["lam"].diff(1).truncate(o).restrict_t0()
    R = dot(nu_v, nu_v)
    Q = dot(nu_u, nu_v)
    D = det3(nu_u, nu_v, nu)
    d1 = det3(nu, nu_v, nu_uv)
    if abs(float(E.value)) <= tol or float(R.value) <= tol:
        raise InvariantError("E or R vanishes: closed forms inapplicable")
    if abs(float(lam_v.value)) <= tol:
        raise InvariantError("lambda_v vanishes in the adapted chart (degenerate point)")
    if s is None:
        sig = _sgn(_data_sigma(data, chart, order))
    else:
        sig = sigma_sign(s, chart, order)
    shh = _sgn(hh.value)
    ER = E * R
    kn = -(D * hh) / ER
    ks = d1 * hh * (sig * shh) / (E * R ** 1.5)
    kc = -shh * 2.0 * abs(float(hh.value)) ** 0.5 * float(R.value) ** 0.25 / abs(float(lam_v.value)) ** 0.5
    kt = -(hh * Q) / ER
    ders = {"kappa_s": float(ks.deriv(1)), "kappa_nu": float(kn.deriv(1)), "sigma": sig}
    return EdgeInvariants(float(ks.value), float(kn.value), float(kt.value), float(kc), "closed_form", ders)


def _data_sigma(data, chart, order):
    Jd = data.jets(chart.p[0], chart.p[1], order)
    f = f_jet_from_omega(Jd["omega_u"], Jd["omega_v"])
    f = chart.pull_vec(f)
    nu = chart.pull_vec(Jd["nu"])
    d = _front_axis_derivs(f, nu)
    return det3(d["fu"], d["fvv"], d["nu"]).value


# ---------------------------------------------------------------------------
# Swallowtail invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SwallowtailInvariants:
    mu_c: float
    tau_s: float
    route: str
    extra: dict = field(default_factory=dict, compare=False)


def _check_second_kind(chart):
    if chart.strongly_adapted:
        raise InvariantError("point is of the first kind; swallowtail invariants need k = 2")


def swallowtail_invariants_direct(s, p, chart=None, order=5, tol=1e-10):
    if chart is None:
        chart = adapt_chart(s.data if s.data is not None else s, p, order)
    _check_second_kind(chart)
    f, nu = _chart_front(s, chart, order)
    val = lambda jets, i, j: np.array([float(c.deriv(i, j)) for c in jets])
    fv, fuv, fuu, fuuu = val(f, 0, 1), val(f, 1, 1), val(f, 2, 0), val(f, 3, 0)
    n, nu_u = val(nu, 0, 0), val(nu, 1, 0)
    cr = np.cross(fuv, fv)
    if np.dot(cr, cr) <= tol or np.linalg.norm(fuu) <= tol:
        raise InvariantError("|f_uv x f_v| or |f_uu| vanishes: swallowtail formulas degenerate")
    mu = -np.linalg.norm(fv) ** 3 * np.dot(fuv, nu_u) / np.dot(cr, cr)
    tau = abs(np.linalg.det(np.stack([fuu, fuuu, n], 1))) / np.linalg.norm(fuu) ** 2.5
    return SwallowtailInvariants(float(mu), float(tau), "direct")


def swallowtail_invariants_closed(data, p, chart=None, order=5, tol=1e-12):
    """Closed forms from the data in a u-singular chart.

    ``mu_c`` is -sgn(Hhat) G P^(1/2) / lam_v, which matches the direct
    definition in every u-singular chart; the variant with an extra factor
    1/Hhat^2 is reported in ``extra['mu_c_printed']``.
    """
    if chart is None:
        chart = adapt_chart(data, p, order)
    _check_second_kind(chart)
    C = _chart_data(data, chart, order)
    nu = C["nu"]
    v = lambda jet, i=0, j=0: float(jet.deriv(i, j))
    n = np.array([v(c) for c in nu])
    nu_u = np.array([v(c, 1, 0) for c in nu])
    nu_v = np.array([v(c, 0, 1) for c in nu])
    nu_uu = np.array([v(c, 2, 0) for c in nu])
    G, hh = v(C["G"]), v(C["Hhat"])
    lam_v, F_u, E_uu = v(C["lam"], 0, 1), v(C["F"], 1, 0), v(C["E"], 2, 0)
    P = float(nu_u @ nu_u)
    D = float(np.linalg.det(np.stack([nu_u, nu_v, n], 1)))
    d2 = float(np.linalg.det(np.stack([n, nu_u, nu_uu], 1)))
    if abs(lam_v) <= tol:
        raise InvariantError("lambda_v(p) = 0: closed form for mu_c inapplicable")
    if abs(F_u) <= tol:
        raise InvariantError("F_u(p) = 0: closed form for tau_s inapplicable")
    if P <= tol:
        raise InvariantError("P(p) = 0: closed forms inapplicable")
    shh = _sgn(hh)
    mu = -shh * G * P**0.5 / lam_v
    tau = abs(hh) ** 0.5 * abs(2 * F_u * d2 - E_uu * D) / (abs(F_u) ** 1.5 * P**1.25)
    extra = {"mu_c_printed": mu / hh**2, "Hhat": hh, "lambda_v": lam_v, "G": G, "P": P,
             "F_u": F_u, "E_uu": E_uu, "D": D}
    return SwallowtailInvariants(float(mu), float(tau), "closed_form", extra)


# ---------------------------------------------------------------------------
# Space-curve quantities and criteria
# ---------------------------------------------------------------------------

def space_curve(s, chart, order=5):
    """Curvature and torsion of the image of the singular curve at p."""
    f, _ = _chart_front(s, chart, order)
    c1, c2, c3 = (np.array([float(c.deriv(k, 0)) for c in f]) for k in (1, 2, 3))
    cr = np.cross(c1, c2)
    n1 = np.linalg.norm(c1)
    kappa = np.linalg.norm(cr) / n1**3
    cr2 = float(cr @ cr)
    tau = float(np.linalg.det(np.stack([c1, c2, c3], 1)) / cr2) if cr2 > 1e-24 else float("nan")
    return float(kappa), tau


def decomposition_residuals(s, p, chart=None, order=5, tol=1e-10):
    """Residuals of kappa^2 = kappa_s^2 + kappa_nu^2 and of the torsion splitting.

    Curve derivatives are taken with respect to arclength. The torsion
    splitting carries the orientation sign sgn det(f_u, f_vv, nu).
    """
    if chart is None:
        chart = adapt_chart(s.data if s.data is not None else s, p, order)
    inv = edge_invariants_direct(s, p, chart, order)
    kappa, tau = space_curve(s, chart, order)
    ks, kn, kt = inv.kappa_s, inv.kappa_nu, inv.kappa_t
    r_curv = abs(kappa**2 - (ks**2 + kn**2))
    den = ks**2 + kn**2
    if den <= tol:
        return {"curvature": r_curv, "torsion": float("nan"), "kappa": kappa, "tau": tau}
    speed = inv.derivatives["speed"]
    ks1 = inv.derivatives["kappa_s"] / speed
    kn1 = inv.derivatives["kappa_nu"] / speed
    sig = inv.derivatives["sigma"]
    pred = sig * (ks * kn1 - ks1 * kn) / den + kt
    return {"curvature": r_curv, "torsion": abs(tau - pred), "kappa": kappa, "tau": tau,
            "tau_predicted": pred}


def _criterion_terms(data, chart, order):
    C = _chart_data(data, chart, order)
    nu, nu_u, nu_v = C["nu"], C["nu_u"], C["nu_v"]
    nu_uv = tuple(c.diff(1) for c in nu_u)
    nu_vv = tuple(c.diff(1) for c in nu_v)
    o = nu_uv[0].order
    ax = lambda x: _axis(x, o)
    nu, nu_u, nu_v, nu_uv, nu_vv = map(ax, (nu, nu_u, nu_v, nu_uv, nu_vv))
    one = lambda k: C[k].truncate(o).restrict_t0()
    return {
        "E": one("E"), "Hhat": one("Hhat"),
        "lam_v": C["lam"].diff(1).truncate(o).restrict_t0(),
        "F_v": C["F"].diff(1).truncate(o).restrict_t0(),
        "E_v": C["E"].diff(1).truncate(o).restrict_t0(),
        "Hhat_v": C["Hhat"].diff(1).truncate(o).restrict_t0(),
        "nu": nu, "nu_u": nu_u, "nu_v": nu_v, "nu_vv": nu_vv,
        "R": dot(nu_v, nu_v), "Q": dot(nu_u, nu_v), "D": det3(nu_u, nu_v, nu),
        "d1": det3(nu, nu_v, nu_uv), "d2": det3(nu, nu_v, nu_vv),
    }


def line_criterion(data, s, points, order=5, tol=1e-8):
    """Per point: both det(nu_u, nu_v, nu) and det(nu, nu_v, nu_uv) vanish on the axis."""
    out = []
    for p in np.asarray(points, float).reshape(-1, 2):
        T = _criterion_terms(data, adapt_chart(data, p, order), order)
        out.append(bool(abs(float(T["D"].value)) < tol and abs(float(T["d1"].value)) < tol))
    return out


@dataclass(frozen=True)
class PlaneCriterionResult:
    planar: bool
    display_value: float
    torsion: float
    agree: bool
    fallback: bool


def plane_criterion(data, s, points, order=5, tol=1e-8):
    """Planarity of the singular-curve image.

    The displayed criterion is evaluated literally (u-derivatives through
    the chart jets). The verdict is taken from the torsion of the image
    curve computed directly; ``agree`` records whether the display's
    zero test gives the same answer.
    """
    out = []
    for p in np.asarray(points, float).reshape(-1, 2):
        chart = adapt_chart(data, p, order)
        T = _criterion_terms(data, chart, order)
        E, hh, R, D, d1, d2, Q, lv = (T[k] for k in ("E", "Hhat", "R", "D", "d1", "d2", "Q", "lam_v"))
        kappa, tau = space_curve(s, chart, order)
        ks_term = d1 * hh / (E * R ** 1.5)
        kn_term = -(D * hh) / (E * R)
        fallback = False
        den = hh * d1 * d1 + D * D * R
        if abs(float(den.value)) <= tol or kappa <= tol:
            fallback = True
            disp = float("nan")
        else:
            x = lambda j: float(j.value)
            V = (x(d1) / x(R) ** 0.5 * float(kn_term.deriv(1))
                 + x(D) * x(hh) / (x(E) * x(R)) * float(ks_term.deriv(1)))
            first = x(E) * x(R) ** 2 / x(den) * V
            second = x(hh) * (-x(lv) * x(Q) + 2.0 * x(E) * x(d2)) / (x(lv) * x(E) * x(R))
            disp = first + second
        planar = bool(kappa <= tol or (np.isfinite(tau) and abs(tau) < tol))
        agree = fallback or (abs(disp) < tol) == planar
        out.append(PlaneCriterionResult(planar, disp, tau, bool(agree), fallback))
    return out


def integsing_identity_check(data, points, order=5, tol=1e-8):
    """lam_v Q + F_v D = -E det(nu, nu_v, nu_vv) and its vector form along the axis."""
    sc, vec = [], []
    for p in np.asarray(points, float).reshape(-1, 2):
        chart = adapt_chart(data, p, order)
        T = _criterion_terms(data, chart, order)
        g = lambda k: float(T[k].value)
        lhs = g("lam_v") * g("Q") + g("F_v") * g("D")
        rhs = -g("E") * g("d2")
        sc.append(abs(lhs - rhs) / (1 + abs(lhs) + abs(rhs)))
        hh, hv = g("Hhat"), g("Hhat_v")
        a, a_v = 1.0 / hh, -hv / hh**2
        V = lambda k: np.array([float(c.value) for c in T[k]])
        nu, nu_u, nu_v, nu_vv = V("nu"), V("nu_u"), V("nu_v"), V("nu_vv")
        w = (-a_v * g("E") * np.cross(nu, nu_v)
             + a * (g("lam_v") * nu_u + g("F_v") * np.cross(nu, nu_u)
                    - g("E_v") * np.cross(nu, nu_v) - g("E") * np.cross(nu, nu_vv)))
        vec.append(float(np.max(np.abs(w))))
    res = {"scalar": float(max(sc)) if sc else 0.0, "vector": float(max(vec)) if vec else 0.0}
    return Report("integsing_identity", all(x < tol for x in res.values()), res)


def bounded_gauss_report(data, s, points, order=5, tol=1e-8):
    """Flags tied to bounded Gaussian curvature along a first-kind curve.

    Flags come from the data (D, alpha, D_v); the curvatures they predict
    are checked against the direct values on the front ``s``.
    """
    rows, alarms = [], []
    for p in np.asarray(points, float).reshape(-1, 2):
        chart = adapt_chart(data, p, order)
        T = _criterion_terms(data, chart, order)
        nu_u = np.array([float(c.value) for c in T["nu_u"]])
        nu_v = np.array([float(c.value) for c in T["nu_v"]])
        R = float(T["R"].value)
        alpha = float(nu_u @ nu_v) / R
        par_res = float(np.linalg.norm(nu_u - alpha * nu_v))
        D = float(T["D"].value)
        C = _chart_data(data, chart, order)
        Dj = det3(C["nu_u"], C["nu_v"], tuple(c.truncate(C["nu_u"][0].order) for c in C["nu"]))
        D_v = float(Dj.deriv(0, 1))
        inv = edge_invariants_direct(s, p, chart, order)   # measured on the front
        row = {
            "point": [float(p[0]), float(p[1])],
            "D_zero": abs(D) < tol,
            "alpha": alpha if par_res < 1e-6 else float("nan"),
            "D_v": D_v,
            "eta_D": D_v,
            "fold": bool(abs(D) < tol and abs(D_v) > tol and abs(alpha) > tol),
            "kappa_t_forced_zero": bool(par_res < 1e-6 and abs(alpha) < tol),
            "bounded_K": abs(D) < tol,
            "kappa_nu": inv.kappa_nu, "kappa_s": inv.kappa_s, "kappa_t": inv.kappa_t,
        }
        ok = (row["D_zero"] == (abs(inv.kappa_nu) < tol))
        if row["kappa_t_forced_zero"]:
            ok = ok and abs(inv.kappa_t) < tol
        if row["D_zero"] and row["kappa_t_forced_zero"]:
            ok = ok and ((abs(D_v) < tol) == (abs(inv.kappa_s) < tol))
        row["consistent"] = bool(ok)
        if not ok:
            alarms.append(row["point"])
        rows.append(row)
    return Report("bounded_gauss", not alarms, {"inconsistent_points": len(alarms)},
                  tuple(f"consistency alarm at {a}" for a in alarms), {"rows": rows})

"""Front construction from metric data, a unit normal field and regularized mean curvature.

The surface is the integral of the vector-valued 1-form

    omega_u = (lam nu_u + F nu x nu_u - E nu x nu_v) / Hhat
    omega_v = (lam nu_v + G nu x nu_u - F nu x nu_v) / Hhat

whose closedness is the integrability hypothesis checked here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr
from .fields import ScalarField, Vec3Field, as_field
from .geomcore import cross, segment_integrals
from .jets import Jet, monomials, size
from .metric import MetricData
from .report import Report


class IntegrabilityError(ValueError):
    pass


class FrontPairError(ValueError):
    pass


def hhat_from(H, lam, samples=None):
    """Hhat = -2 H lam as a closed-form field."""
    H, lam = as_field(H), as_field(lam)
    if samples is not None:
        pts = np.asarray(samples, dtype=float).reshape(-1, 2)
        hv = np.broadcast_to(H(pts[:, 0], pts[:, 1]), len(pts))
        if np.any(hv == 0):
            raise FrontPairError("H vanishes at a sampled regular point")
    return ScalarField(expr.mul(expr.mul(-2.0, H.ast), lam.ast))


def hhat_cancelled(H, lam, samples=None):
    """Like :func:`hhat_from`, with common factors of H and lam cancelled by sympy.

    The plain product is 0/0 wherever lam vanishes; the cancelled form can be
    evaluated on the singular set. Falls back to the product when sympy cannot
    reduce it to an expression this package parses.
    """
    import sympy  # noqa: PLC0415

    prod = hhat_from(H, lam, samples)
    try:
        red = sympy.cancel(sympy.sympify(str(prod.ast).replace("^", "**")))
        return ScalarField(str(red).replace("**", "^"))
    except (sympy.SympifyError, expr.ExprError, TypeError):
        return prod


@dataclass(frozen=True)
class FrontPairData:
    metric: MetricData
    nu: Vec3Field
    Hhat: ScalarField
    H: ScalarField | None = None

    def __post_init__(self):
        if not isinstance(self.nu, Vec3Field):
            object.__setattr__(self, "nu", Vec3Field(self.nu))
        object.__setattr__(self, "Hhat", as_field(self.Hhat))
        if self.H is not None:
            object.__setattr__(self, "H", as_field(self.H))

    # -- jets -----------------------------------------------------------
    def jets(self, u, v, order):
        """Jets of E, F, G, lam, Hhat, nu (order ``order``) and of omega (order - 1)."""
        J = self.metric.jets(u, v, order)
        J["Hhat"] = self.Hhat.taylor(u, v, order)
        nu = self.nu.taylor(u, v, order)
        J["nu"] = nu
        nu_u = tuple(c.diff(0) for c in nu)
        nu_v = tuple(c.diff(1) for c in nu)
        J["nu_u"], J["nu_v"] = nu_u, nu_v
        inv = J["Hhat"].truncate(order - 1).reciprocal()
        lam, E, F, G = (J[k].truncate(order - 1) for k in ("lam", "E", "F", "G"))
        nn = tuple(c.truncate(order - 1) for c in nu)
        a = cross(nn, nu_u)
        b = cross(nn, nu_v)
        J["omega_u"] = tuple((lam * nu_u[k] + F * a[k] - E * b[k]) * inv for k in range(3))
        J["omega_v"] = tuple((lam * nu_v[k] + G * a[k] - F * b[k]) * inv for k in range(3))
        return J

    def f_jet(self, u, v, order, value=None):
        """Jet of f of order ``order`` assembled from f_u = omega_u, f_v = omega_v."""
        J = self.jets(u, v, order)
        return f_jet_from_omega(J["omega_u"], J["omega_v"], value), J

    # -- transformations --------------------------------------------------
    def reflected(self):
        """Same geometry in the chart (u, -v), with the orientation-induced sign of lam."""
        R = {"v": expr.neg(expr.V)}
        sub = lambda f: ScalarField(expr.substitute(f.ast, R))
        m = self.metric
        metric = MetricData(sub(m.E), ScalarField(expr.neg(sub(m.F).ast)), sub(m.G),
                            ScalarField(expr.neg(sub(m.lam).ast)), -m.lambda_sign)
        H = sub(self.H) if self.H is not None else None
        return FrontPairData(metric, Vec3Field([sub(c) for c in self.nu]),
                             ScalarField(expr.neg(sub(self.Hhat).ast)), H)

    def validate(self, samples, tol=1e-10):
        pts = np.asarray(samples, dtype=float).reshape(-1, 2)
        u, v = pts[:, 0], pts[:, 1]
        J = self.jets(u, v, 1)
        nu = np.stack([c.value for c in J["nu"]])
        unit = float(np.max(np.abs(np.sum(nu * nu, axis=0) - 1.0)))
        hh = J["Hhat"].value
        dnu = np.sqrt(sum(np.square(c.value) for c in J["nu_u"] + J["nu_v"]))
        res = {"unit_normal": unit, "min_abs_Hhat": float(np.min(np.abs(hh))),
               "min_abs_dnu": float(np.min(dnu))}
        ok = unit < tol and res["min_abs_Hhat"] > tol and res["min_abs_dnu"] > tol
        if self.H is not None:
            lam = J["lam"].value
            reg = np.abs(lam) > 1e-8
            if np.any(reg):
                Hv = np.broadcast_to(self.H(u[reg], v[reg]), u[reg].shape)
                r = float(np.max(np.abs(hh[reg] + 2 * Hv * lam[reg]) / (1 + np.abs(hh[reg]))))
                res["Hhat_plus_2H_lambda"] = r
                ok = ok and r < 1e-8
        return Report("front_pair_data", bool(ok), res)


def f_jet_from_omega(wu, wv, value=None):
    """Integrate omega jets (order N-1) into an f jet of order N."""
    order = wu[0].order + 1
    out = []
    for k in range(3):
        batch = wu[k].batch
        c = np.zeros((size(order),) + batch)
        for idx, (i, j) in enumerate(monomials(order)):
            if i >= 1:
                c[idx] = wu[k].coef(i - 1, j) / i
            elif j >= 1:
                c[idx] = wv[k].coef(0, j - 1) / j
        if value is not None:
            c[0] = value[k]
        out.append(Jet(c, order))
    return tuple(out)


class KenmotsuOneForm:
    """Evaluator (u, v) -> (omega_u, omega_v), each of shape (3, ...)."""

    def __init__(self, data: FrontPairData):
        m = data.metric
        nu = data.nu
        self._roots = [m.E.ast, m.F.ast, m.G.ast, m.lam.ast, data.Hhat.ast]
        self._roots += [c.ast for c in nu] + [c.d(1, 0) for c in nu] + [c.d(0, 1) for c in nu]

    def __call__(self, u, v):
        vals = expr.evaluate_many(self._roots, u, v)
        shape = np.broadcast_shapes(np.shape(u), np.shape(v))
        vals = [np.broadcast_to(x, shape) for x in vals]
        E, F, G, lam, hh = vals[:5]
        nu, nu_u, nu_v = vals[5:8], vals[8:11], vals[11:14]
        a = cross(nu, nu_u)
        b = cross(nu, nu_v)
        wu = np.stack([(lam * nu_u[k] + F * a[k] - E * b[k]) / hh for k in range(3)])
        wv = np.stack([(lam * nu_v[k] + G * a[k] - F * b[k]) / hh for k in range(3)])
        return wu, wv


def integrability_residual(data: FrontPairData, p):
    """d/dv omega_u - d/du omega_v at p (shape (3,) or (3, ...) for batches)."""
    u, v = np.asarray(p[0], float), np.asarray(p[1], float)
    J = data.jets(u, v, 2)
    return np.stack([J["omega_u"][k].diff(1).value - J["omega_v"][k].diff(0).value for k in range(3)])


def check_front_pair(data: FrontPairData, p, eta, tol=1e-9):
    """True iff the derivative of nu along the null vector eta is nonzero at p."""
    J = data.jets(float(p[0]), float(p[1]), 1)
    d = np.array([eta[0] * J["nu_u"][k].value + eta[1] * J["nu_v"][k].value for k in range(3)])
    return bool(np.linalg.norm(d) > tol)


def hhat_limit_check(data, p, product=None, n_rays=8, r0=1e-2, levels=6, spread_tol=1e-4, tol=1e-8):
    """Extrapolate lam*H along rays into p and compare the limits.

    ``product`` (a ScalarField or callable) overrides lam*H; by default it is
    built from ``data.H`` and ``data.metric.lam``, or taken from a
    SurfaceJet's signed area density and mean curvature.
    """
    flags = []
    if product is None:
        if isinstance(data, FrontPairData):
            if data.H is not None:
                product = ScalarField(expr.mul(data.metric.lam.ast, data.H.ast))
            else:
                product = ScalarField(expr.mul(-0.5, data.Hhat.ast))
                flags.append("H not supplied: used -Hhat/2")
        else:
            from .surface import mean_curvature, signed_area_density  # noqa: PLC0415

            flags.append("surface route: det(f_u, f_v, nu) stands in for lam")

            def product(u, v, s=data):
                return signed_area_density(s, (u, v)) * mean_curvature(s, (u, v))
    p = np.asarray(p, dtype=float)
    limits = []
    for k in range(n_rays):
        th = 2 * np.pi * (k + 0.5) / n_rays + 0.1234
        d = np.array([np.cos(th), np.sin(th)])
        r = r0 * 0.5 ** np.arange(levels)
        try:
            vals = np.array([float(np.asarray(product(*(p + ri * d)))) for ri in r])
        except (expr.ExprDomainError, ValueError, ZeroDivisionError):
            flags.append(f"ray {k} skipped (not evaluable)")
            continue
        if not np.all(np.isfinite(vals)):
            flags.append(f"ray {k} skipped (non-finite)")
            continue
        # Richardson table for a function smooth in r
        T = vals.copy()
        for m in range(1, levels):
            T = (2**m * T[1:] - T[:-1]) / (2**m - 1)
        limits.append(float(T[-1]))
    if not limits:
        return Report("hhat_limit", False, {}, tuple(flags) + ("no evaluable rays",))
    limits = np.array(limits)
    lim = float(np.median(limits))
    spread = float(np.max(np.abs(limits - lim)) / max(abs(lim), 1e-300))
    ok = spread < spread_tol and abs(lim) > tol
    return Report("hhat_limit", bool(ok), {"relative_spread": spread},
                  tuple(flags), {"limit": lim, "ray_limits": limits})


def probe_integrability(data: FrontPairData, u_range, v_range, n=50):
    uu = np.linspace(*u_range, n)
    vv = np.linspace(*v_range, n)
    U, V = np.meshgrid(uu, vv, indexing="ij")
    J = data.jets(U.ravel(), V.ravel(), 2)
    res = np.stack([J["omega_u"][k].diff(1).value - J["omega_v"][k].diff(0).value for k in range(3)])
    wscale = max(np.max(np.abs(np.stack([c.value for c in J["omega_u"] + J["omega_v"]]))), 0.0)
    hh = J["Hhat"].value
    return float(np.max(np.abs(res))), float(wscale), float(np.min(np.abs(hh)))


def _cumulative(one_form, fixed, knots, base_index, along, tol):
    """Integrals from knots[base_index] to every knot along one axis, batched over ``fixed``."""
    fixed = np.atleast_1d(fixed)
    m, n = len(fixed), len(knots)
    a, b = knots[:-1], knots[1:]
    F_, A = np.meshgrid(fixed, a, indexing="ij")
    _, B = np.meshgrid(fixed, b, indexing="ij")
    if along == "u":
        starts = np.stack([A.ravel(), F_.ravel()], 1)
        ends = np.stack([B.ravel(), F_.ravel()], 1)
    else:
        starts = np.stack([F_.ravel(), A.ravel()], 1)
        ends = np.stack([F_.ravel(), B.ravel()], 1)
    seg = segment_integrals(one_form, starts, ends, tol).reshape(m, n - 1, 3)
    cum = np.zeros((m, n, 3))
    k0 = base_index
    cum[:, k0 + 1:] = np.cumsum(seg[:, k0:], axis=1)
    if k0 > 0:
        cum[:, :k0] = -np.cumsum(seg[:, :k0][:, ::-1], axis=1)[:, ::-1]
    return cum


def l_path_values(data_or_form, base_point, base_value, u, v, tol=1e-10, first="u"):
    """f at scattered points by integrating along axis-aligned L-paths from the base point."""
    form = data_or_form if callable(data_or_form) else KenmotsuOneForm(data_or_form)
    u = np.atleast_1d(np.asarray(u, float))
    v = np.atleast_1d(np.asarray(v, float))
    u0, v0 = map(float, base_point)
    m = len(u)
    if first == "u":
        leg1 = segment_integrals(form, np.tile([u0, v0], (m, 1)), np.stack([u, np.full(m, v0)], 1), tol)
        leg2 = segment_integrals(form, np.stack([u, np.full(m, v0)], 1), np.stack([u, v], 1), tol)
    else:
        leg1 = segment_integrals(form, np.tile([u0, v0], (m, 1)), np.stack([np.full(m, u0), v], 1), tol)
        leg2 = segment_integrals(form, np.stack([np.full(m, u0), v], 1), np.stack([u, v], 1), tol)
    return np.asarray(base_value, float)[None, :] + leg1 + leg2


def construct_surface(data: FrontPairData, base_point, base_value=(0.0, 0.0, 0.0), grid=None,
                      tol=1e-10, check=True):
    """Integrate the 1-form over a rectangular grid.

    ``grid`` is ``((u_min, u_max), (v_min, v_max), (n_u, n_v))``. Every node
    value is ``base_value`` plus the integral along the L-path (u first,
    then v) from ``base_point``.
    """
    from .surface import SurfaceJet  # noqa: PLC0415

    (ua, ub), (va, vb), (nu, nv) = grid
    if nu < 2 or nv < 2:
        raise ValueError("grid needs at least 2 nodes per direction")
    if check:
        res, wscale, hmin = probe_integrability(data, (ua, ub), (va, vb))
        if hmin == 0.0:
            raise FrontPairError("Hhat vanishes on the probe grid")
        if res >= 1e-8 * (1.0 + wscale):
            raise IntegrabilityError(f"integrability residual {res:.3e} exceeds tolerance")
    uu = np.linspace(ua, ub, int(nu))
    vv = np.linspace(va, vb, int(nv))
    hh = np.broadcast_to(data.Hhat(*np.meshgrid(uu, vv, indexing="ij")), (len(uu), len(vv)))
    if np.any(hh == 0):
        raise FrontPairError("Hhat vanishes on the grid")
    form = KenmotsuOneForm(data)
    u0, v0 = map(float, base_point)
    uk = np.unique(np.concatenate([uu, [u0]]))
    vk = np.unique(np.concatenate([vv, [v0]]))
    iu0 = int(np.searchsorted(uk, u0))
    iv0 = int(np.searchsorted(vk, v0))
    row = _cumulative(form, [v0], uk, iu0, "u", tol)[0]          # (len(uk), 3)
    cols = _cumulative(form, uk, vk, iv0, "v", tol)              # (len(uk), len(vk), 3)
    full = np.asarray(base_value, float)[None, None, :] + row[:, None, :] + cols
    iu = np.searchsorted(uk, uu)
    iv = np.searchsorted(vk, vv)
    values = full[np.ix_(iu, iv)]
    return SurfaceJet(uu, vv, values, nu_field=data.nu, data=data,
                      base_point=(u0, v0), base_value=np.asarray(base_value, float), tol=tol)


def path_difference(data: FrontPairData, base_point, targets, tol=1e-10):
    """Endpoint difference between the u-first and v-first L-paths, per target."""
    t = np.asarray(targets, float).reshape(-1, 2)
    a = l_path_values(data, base_point, np.zeros(3), t[:, 0], t[:, 1], tol, first="u")
    b = l_path_values(data, base_point, np.zeros(3), t[:, 0], t[:, 1], tol, first="v")
    return np.max(np.abs(a - b), axis=1)


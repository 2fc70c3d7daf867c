"""Built-in test universes with exactly known answers."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import numpy as np

from . import expr
from .expr import cos, sin, sqrt
from .fields import ScalarField, Vec3Field
from .geomcore import cross, dot
from .kenmotsu import FrontPairData, construct_surface, hhat_cancelled
from .metric import MetricData


@dataclass
class Preset:
    name: str
    domain: tuple
    grid: tuple
    data: FrontPairData | None = None
    metric: MetricData | None = None
    front: Vec3Field | None = None          # closed-form f when known
    nu: Vec3Field | None = None
    base_point: tuple = (0.0, 0.0)
    base_value: tuple | None = None
    expected: dict = field(default_factory=dict)
    description: str = ""

    def __post_init__(self):
        if self.metric is None and self.data is not None:
            self.metric = self.data.metric
        if self.nu is None and self.data is not None:
            self.nu = self.data.nu
        if self.base_value is None:
            if self.front is not None:
                self.base_value = tuple(float(x) for x in self.front(*self.base_point))
            else:
                self.base_value = (0.0, 0.0, 0.0)

    @property
    def constructible(self):
        return self.data is not None and self.front is None

    def surface(self, grid=None, via="auto"):
        """SurfaceJet on ``grid`` (defaults to the preset grid).

        ``via`` selects the kenmotsu construction, the closed-form front, or
        (auto) the closed form for normal-form fronts and construction otherwise.
        """
        from .surface import SurfaceJet  # noqa: PLC0415

        grid = grid or (self.domain[0], self.domain[1], self.grid)
        if via == "auto":
            via = "closed_form" if self.expected.get("kind") == "normal_form" else "kenmotsu"
        if via == "closed_form":
            if self.front is None:
                raise ValueError(f"preset {self.name!r} has no closed-form front")
            return SurfaceJet.from_closed_form(self.front, self.nu, grid)
        if self.data is None:
            raise ValueError(f"preset {self.name!r} has no front-pair data")
        return construct_surface(self.data, self.base_point, self.base_value, grid)


def _sf(x):
    return ScalarField(expr.as_node(x))


# ---------------------------------------------------------------------------
# Worked examples
# ---------------------------------------------------------------------------

COSH_TEXT = {
    "H": "-(-3+cosh(2*v))/(2*sinh(v))",
    "E": "1/cosh(v)^2",
    "F": "0",
    "G": "sinh(v)^2/cosh(v)^2",
    "lambda": "sinh(v)/cosh(v)^2",
    "Hhat": "(-3+cosh(2*v))/cosh(v)^2",
    "nu": ("cos(u)*sinh(v)/cosh(v)", "sin(u)*sinh(v)/cosh(v)", "1/cosh(v)"),
}


def cosh_example():
    t = COSH_TEXT
    metric = MetricData.from_text(t["E"], t["F"], t["G"], t["lambda"])
    data = FrontPairData(metric, Vec3Field(t["nu"]), ScalarField(t["Hhat"]), ScalarField(t["H"]))
    return Preset(
        "cosh_example", ((-pi, pi), (-0.45, 0.45)), (63, 37), data=data,
        expected={
            "kind": "construction",
            "singular_curves": "v = 0",
            "metric_label": "A_2",
            "front_label": "CuspidalEdge",
            "kappa_s": 2.0, "kappa_nu": 0.0, "kappa_t": 0.0, "kappa_c": 2.0 * np.sqrt(2.0),
        },
        description="rotationally symmetric front with a cuspidal-edge circle along v = 0",
    )


def translation_family(H, l, Hhat=None, theta=None, f=None, name="translation",
                       domain=((-4.0, 4.0), (-1.0, 1.0)), grid=(161, 41), base_point=(pi / 2, 0.0)):
    """Translation-type data E = l^2, F = 0, G = 1, lam = l, nu = (sin th, -cos th, 0).

    ``H`` and ``l`` depend on u only. ``theta`` is a primitive of Hhat = -2 l H;
    when absent it is computed by quadrature. ``f`` is an optional closed form.
    """
    H, l = _sf(H), _sf(l)
    if H.depends_on("v") or l.depends_on("v"):
        raise ValueError("translation data must depend on u only")
    hh = _sf(Hhat) if Hhat is not None else hhat_cancelled(H, l)
    th = _sf(theta).ast if theta is not None else expr.Primitive(hh.ast, 0.0)
    metric = MetricData(_sf(expr.power(l.ast, 2.0)), _sf(0.0), _sf(1.0), l)
    nu = Vec3Field([_sf(sin(th)), _sf(expr.neg(cos(th))), _sf(0.0)])
    data = FrontPairData(metric, nu, hh, H)
    front = Vec3Field(f) if f is not None else None
    return Preset(name, domain, grid, data=data, front=front, base_point=base_point,
                  expected={"kind": "construction", "front_label": "CuspidalEdge",
                            "metric_label": "A_2", "line": True})


def translation_example():
    return translation_family(
        "-1/sin(u)", "sin(u)/2", Hhat="1", theta="u",
        f=("-cos(u)^2/4", "(u-cos(u)*sin(u))/4", "v"), name="translation")


def translation_example_wide():
    u1, u2 = "(6*u/5)", "(16*u/5)"
    return translation_family(
        "-1/sin(u)", "11/10*sin(u)", Hhat="11/5", theta="11*u/5",
        f=(f"11*(8*cos({u1})-3*cos({u2}))/192", f"11*(8*sin({u1})-3*sin({u2}))/192", "v"),
        name="translation_wide", domain=((0.0, 10 * pi), (-1.0, 1.0)), grid=(401, 21),
        base_point=(pi / 2, 0.0))


def translation_cylinder():
    """l constant: no singular set."""
    return translation_family("-1/2", "1", Hhat="1", theta="u", name="translation_cylinder",
                              domain=((-2.0, 2.0), (-1.0, 1.0)), grid=(41, 21), base_point=(0.0, 0.0))


# ---------------------------------------------------------------------------
# Fronts given by a closed form with f_v = k h
# ---------------------------------------------------------------------------

def factored_front_data(f, k, h):
    """Front-pair data of a front f whose v-derivative factors as f_v = k h.

    nu is the normalized f_u x h, lam = k det(f_u, h, nu), and Hhat follows
    from the mean curvature with the singular factor k cancelled by hand.
    """
    f = [expr.as_node(x) for x in f]
    h = [expr.as_node(x) for x in h]
    k = expr.as_node(k)
    fu = [expr.differentiate(x, "u") for x in f]
    fuu = [expr.differentiate(x, "u") for x in fu]
    n = cross(fu, h)
    c = sqrt(dot(n, n))
    nu = [x / c for x in n]
    nu_u = [expr.differentiate(x, "u") for x in nu]
    nu_v = [expr.differentiate(x, "v") for x in nu]
    fv = [k * x for x in h]
    E, F, G = dot(fu, fu), dot(fu, fv), dot(fv, fv)
    lam = k * c
    L = dot(fuu, nu)
    hh = -((-E) * dot(h, nu_v) + 2.0 * k * dot(fu, h) * dot(h, nu_u) + k * dot(h, h) * L) / c
    metric = MetricData(_sf(E), _sf(F), _sf(G), _sf(lam))
    return FrontPairData(metric, Vec3Field([_sf(x) for x in nu]), _sf(hh)), Vec3Field([_sf(x) for x in f])


def _normal_form(name, f, k, h, label, domain=((-0.5, 0.5), (-0.5, 0.5)), grid=(41, 41), **extra):
    data, front = factored_front_data(f, k, h)
    exp = {"kind": "normal_form", "front_label": label}
    exp.update(extra)
    return Preset(name, domain, grid, data=data, front=front, base_point=(0.0, 0.0), expected=exp)


def cuspidal_edge():
    return _normal_form("cuspidal_edge", ("u", "v^2", "v^3"), "v", ("0", "2", "3*v"),
                        "CuspidalEdge", metric_label="A_2")


def swallowtail():
    return _normal_form("swallowtail", ("u", "4*v^3+2*u*v", "3*v^4+u*v^2"), "2*(6*v^2+u)",
                        ("0", "1", "v"), "Swallowtail", metric_label="A_3",
                        # direct and closed routes in the chart produced by adapt_chart
                        mu_c=-0.5, tau_s=2.0 / np.sqrt(3.0))


def lips():
    return _normal_form("lips", ("u", "-2*v^3-u^2*v", "3*v^4+u^2*v^2"), "-(6*v^2+u^2)",
                        ("0", "1", "-2*v"), "CuspidalLips", metric_label="MorseType")


def beaks():
    return _normal_form("beaks", ("u", "-2*v^3+u^2*v", "3*v^4-u^2*v^2"), "u^2-6*v^2",
                        ("0", "1", "-2*v"), "CuspidalBeaks", metric_label="MorseType")


def generic_edge():
    """Cuspidal edge along a twisted space curve (D and torsion nonzero)."""
    return _normal_form("generic_edge", ("u", "u^2/2+v^2", "u^2/3+u^3/6+v^3+u*v^2"), "v",
                        ("0", "2", "3*v+2*u"), "CuspidalEdge", metric_label="A_2",
                        domain=((-0.3, 0.3), (-0.3, 0.3)), grid=(31, 31))


def normal_form_fronts():
    return [cuspidal_edge(), swallowtail(), lips(), beaks()]


# ---------------------------------------------------------------------------
# Metric-only presets
# ---------------------------------------------------------------------------

def flat_metric():
    return Preset("flat", ((-1.0, 1.0), (-1.0, 1.0)), (21, 21),
                  metric=MetricData.from_text("1", "0", "1", "1"),
                  expected={"kind": "metric", "singular_points": 0})


def beaks_metric():
    return Preset("beaks_metric", ((-1.0, 1.0), (-1.0, 1.0)), (21, 21),
                  metric=MetricData.from_text("1", "0", "(v^2-u^2)^2", "v^2-u^2"),
                  expected={"kind": "metric", "metric_label": "MorseType"})


def corank2_metric():
    return Preset("corank2", ((-1.0, 1.0), (-1.0, 1.0)), (21, 21),
                  metric=MetricData.from_text("u^2+v^2", "0", "u^2+v^2", "u^2+v^2"),
                  expected={"kind": "metric", "error": "UnsupportedSingularity"})


REGISTRY = {
    "cosh_example": cosh_example,
    "translation": translation_example,
    "translation_wide": translation_example_wide,
    "translation_cylinder": translation_cylinder,
    "cuspidal_edge": cuspidal_edge,
    "swallowtail": swallowtail,
    "lips": lips,
    "beaks": beaks,
    "generic_edge": generic_edge,
    "flat": flat_metric,
    "beaks_metric": beaks_metric,
    "corank2": corank2_metric,
}


def get(name):
    try:
        return REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(REGISTRY))}") from None

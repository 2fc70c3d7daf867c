import numpy as np
import pytest
import sympy as sp

from frontforge import presets
from frontforge.metric import (DegenerateInput, MetricData, UnsupportedSingularity, check_admissible,
                               check_frontal, classify_metric_point, singular_set)


def test_frontal_cosh(cosh, rng):
    pts = np.stack([rng.uniform(-3, 3, 200), rng.uniform(-0.5, 0.5, 200)], 1)
    rep = check_frontal(cosh.metric, pts)
    assert rep.passed and rep.residuals["max_abs_EG_minus_F2_minus_lambda2"] < 1e-12


def test_frontal_flat_passes_and_forced_mismatch_fails():
    pts = np.random.default_rng(0).uniform(-1, 1, (50, 2))
    assert check_frontal(MetricData.from_text("1", "0", "1", "1"), pts).passed
    bad = check_frontal(MetricData.from_text("1", "0", "1", "2"), pts)
    assert not bad.passed
    assert bad.residuals["max_abs_EG_minus_F2_minus_lambda2"] == pytest.approx(3.0)


def test_admissible_cosh(cosh):
    curves = singular_set(cosh.metric, cosh.domain, cosh.grid)
    rep = check_admissible(cosh.metric, curves)
    assert rep.passed and max(rep.residuals.values()) < 1e-12


def test_admissible_translation_after_swap(translation):
    m = translation.metric
    assert not check_admissible(m, singular_set(m, translation.domain, translation.grid)).passed
    sw = m.swapped()
    dom = translation.domain[::-1]
    curves = singular_set(sw, dom, translation.grid[::-1])
    rep = check_admissible(sw, curves)
    assert rep.passed


def test_admissible_vacuous_on_empty_set():
    rep = check_admissible(MetricData.from_text("1", "0", "1", "1"), [])
    assert rep.passed and rep.flags


def test_singular_set_cosh_is_the_u_axis(cosh):
    curves = singular_set(cosh.metric, ((-3.0, 3.0), (-0.5, 0.5)), (61, 41))
    assert len(curves) == 1
    c = curves[0]
    assert np.max(np.abs(c.points[:, 1])) < 1e-12
    assert c.points[0, 0] == pytest.approx(-3.0) and c.points[-1, 0] == pytest.approx(3.0)


def test_singular_set_translation(translation):
    curves = singular_set(translation.metric, translation.domain, translation.grid)
    us = sorted(float(np.mean(c.points[:, 0])) for c in curves)
    np.testing.assert_allclose(us, [-np.pi, 0.0, np.pi], atol=1e-12)
    for c in curves:
        assert np.ptp(c.points[:, 0]) < 1e-12


def test_singular_set_flat_is_empty():
    p = presets.flat_metric()
    assert singular_set(p.metric, p.domain, p.grid) == []


def test_singular_set_rejects_lambda_zero_on_open_set():
    m = MetricData.from_text("1", "0", "0", "0")
    with pytest.raises(DegenerateInput):
        singular_set(m, ((-1, 1), (-1, 1)), (11, 11))


@pytest.mark.parametrize("name", ["cosh_example", "translation", "swallowtail", "beaks"])
def test_null_vectors_and_points(name):
    p = presets.get(name)
    m = p.metric
    for c in singular_set(m, p.domain, p.grid):
        u, v = c.points.T
        lam = np.broadcast_to(m.lam(u, v), u.shape)
        assert np.max(np.abs(lam)) < 1e-10
        E, F, G = (np.broadcast_to(f(u, v), u.shape) for f in (m.E, m.F, m.G))
        scale = 1 + np.abs(E) + np.abs(G)
        r = np.abs(E * c.eta[:, 0] + F * c.eta[:, 1]) + np.abs(F * c.eta[:, 0] + G * c.eta[:, 1])
        assert np.max(r / scale) < 1e-9
        np.testing.assert_allclose(np.hypot(*c.eta.T), 1.0)
        # orientation continuity
        assert np.all(np.sum(c.eta[1:] * c.eta[:-1], axis=1) > 0)


def test_cosh_points_are_a2(cosh):
    for u in (-2.0, 0.0, 0.7):
        c = classify_metric_point(cosh.metric, (u, 0.0))
        assert c.tag == "A_2" and c.k == 2
        assert abs(c.diagnostics["psi_jet"][0]) == pytest.approx(1.0)


def test_swallowtail_origin_is_a3(swallowtail):
    c = classify_metric_point(swallowtail.metric, (0.0, 0.0))
    assert c.tag == "A_3"
    psi = c.diagnostics["psi_jet"]
    assert abs(psi[0]) < 1e-12 and abs(psi[1]) > 1e-3


def test_swallowtail_psi_oracle():
    """psi(t) = det(gamma', eta) along gamma(t) = (-6t^2, t), eta = (-F, E)."""
    u, v, t = sp.symbols("u v t")
    st = sp.Matrix([u, 4 * v**3 + 2 * u * v, 3 * v**4 + u * v**2])
    fu, fv = st.diff(u), st.diff(v)
    E, F = fu.dot(fu), fu.dot(fv)
    gam = {u: -6 * t**2, v: t}
    eta = sp.Matrix([-F, E]).subs(gam)
    dg = sp.Matrix([-12 * t, 1])
    psi = sp.simplify(dg[0] * eta[1] - dg[1] * eta[0])
    assert psi.subs(t, 0) == 0
    assert sp.diff(psi, t).subs(t, 0) != 0


def test_beaks_metric_is_morse():
    c = classify_metric_point(presets.beaks_metric().metric, (0.0, 0.0))
    assert c.tag == "MorseType"
    assert c.diagnostics["hess_det"] == pytest.approx(-4.0)
    assert c.diagnostics["eta_eta_lambda"] == pytest.approx(2.0)


def test_corank2_raises():
    with pytest.raises(UnsupportedSingularity):
        classify_metric_point(presets.corank2_metric().metric, (0.0, 0.0))


def test_a2_jet_pattern_consistent(cosh):
    c = classify_metric_point(cosh.metric, (1.1, 0.0))
    assert abs(c.diagnostics["psi_jet"][0]) > 1e-6


@pytest.mark.parametrize("angle", [0.3, 1.2, 2.5])
@pytest.mark.parametrize("name,point,tag", [("swallowtail", (0.0, 0.0), "A_3"),
                                            ("beaks_metric", (0.0, 0.0), "MorseType"),
                                            ("cosh_example", (0.4, 0.0), "A_2")])
def test_tags_invariant_under_rotation(angle, name, point, tag):
    m = presets.get(name).metric
    c, s = np.cos(angle), np.sin(angle)
    A = np.array([[c, -s], [s, c]])
    # new coordinates x with old = A x + point
    rot = m.pullback_linear(A, point)
    assert classify_metric_point(rot, (0.0, 0.0)).tag == tag

"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or ``python tests/test_acceptance.py``.
"""
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _gen import random_expression  # noqa: E402
from _oracles import cosh_oracle, swallowtail_oracle  # noqa: E402
from frontforge import presets  # noqa: E402
from frontforge.expr import evaluate, parse, partial  # noqa: E402
from frontforge.geomcore import GridField, fd_partial  # noqa: E402
from frontforge.invariants import (adapt_chart, decomposition_residuals, edge_invariants_closed,  # noqa: E402
                                   edge_invariants_direct, integsing_identity_check,
                                   swallowtail_invariants_closed, swallowtail_invariants_direct)
from frontforge.kenmotsu import construct_surface, path_difference  # noqa: E402
from frontforge.metric import (UnsupportedSingularity, classify_metric_point, singular_set)  # noqa: E402
from frontforge.surface import (classify_front_singularity, expected_front_tag, mean_curvature,  # noqa: E402
                                verify_theorem_identities)

LINES = []


def _line(n, ok, detail):
    text = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}"
    LINES.append(text)
    print(text)
    return ok


def criterion_1():
    p = presets.translation_example()
    t0 = time.perf_counter()
    s = construct_surface(p.data, (np.pi / 2, 0.0), p.base_value, ((-4.0, 4.0), (-1.0, 1.0), (161, 41)))
    dt = time.perf_counter() - t0
    U, V = np.meshgrid(s.uu, s.vv, indexing="ij")
    ref = np.stack([-np.cos(U) ** 2 / 4, (U - np.cos(U) * np.sin(U)) / 4, V], -1)
    err = float(np.max(np.abs(s.values - ref)))
    return err < 1e-8 and dt < 10, f"translation max deviation {err:.2e}, build {dt:.2f} s"


def criterion_2():
    p = presets.cosh_example()
    s = p.surface()
    rng = np.random.default_rng(2)
    v = rng.uniform(0.05, 0.45, 200) * rng.choice([-1.0, 1.0], 200)
    u = rng.uniform(-np.pi, np.pi, 200)
    Hv = -(-3 + np.cosh(2 * v)) / (2 * np.sinh(v))
    rel = max(abs(mean_curvature(s, (a, b)) - h) / abs(h) for a, b, h in zip(u, v, Hv))
    tags = {classify_front_singularity(s, (a, 0.0)).tag for a in s.uu}
    curve = singular_set(p.metric, p.domain, p.grid)[0]
    idx = np.linspace(0, len(curve) - 1, 50).round().astype(int)
    agree = 0
    for q in curve.points[idx]:
        mc = classify_metric_point(p.metric, q)
        fc = classify_front_singularity(s, q)
        agree += mc.tag == "A_2" and fc.tag == expected_front_tag(mc) == "CuspidalEdge" and fc.kind == 1
    ok = rel < 1e-6 and tags == {"CuspidalEdge"} and agree == 50
    return ok, f"max rel |H_f - H| {rel:.2e}; axis labels {sorted(tags)}; A_2/first-kind agreement {agree}/50"


def criterion_3():
    p = presets.cosh_example()
    s = p.surface()
    worst_val, worst_route, frozen = 0.0, 0.0, True
    for u0 in np.linspace(-3.0, 3.0, 7):
        want = np.array(cosh_oracle(u0))
        chart = adapt_chart(p.data, (u0, 0.0))
        d = np.array(edge_invariants_direct(s, (u0, 0.0), chart).as_tuple())
        c = np.array(edge_invariants_closed(p.data, (u0, 0.0), chart, s).as_tuple())
        frozen &= np.allclose(want, [2.0, 0.0, 0.0, 2.0 * np.sqrt(2.0)], atol=1e-14, rtol=0)
        worst_val = max(worst_val, np.max(np.abs(d - want)), np.max(np.abs(c - want)))
        worst_route = max(worst_route, np.max(np.abs(d - c)))
    ok = frozen and worst_val < 1e-8 and worst_route < 1e-6
    return ok, f"oracle matches (2, 0, 0, 2 sqrt 2): {frozen}; max |route - sympy oracle| {worst_val:.2e}, max route gap {worst_route:.2e}"


def _regular_points(p, n, rng, margin=0.05):
    (ua, ub), (va, vb) = p.domain
    out = []
    while len(out) < n:
        q = rng.uniform((ua, va), (ub, vb))
        if abs(float(p.metric.lam(*q))) > margin:
            out.append(q)
    return np.array(out)


def criterion_4():
    rng = np.random.default_rng(4)
    parts, ok = [], True
    for name in ("cosh_example", "translation"):
        p = presets.get(name)
        rep = verify_theorem_identities(p.surface(), p.data, _regular_points(p, 100, rng))
        worst = max(rep.residuals.values())
        ok &= rep.passed and len(rep.residuals) >= 8
        parts.append(f"{name} worst {worst:.2e} over {len(rep.residuals)} identities")
    return ok, "; ".join(parts)


def criterion_5():
    rng = np.random.default_rng(5)
    parts, ok = [], True
    for name in ("cosh_example", "translation"):
        p = presets.get(name)
        (ua, ub), (va, vb) = p.domain
        targets = rng.uniform((ua, va), (ub, vb), (20, 2))
        d = float(np.max(path_difference(p.data, p.base_point, targets)))
        ok &= d < 2e-10
        parts.append(f"{name} {d:.2e}")
    return ok, "L-path vs transposed L-path: " + ", ".join(parts)


def criterion_6():
    p = presets.cosh_example()
    (ua, ub), (va, vb) = p.domain
    plus = p.surface()
    minus = construct_surface(p.data.reflected(), (0.0, 0.0), (0.0, 0.0, 0.0), ((ua, ub), (-vb, -va), p.grid))
    diff = minus.values - plus.values[:, ::-1]
    diff -= diff[0, 0]
    err = float(np.max(np.abs(diff)))
    return err < 1e-8, f"max |f_-(u,v) - f_+(u,-v) - c| {err:.2e}"


def criterion_7():
    mu, tau = (float(x) for x in swallowtail_oracle())
    p = presets.swallowtail()
    s = p.surface()
    d = swallowtail_invariants_direct(s, (0.0, 0.0))
    c = swallowtail_invariants_closed(p.data, (0.0, 0.0))
    rel = max(abs(d.mu_c - c.mu_c) / abs(c.mu_c), abs(d.tau_s - c.tau_s) / abs(c.tau_s),
              abs(d.mu_c - mu) / abs(mu), abs(c.mu_c - mu) / abs(mu),
              abs(d.tau_s - tau) / tau, abs(c.tau_s - tau) / tau)
    return rel < 1e-5, (f"mu_c {d.mu_c:.9f}/{c.mu_c:.9f}, tau_s {d.tau_s:.9f}/{c.tau_s:.9f} "
                        f"(oracle {mu}, {tau:.9f}), worst rel {rel:.2e}")


def criterion_8():
    got = {}
    for p in presets.normal_form_fronts():
        got[p.name] = (classify_front_singularity(p.surface(), (0.0, 0.0)).tag, p.expected["front_label"])
    flat = presets.flat_metric()
    n_flat = len(singular_set(flat.metric, flat.domain, flat.grid))
    try:
        classify_metric_point(presets.corank2_metric().metric, (0.0, 0.0))
        corank = "no error"
    except UnsupportedSingularity:
        corank = "UnsupportedSingularity"
    ok = all(a == b for a, b in got.values()) and n_flat == 0 and corank == "UnsupportedSingularity"
    labels = ", ".join(f"{k}->{a}" for k, (a, _) in got.items())
    return ok, f"{labels}; flat singular curves {n_flat}; corank 2 -> {corank}"


def criterion_9():
    p = presets.cosh_example()
    s = p.surface()
    pts = [(u0, 0.0) for u0 in np.linspace(-3.0, 3.0, 13)]
    rc = rt = 0.0
    for q in pts:
        r = decomposition_residuals(s, q)
        rc, rt = max(rc, r["curvature"]), max(rt, r["torsion"])
    rep = integsing_identity_check(p.data, pts)
    ri = max(rep.residuals.values())
    ok = rc < 1e-6 and rt < 1e-5 and rep.passed and ri < 1e-8
    return ok, f"curvature split {rc:.2e}, torsion split {rt:.2e}, singular-set identity {ri:.2e}"


def _fd(node, point, i, j, h=0.02, acc=8):
    """Nested central differences: d^i/du^i of the d^j/dv^j stencil values."""
    half = 6
    u0, v0 = point
    offs = np.arange(-half, half + 1) * h
    U, V = np.meshgrid(u0 + offs, v0 + offs, indexing="ij")
    g = GridField(np.asarray(np.broadcast_to(evaluate(node, U, V), U.shape), float), u0 - half * h,
                  v0 - half * h, h, h)
    if j:
        col = np.array([fd_partial(GridField(g.values[k:k + 1, :], u0, v0 - half * h, h, h),
                                   (u0, v0), "v", j, acc) for k in range(len(offs))])
    else:
        col = g.values[:, half]
    if not i:
        return float(col[half])
    return float(fd_partial(GridField(col[:, None], u0 - half * h, v0, h, h), (u0, v0), "u", i, acc))


def criterion_10():
    rng = np.random.default_rng(10)
    worst, n = 0.0, 0
    while n < 100:
        node = parse(random_expression(rng))
        i, j = (int(x) for x in rng.integers(0, 4, 2))
        if not 1 <= i + j <= 3:
            continue
        q = rng.uniform(-1, 1, 2)
        sym = float(evaluate(partial(node, i, j), *q))
        err = abs(_fd(node, q, i, j) - sym) / max(1.0, abs(sym))
        worst = max(worst, err)
        n += 1
    return worst < 1e-6, f"{n} triples, worst relative error {worst:.2e}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    assert _line(n, bool(ok), detail), detail


if __name__ == "__main__":
    results = [_line(k, *CRITERIA[k - 1]()) for k in range(1, 11)]
    sys.exit(0 if all(results) else 1)

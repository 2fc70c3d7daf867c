"""Batch front-end: ``front-forge check|build|classify|invariants``.

Config files are INI documents with sections [input], [domain], [output]
and [tolerances]. Expression values are quoted strings; the normal field
``nu`` is three comma-separated quoted strings.

Exit codes: 0 pass, 1 a check failed, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import re
import shlex
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import expr, presets
from .fields import ScalarField, Vec3Field
from .invariants import (InvariantError, adapt_chart, edge_invariants_closed, edge_invariants_direct,
                         line_criterion, plane_criterion, swallowtail_invariants_closed,
                         swallowtail_invariants_direct)
from .kenmotsu import (FrontPairData, IntegrabilityError, FrontPairError, check_front_pair,
                       hhat_cancelled, hhat_limit_check, probe_integrability)
from .local import gradient, hessian
from .metric import (MetricData, UnsupportedSingularity, check_admissible, check_frontal,
                     classify_metric_point, singular_set)
from .surface import NotSingularError, classify_front_singularity, expected_front_tag

DEFAULT_TOLS = {
    "frontal": 1e-9,
    "admissible": 1e-8,
    "front_pair": 1e-9,
    "integrability": 1e-8,
    "routes": 1e-6,
    "routes_swallowtail": 1e-5,
}


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    preset: presets.Preset | None
    data: FrontPairData | None
    metric: MetricData
    domain: tuple
    grid: tuple
    base_point: tuple
    base_value: tuple
    outputs: dict = field(default_factory=dict)
    tols: dict = field(default_factory=lambda: dict(DEFAULT_TOLS))
    max_rows: int | None = None

    @property
    def label(self):
        return self.preset.name if self.preset is not None else "inline"


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------

def _unquote(text):
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def _floats(text, n, key):
    try:
        vals = [float(expr.evaluate(expr.parse(_unquote(x)), 0.0, 0.0)) for x in text.split(",")]
    except (expr.ExprError, ValueError) as e:
        raise ConfigError(f"bad numeric list for {key!r}: {e}") from None
    if len(vals) != n:
        raise ConfigError(f"{key!r} needs {n} values, got {len(vals)}")
    return tuple(vals)


def _field(sec, key):
    try:
        return ScalarField(_unquote(sec[key]))
    except expr.ExprError as e:
        raise ConfigError(f"cannot parse {key!r}: {e}") from None


def load_config(path=None, preset_name=None, tol=None):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                cp.read_file(fh)
        except OSError as e:
            raise ConfigError(f"cannot read config: {e}") from None
        except configparser.Error as e:
            raise ConfigError(f"malformed config: {e}") from None
    inp = cp["input"] if cp.has_section("input") else {}
    inline_keys = {"E", "F", "G", "lambda", "Hhat", "H", "nu"} & set(inp)
    name = preset_name or (_unquote(inp["preset"]) if "preset" in inp else None)
    if name and inline_keys and not preset_name:
        raise ConfigError("give either a preset or inline fields, not both")
    preset = data = None
    if name:
        try:
            preset = presets.get(name)
        except KeyError as e:
            raise ConfigError(str(e.args[0])) from None
        data, metric = preset.data, preset.metric
        domain, grid = preset.domain, preset.grid
        base_point, base_value = preset.base_point, preset.base_value
    else:
        missing = [k for k in ("E", "F", "G", "lambda", "nu") if k not in inp]
        if "Hhat" not in inp and "H" not in inp:
            missing.append("Hhat or H")
        if missing:
            raise ConfigError(f"inline input is missing: {', '.join(missing)}")
        metric = MetricData(_field(inp, "E"), _field(inp, "F"), _field(inp, "G"), _field(inp, "lambda"))
        parts = [p.strip() for p in shlex.split(inp["nu"].replace(",", " , ")) if p.strip() != ","]
        if len(parts) != 3:
            raise ConfigError("nu needs three quoted expressions")
        try:
            nu = Vec3Field([ScalarField(p) for p in parts])
        except expr.ExprError as e:
            raise ConfigError(f"cannot parse nu: {e}") from None
        H = _field(inp, "H") if "H" in inp else None
        Hh = _field(inp, "Hhat") if "Hhat" in inp else hhat_cancelled(H, metric.lam)
        data = FrontPairData(metric, nu, Hh, H)
        domain, grid = None, (41, 41)
        base_point, base_value = (0.0, 0.0), (0.0, 0.0, 0.0)
    if cp.has_section("domain"):
        d = cp["domain"]
        if "u" in d or "v" in d:
            if "u" not in d or "v" not in d:
                raise ConfigError("[domain] needs both u and v ranges")
            domain = (_floats(d["u"], 2, "u"), _floats(d["v"], 2, "v"))
        if "grid" in d:
            grid = tuple(int(x) for x in _floats(d["grid"], 2, "grid"))
        if "base_point" in d:
            base_point = _floats(d["base_point"], 2, "base_point")
        if "base_value" in d:
            base_value = _floats(d["base_value"], 3, "base_value")
    if domain is None:
        raise ConfigError("inline input needs a [domain] with u and v ranges")
    if grid[0] < 8 or grid[1] < 8:
        raise ConfigError("grid must be at least 8 x 8")
    outputs = {}
    if cp.has_section("output"):
        for k in ("obj", "csv", "json", "polyline"):
            if k in cp["output"]:
                outputs[k] = Path(_unquote(cp["output"][k]))
    tols = dict(DEFAULT_TOLS)
    if cp.has_section("tolerances"):
        for k, val in cp["tolerances"].items():
            if k not in tols:
                raise ConfigError(f"unknown tolerance {k!r}")
            tols[k] = _floats(val, 1, k)[0]
    if tol is not None:
        for k in ("frontal", "admissible", "front_pair", "integrability"):
            tols[k] = tol
    max_rows = None
    if cp.has_section("domain") and "max_rows" in cp["domain"]:
        max_rows = int(_floats(cp["domain"]["max_rows"], 1, "max_rows")[0])
    return JobConfig(preset, data, metric, tuple(map(tuple, domain)), tuple(grid),
                     tuple(base_point), tuple(base_value), outputs, tols, max_rows)


# ---------------------------------------------------------------------------
# Deterministic serialization
# ---------------------------------------------------------------------------

_FTAG = re.compile(r'"@F@([^"]*)@"')


def _prep(x):
    if isinstance(x, dict):
        return {str(k): _prep(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_prep(v) for v in x]
    if isinstance(x, np.ndarray):
        return _prep(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return f"@F@{x:.12e}@" if math.isfinite(x) else None
    return x


def dumps(obj):
    return _FTAG.sub(r"\1", json.dumps(_prep(obj), sort_keys=True, indent=2)) + "\n"


def _fmt(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return f"{float(x):.12e}"


# ---------------------------------------------------------------------------
# Shared pipeline pieces
# ---------------------------------------------------------------------------

def _grid_points(cfg, n=None):
    (ua, ub), (va, vb) = cfg.domain
    nu, nv = (n, n) if n else cfg.grid
    U, V = np.meshgrid(np.linspace(ua, ub, nu), np.linspace(va, vb, nv), indexing="ij")
    return np.stack([U.ravel(), V.ravel()], 1)


def _curves(cfg):
    return singular_set(cfg.metric, cfg.domain, cfg.grid)


def _surface(cfg):
    if cfg.preset is not None and cfg.preset.data is not None:
        return cfg.preset.surface(grid=(cfg.domain[0], cfg.domain[1], cfg.grid))
    from .kenmotsu import construct_surface  # noqa: PLC0415

    (ua, ub), (va, vb) = cfg.domain
    return construct_surface(cfg.data, cfg.base_point, cfg.base_value, ((ua, ub), (va, vb), cfg.grid),
                             check=False)


def special_points(m: MetricData, domain, grid, curves):
    """Points where the singular set stops being a regular curve of A_2 points.

    Returns (point, kind) pairs: 'critical' where grad lam vanishes (found by
    Newton on grad lam from local minima of |lam|), 'psi_zero' where psi
    changes sign along a curve.
    """
    (ua, ub), (va, vb) = domain
    nu, nv = grid
    hu, hv = (ub - ua) / (nu - 1), (vb - va) / (nv - 1)
    U, V = np.meshgrid(np.linspace(ua, ub, nu), np.linspace(va, vb, nv), indexing="ij")
    L = np.abs(np.broadcast_to(m.lam(U, V), U.shape))
    found = []

    def add(q, kind):
        for p, _ in found:
            if np.hypot(*(p - q)) < 1e-6:
                return
        found.append((q, kind))

    pad = np.pad(L, 1, constant_values=np.inf)
    nb = np.stack([pad[1 + di:1 + di + nu, 1 + dj:1 + dj + nv]
                   for di in (-1, 0, 1) for dj in (-1, 0, 1) if di or dj])
    cand = np.argwhere(L <= nb.min(axis=0))
    for i, j in cand:
        q = np.array([U[i, j], V[i, j]])
        for _ in range(30):
            jet = m.lam.taylor(q[0], q[1], 2)
            g, Hs = gradient(jet), hessian(jet)
            if abs(np.linalg.det(Hs)) < 1e-14:
                break
            step = np.linalg.solve(Hs, g)
            q = q - step
            if np.hypot(*step) < 1e-14:
                break
        if not (ua <= q[0] <= ub and va <= q[1] <= vb):
            continue
        if abs(q[0] - U[i, j]) > 2 * hu or abs(q[1] - V[i, j]) > 2 * hv:
            continue
        jet = m.lam.taylor(q[0], q[1], 1)
        if abs(float(jet.value)) < 1e-10 and np.hypot(*gradient(jet)) < 1e-8:
            add(q, "critical")
    for c in curves:
        for k in range(len(c) - 1):
            a, b = c.psi[k], c.psi[k + 1]
            if a == 0.0:
                add(c.points[k].copy(), "psi_zero")
            elif a * b < 0:
                q = _refine_psi_zero(m, c.points[k], c.points[k + 1], c.eta[k])
                if q is not None:
                    add(q, "psi_zero")
    found.sort(key=lambda x: (round(x[0][0], 9), round(x[0][1], 9)))
    return found


def _project(m, q):
    for _ in range(50):
        jet = m.lam.taylor(q[0], q[1], 1)
        g = gradient(jet)
        gg = float(g @ g)
        if gg == 0.0:
            return None
        step = float(jet.value) * g / gg
        q = q - step
        if np.hypot(*step) < 1e-15:
            break
    return q


def _psi_at(m, q, eta_ref):
    E, F, G = (float(f(q[0], q[1])) for f in (m.E, m.F, m.G))
    w, vecs = np.linalg.eigh(np.array([[E, F], [F, G]]))
    eta = vecs[:, 0] if vecs[:, 0] @ eta_ref >= 0 else -vecs[:, 0]
    g = gradient(m.lam.taylor(q[0], q[1], 1))
    t = np.array([g[1], -g[0]]) / np.hypot(*g)
    return t[0] * eta[1] - t[1] * eta[0]


def _refine_psi_zero(m, a, b, eta_ref):
    from scipy.optimize import brentq  # noqa: PLC0415

    def fn(s):
        q = _project(m, a + s * (b - a))
        return _psi_at(m, q, eta_ref)

    try:
        s = brentq(fn, 0.0, 1.0, xtol=1e-14)
    except ValueError:
        return None
    return _project(m, a + s * (b - a))


def _curve_samples(cfg, curves, specials):
    (ua, ub), (va, vb) = cfg.domain
    h = 2.5 * max((ub - ua) / (cfg.grid[0] - 1), (vb - va) / (cfg.grid[1] - 1))
    rows = []
    for ci, c in enumerate(curves):
        idx = np.arange(len(c))
        if cfg.max_rows and len(idx) > cfg.max_rows:
            idx = np.unique(np.linspace(0, len(c) - 1, cfg.max_rows).round().astype(int))
        for k in idx:
            q = c.points[k]
            if any(np.hypot(*(q - p)) < h for p, _ in specials):
                continue
            rows.append((ci, float(c.t[k]), q, c.eta[k]))
    return rows


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_check(cfg):
    t = cfg.tols
    report = {"input": cfg.label, "checks": {}}
    checks = report["checks"]

    def run(name, fn):
        try:
            checks[name] = fn()
        except Exception as e:  # noqa: BLE001 - any failure is reported, not raised
            checks[name] = {"passed": False, "error": f"{type(e).__name__}: {e}"}

    pts = _grid_points(cfg)
    run("frontal", lambda: check_frontal(cfg.metric, pts, t["frontal"]).to_dict())
    curves = []

    def admissible():
        # the conditions are coordinate dependent: accept user coordinates or the u<->v swap
        curves.extend(_curves(cfg))
        rep = check_admissible(cfg.metric, curves, t["admissible"]).to_dict()
        rep["coordinates"] = "user"
        if not rep["passed"]:
            sw = cfg.metric.swapped()
            swc = singular_set(sw, cfg.domain[::-1], cfg.grid[::-1])
            alt = check_admissible(sw, swc, t["admissible"]).to_dict()
            if alt["passed"]:
                alt["coordinates"] = "swapped"
                alt["user_coordinates"] = rep
                rep = alt
        return rep

    run("admissible", admissible)
    if cfg.data is not None:
        def integ():
            res, wscale, hmin = probe_integrability(cfg.data, *cfg.domain)
            lim = t["integrability"] * (1.0 + wscale)
            return {"passed": bool(res < lim and hmin > 0), "max_residual": res,
                    "threshold": lim, "min_abs_Hhat": hmin}

        run("integrability", integ)
        run("front_pair_data", lambda: cfg.data.validate(pts[:: max(1, len(pts) // 400)]).to_dict())

        def front_pair():
            bad, n = [], 0
            for c in curves:
                for k in range(0, len(c), max(1, len(c) // 20)):
                    n += 1
                    if not check_front_pair(cfg.data, c.points[k], c.eta[k], t["front_pair"]):
                        bad.append(c.points[k])
            return {"passed": not bad, "samples": n, "failures": bad}

        run("front_pair", front_pair)

        def limits():
            out = []
            for c in curves:
                r = hhat_limit_check(cfg.data, c.points[len(c) // 2])
                out.append({"point": c.points[len(c) // 2], **r.to_dict()})
            return {"passed": all(o["passed"] for o in out), "curves": out}

        run("hhat_limit", limits)
    ok = all(bool(c.get("passed")) for c in checks.values())
    report["passed"] = ok
    return (0 if ok else 1), report


def _write_obj(path, verts, faces):
    buf = io.StringIO()
    for x, y, z in verts:
        buf.write(f"v {x:.9g} {y:.9g} {z:.9g}\n")
    for a, b, c in faces:
        buf.write(f"f {a} {b} {c}\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def _write_polyline(path, lines):
    buf = io.StringIO()
    offset = 0
    for k, pts in enumerate(lines):
        buf.write(f"o singular_curve_{k}\n")
        for x, y, z in pts:
            buf.write(f"v {x:.9g} {y:.9g} {z:.9g}\n")
        buf.write("l " + " ".join(str(offset + i + 1) for i in range(len(pts))) + "\n")
        offset += len(pts)
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def grid_faces(nu, nv):
    idx = np.arange(nu * nv).reshape(nu, nv) + 1
    a, b = idx[:-1, :-1].ravel(), idx[1:, :-1].ravel()
    c, d = idx[1:, 1:].ravel(), idx[:-1, 1:].ravel()
    return np.concatenate([np.stack([a, b, c], 1), np.stack([a, c, d], 1)])


def cmd_build(cfg):
    if cfg.data is None:
        raise ConfigError(f"input {cfg.label!r} has no front-pair data to build from")
    res, wscale, hmin = probe_integrability(cfg.data, *cfg.domain)
    if res >= cfg.tols["integrability"] * (1.0 + wscale) or hmin == 0:
        return 1, {"input": cfg.label, "passed": False,
                   "error": f"integrability residual {res:.3e} exceeds tolerance"}
    s = _surface(cfg)
    nu, nv = len(s.uu), len(s.vv)
    verts = s.values.reshape(-1, 3)
    summary = {"input": cfg.label, "grid": [nu, nv], "vertices": nu * nv,
               "faces": 2 * (nu - 1) * (nv - 1),
               "bbox_min": verts.min(axis=0), "bbox_max": verts.max(axis=0)}
    if cfg.preset is not None and cfg.preset.front is not None:
        U, V = np.meshgrid(s.uu, s.vv, indexing="ij")
        ref = np.moveaxis(cfg.preset.front(U, V), 0, -1)
        summary["max_closed_form_deviation"] = float(np.max(np.abs(s.values - ref)))
    curves = _curves(cfg)
    lines = [s.f_at(c.points[:, 0], c.points[:, 1]).T for c in curves]
    summary["singular_curves"] = [{"points": len(c), "image_bbox_min": ln.min(axis=0),
                                   "image_bbox_max": ln.max(axis=0)} for c, ln in zip(curves, lines)]
    if "obj" in cfg.outputs:
        _write_obj(cfg.outputs["obj"], verts, grid_faces(nu, nv))
        poly = cfg.outputs.get("polyline") or cfg.outputs["obj"].with_name(
            cfg.outputs["obj"].stem + "_singular.obj")
        _write_polyline(poly, lines)
        summary["obj"] = str(cfg.outputs["obj"])
        summary["polyline"] = str(poly)
    summary["passed"] = True
    return 0, summary


def _classify_point(cfg, s, q):
    entry = {"point": q}
    try:
        mc = classify_metric_point(cfg.metric, q)
    except UnsupportedSingularity as e:
        entry.update(metric_label="Unsupported", error=str(e))
        return entry, False
    entry["metric_label"] = mc.tag
    entry["metric_diagnostics"] = {k: v for k, v in mc.diagnostics.items() if k != "tangent"}
    if s is not None:
        try:
            fc = classify_front_singularity(s, q)
            entry["front_label"] = fc.tag
            entry["front_diagnostics"] = fc.diagnostics
            entry["agree"] = fc.tag == expected_front_tag(mc)
        except (UnsupportedSingularity, NotSingularError) as e:
            entry.update(front_label="Unsupported", error=str(e), agree=False)
    return entry, entry.get("agree", True)


def cmd_classify(cfg):
    curves = _curves(cfg)
    specials = special_points(cfg.metric, cfg.domain, cfg.grid, curves)
    s = _surface(cfg) if cfg.data is not None else None
    points, ok = [], True
    for q, kind in specials:
        entry, good = _classify_point(cfg, s, q)
        entry["source"] = kind
        points.append(entry)
        ok &= good
    for ci, t, q, _ in _curve_samples(cfg, curves, specials):
        entry, good = _classify_point(cfg, s, q)
        entry.update(source="curve", curve=ci, t=t)
        points.append(entry)
        ok &= good
    counts = {}
    for e in points:
        key = e.get("front_label", e["metric_label"])
        counts[key] = counts.get(key, 0) + 1
    return (0 if ok else 1), {"input": cfg.label, "passed": bool(ok), "points": points,
                              "label_counts": dict(sorted(counts.items()))}


CSV_COLUMNS = ["curve", "t", "u", "v",
               "kappa_s_direct", "kappa_s_closed", "kappa_nu_direct", "kappa_nu_closed",
               "kappa_t_direct", "kappa_t_closed", "kappa_c_direct", "kappa_c_closed",
               "line_flag", "plane_flag",
               "mu_c_direct", "mu_c_closed", "tau_s_direct", "tau_s_closed"]


def _rel(a, b):
    return abs(a - b) / (1.0 + max(abs(a), abs(b)))


def cmd_invariants(cfg):
    if cfg.data is None:
        raise ConfigError(f"input {cfg.label!r} has no front-pair data")
    curves = _curves(cfg)
    specials = special_points(cfg.metric, cfg.domain, cfg.grid, curves)
    s = _surface(cfg)
    rows, worst, errors = [], {"edge": 0.0, "swallowtail": 0.0}, []
    for q, kind in specials:
        row = dict.fromkeys(CSV_COLUMNS)
        row.update(curve=-1, t=None, u=q[0], v=q[1])
        try:
            chart = adapt_chart(cfg.data, q)
            if not chart.strongly_adapted:
                a = swallowtail_invariants_direct(s, q, chart)
                b = swallowtail_invariants_closed(cfg.data, q, chart)
                row.update(mu_c_direct=a.mu_c, mu_c_closed=b.mu_c, tau_s_direct=a.tau_s,
                           tau_s_closed=b.tau_s)
                worst["swallowtail"] = max(worst["swallowtail"], _rel(a.mu_c, b.mu_c), _rel(a.tau_s, b.tau_s))
        except InvariantError as e:
            errors.append({"point": q, "error": str(e)})
        rows.append(row)
    for ci, t, q, _ in _curve_samples(cfg, curves, specials):
        row = dict.fromkeys(CSV_COLUMNS)
        row.update(curve=ci, t=t, u=q[0], v=q[1])
        try:
            chart = adapt_chart(cfg.data, q)
            if chart.strongly_adapted:
                a = edge_invariants_direct(s, q, chart)
                b = edge_invariants_closed(cfg.data, q, chart, s)
                for name, x, y in zip(("kappa_s", "kappa_nu", "kappa_t", "kappa_c"), a.as_tuple(), b.as_tuple()):
                    row[f"{name}_direct"], row[f"{name}_closed"] = x, y
                    worst["edge"] = max(worst["edge"], _rel(x, y))
                row["line_flag"] = line_criterion(cfg.data, s, [q])[0]
                row["plane_flag"] = plane_criterion(cfg.data, s, [q])[0].planar
        except InvariantError as e:
            errors.append({"point": q, "error": str(e)})
        rows.append(row)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r["curve"]] + [_fmt(r[c]) for c in CSV_COLUMNS[1:]])
    text = buf.getvalue()
    if "csv" in cfg.outputs:
        Path(cfg.outputs["csv"]).write_text(text, encoding="utf-8")
    ok = worst["edge"] < cfg.tols["routes"] and worst["swallowtail"] < cfg.tols["routes_swallowtail"]
    return (0 if ok else 1), {"input": cfg.label, "passed": bool(ok), "rows": len(rows),
                              "max_route_disagreement": worst, "errors": errors, "csv": text}


COMMANDS = {"check": cmd_check, "build": cmd_build, "classify": cmd_classify, "invariants": cmd_invariants}


def build_parser():
    p = argparse.ArgumentParser(prog="front-forge", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", type=Path, help="INI job file")
    p.add_argument("--preset", help="preset name (overrides [input])")
    p.add_argument("--tol", type=float, help="override the check tolerances")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.config is None and args.preset is None:
        print("front-forge: error: one of --config or --preset is required", file=sys.stderr)
        return 2
    try:
        cfg = load_config(args.config, args.preset, args.tol)
    except ConfigError as e:
        print(f"front-forge: error: {e}", file=sys.stderr)
        return 2
    try:
        code, report = COMMANDS[args.command](cfg)
    except ConfigError as e:
        print(f"front-forge: error: {e}", file=sys.stderr)
        return 2
    except (IntegrabilityError, FrontPairError, expr.ExprError) as e:
        code, report = 1, {"input": cfg.label, "passed": False, "error": f"{type(e).__name__}: {e}"}
    csv_text = report.pop("csv", None)
    text = dumps(report)
    if "json" in cfg.outputs:
        Path(cfg.outputs["json"]).write_text(text, encoding="utf-8")
    sys.stdout.write(csv_text if csv_text is not None and "csv" not in cfg.outputs else text)
    return code


if __name__ == "__main__":
    sys.exit(main())

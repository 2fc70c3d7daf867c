"""Translation-type fronts with H = -1/sin u, exported as OBJ meshes.

Two ranges are built: u in [-4, 4] with l = sin(u)/2, and u in [0, 10 pi]
with l = 11 sin(u)/10. Both have closed forms, so the construction error is
printed next to each file. Pass an output directory as the first argument
(default: the current directory).
"""
import sys
from pathlib import Path

import numpy as np

from frontforge import presets
from frontforge.cli import _write_obj, _write_polyline, grid_faces
from frontforge.metric import singular_set

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)

for p in (presets.translation_example(), presets.translation_example_wide()):
    s = p.surface()
    U, V = np.meshgrid(s.uu, s.vv, indexing="ij")
    ref = np.moveaxis(p.front(U, V), 0, -1)
    print(f"{p.name}: grid {p.grid}, max |f - closed form| = {np.max(np.abs(s.values - ref)):.2e}")
    _write_obj(out / f"{p.name}.obj", s.values.reshape(-1, 3), grid_faces(*p.grid))
    # lambda = l(u) vanishes where sin u = 0, so S(g) is a set of lines u = const
    curves = singular_set(p.metric, p.domain, p.grid)
    lines = [s.f_at(c.points[:, 0], c.points[:, 1]).T for c in curves]
    _write_polyline(out / f"{p.name}_singular.obj", lines)
    print(f"  {len(curves)} singular lines at u =", np.round([c.points[0, 0] for c in curves], 6))

"""Invariants at the swallowtail point and along its cuspidal edges.

At the A_3 point the singular direction is tangent to the singular curve, so
the edge invariants do not apply; mu_c and tau_s take over.
"""
import numpy as np

from frontforge import presets
from frontforge.invariants import (InvariantError, adapt_chart, edge_invariants_direct,
                                   swallowtail_invariants_closed, swallowtail_invariants_direct)
from frontforge.metric import singular_set

p = presets.swallowtail()
s = p.surface()

chart = adapt_chart(p.data, (0.0, 0.0))
print("chart at the origin is strongly adapted:", chart.strongly_adapted)
d = swallowtail_invariants_direct(s, (0.0, 0.0), chart)
c = swallowtail_invariants_closed(p.data, (0.0, 0.0), chart)
print(f"mu_c : {d.mu_c:.12f} (front)  {c.mu_c:.12f} (data)")
print(f"tau_s: {d.tau_s:.12f} (front)  {c.tau_s:.12f} (data)   2/sqrt 3 = {2 / np.sqrt(3):.12f}")

try:
    edge_invariants_direct(s, (0.0, 0.0))
except InvariantError as e:
    print("edge invariants at the swallowtail point:", e)

# Along the fold curve u = -6 v^2 the points are cuspidal edges again.
curve = singular_set(p.metric, p.domain, p.grid)[0]
for q in curve.points[::10]:
    if np.hypot(*q) < 0.05:
        continue
    inv = edge_invariants_direct(s, q)
    print(f"u={q[0]:+.4f} v={q[1]:+.4f}  kappa_s={inv.kappa_s:+.5f} kappa_c={inv.kappa_c:+.5f}")

"""Build the rotationally symmetric cosh front from its first fundamental form.

The input is pure data: E, F, G, lambda, a unit normal nu and the regularized
mean curvature Hhat. The surface comes out of a line integral, and we then
look at what happens on the singular curve v = 0.
"""
import numpy as np

from frontforge import presets
from frontforge.invariants import adapt_chart, edge_invariants_closed, edge_invariants_direct
from frontforge.metric import check_frontal, classify_metric_point, singular_set
from frontforge.surface import classify_front_singularity, mean_curvature

p = presets.cosh_example()
m = p.metric

# The data define a frontal metric: EG - F^2 = lambda^2 everywhere.
pts = np.random.default_rng(0).uniform((-3, -0.4), (3, 0.4), (500, 2))
print("frontal:", check_frontal(m, pts).passed)

# lambda = sinh v / cosh^2 v vanishes on one curve.
curves = singular_set(m, p.domain, p.grid)
print("singular curves:", len(curves), "max |v| on it:", np.abs(curves[0].points[:, 1]).max())

s = p.surface()
print("f(0, 0) =", s.f_at(0.0, 0.0).ravel())

# Away from v = 0 the front really has the prescribed mean curvature.
for v in (0.1, 0.3):
    H = -(-3 + np.cosh(2 * v)) / (2 * np.sinh(v))
    print(f"H_f(1, {v}) = {mean_curvature(s, (1.0, v)):.12f}   H = {H:.12f}")

# The image of v = 0 is a circle of radius 1/2 made of cuspidal edges.
ring = s.f_at(curves[0].points[:, 0], curves[0].points[:, 1]).T
print("max | |f(u,0) - (-1/2, 0, 0)| - 1/2 |:", np.abs(np.linalg.norm(ring - [-0.5, 0, 0], axis=1) - 0.5).max())
print("metric label:", classify_metric_point(m, (0.5, 0.0)).tag,
      " front label:", classify_front_singularity(s, (0.5, 0.0)).tag)

# Edge invariants: once from the front itself, once from the data only.
chart = adapt_chart(p.data, (0.5, 0.0))
print("direct:", np.round(edge_invariants_direct(s, (0.5, 0.0), chart).as_tuple(), 9))
print("closed:", np.round(edge_invariants_closed(p.data, (0.5, 0.0), chart, s).as_tuple(), 9))
print("expected: kappa_s = 2, kappa_nu = 0, kappa_t = 0, kappa_c = 2 sqrt 2 =", 2 * np.sqrt(2))

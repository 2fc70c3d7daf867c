"""Classify the normal-form fronts twice: from the metric and from the surface.

The metric side looks at the jets of lambda and of the null vector field;
the front side looks at the identifier det(f_u, f_v, nu). They should agree.
"""
from frontforge import presets
from frontforge.metric import UnsupportedSingularity, classify_metric_point
from frontforge.surface import classify_front_singularity, expected_front_tag

for p in presets.normal_form_fronts() + [presets.generic_edge()]:
    mc = classify_metric_point(p.metric, (0.0, 0.0))
    fc = classify_front_singularity(p.surface(), (0.0, 0.0))
    print(f"{p.name:14s} metric {mc.tag:10s} -> expects {expected_front_tag(mc):14s} front {fc.tag}")

# Beaks and lips share the Morse-type metric label; the front sees the sign of the Hessian.
for name in ("lips", "beaks"):
    fc = classify_front_singularity(presets.get(name).surface(), (0.0, 0.0))
    print(f"{name}: identifier Hessian determinant {fc.diagnostics['hess_det']:+.3f}")

try:
    classify_metric_point(presets.corank2_metric().metric, (0.0, 0.0))
except UnsupportedSingularity as e:
    print("corank 2:", e)

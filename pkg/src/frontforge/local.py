"""Local analysis around a point: zero-curve jets, kernel directions, vanishing orders.

Shared by the metric-side and front-side classifiers and by chart
adaptation. Every routine works on jets centred at the point of interest,
so derivatives along curves are exact polynomial algebra.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import Jet


@dataclass(frozen=True)
class CurveJet:
    """Zero curve of a function through p, as displacement jets in the parameter s.

    ``du``, ``dv`` have zero constant term; ``tangent`` and ``normal`` are the
    unit vectors at p with det(tangent, normal) = 1 and normal = grad / |grad|.
    """

    du: Jet
    dv: Jet
    tangent: np.ndarray
    normal: np.ndarray
    grad_norm: float

    def reversed(self):
        s = Jet.variable(0, self.du.order)
        minus = -s
        return CurveJet(self.du.compose(minus, Jet.variable(1, self.du.order)),
                        self.dv.compose(minus, Jet.variable(1, self.dv.order)),
                        -self.tangent, self.normal, self.grad_norm)


def gradient(jet):
    return np.array([float(jet.coef(1, 0)), float(jet.coef(0, 1))])


def hessian(jet):
    return np.array([[2.0 * jet.coef(2, 0), jet.coef(1, 1)],
                     [jet.coef(1, 1), 2.0 * jet.coef(0, 2)]], dtype=float)


def implicit_curve_jet(lam: Jet) -> CurveJet:
    """Parametrize {lam = 0} near the centre as p + s*t + h(s)*n.

    ``lam`` must vanish at the centre with nonzero gradient. The correction
    h is found by a fixed-slope Newton iteration on power series, which
    gains at least one order per sweep.
    """
    N = lam.order
    g = gradient(lam)
    gn = float(np.hypot(*g))
    if gn == 0.0:
        raise ValueError("zero gradient: the zero set is not a smooth curve here")
    n = g / gn
    t = np.array([n[1], -n[0]])
    s = Jet.variable(0, N)
    h = Jet.constant(0.0, N)
    for _ in range(N + 1):
        du = s * t[0] + h * n[0]
        dv = s * t[1] + h * n[1]
        r = lam.compose(du, dv)
        h = h - r / gn
        h.c[0] = 0.0
    return CurveJet(s * t[0] + h * n[0], s * t[1] + h * n[1], t, n, gn)


def kernel_jet(E, F, G, prefer=None):
    """Kernel direction of [[E, F], [F, G]] as a pair of jets.

    Uses (-F, E) when |E| >= |G| at the centre, else (G, -F); both span the
    kernel wherever EG - F^2 = 0. Rescaled to unit length at the centre.
    ``prefer`` (a 2-vector) fixes the orientation at the centre.
    """
    if abs(float(E.value)) >= abs(float(G.value)):
        a, b = -F, E
    else:
        a, b = G, -F
    n0 = float(np.hypot(a.value, b.value))
    if n0 == 0.0:
        raise ValueError("metric vanishes identically at this point (corank 2)")
    sgn = 1.0
    if prefer is not None and a.value * prefer[0] + b.value * prefer[1] < 0:
        sgn = -1.0
    return a * (sgn / n0), b * (sgn / n0)


def first_nonvanishing(coefs, tol):
    """Index of the first entry with |c| > tol, or None."""
    for j, c in enumerate(coefs):
        if abs(c) > tol:
            return j
    return None


def kernel_vector(mat, tol):
    """Corank and unit kernel vector of a symmetric positive semi-definite 2x2 matrix."""
    w, vecs = np.linalg.eigh(mat)
    small, large = w[0], w[1]
    if large <= tol:
        return 2, None
    if abs(small) > tol:
        return 0, None
    return 1, vecs[:, 0]

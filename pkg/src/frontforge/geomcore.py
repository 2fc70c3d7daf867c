"""Small numerical kernel: 3-vector algebra, grid stencils, quadrature.

Vectors are *component-first*: anything indexable as ``a[0], a[1], a[2]``
works, so the same helpers serve plain numpy vectors, stacked arrays of
shape ``(3, ...)``, tuples of expression nodes and tuples of jets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def det3(a, b, c):
    """Determinant of the 3x3 matrix with columns a, b, c, i.e. <a, b x c>."""
    return dot(a, cross(b, c))


def vec(a):
    """Stack a component tuple into an array of shape (3, ...)."""
    return np.stack([np.asarray(x, dtype=float) for x in np.broadcast_arrays(*a)])


def norm(a):
    return np.sqrt(dot(a, a))


def scale(s, a):
    return (s * a[0], s * a[1], s * a[2])


def vadd(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


# ---------------------------------------------------------------------------
# Grid-backed fields
# ---------------------------------------------------------------------------

# central stencils: (offsets, weights) for derivative order 1..3
_STENCILS = {
    1: (np.array([-2, -1, 0, 1, 2]), np.array([1, -8, 0, 8, -1]) / 12.0),
    2: (np.array([-2, -1, 0, 1, 2]), np.array([-1, 16, -30, 16, -1]) / 12.0),
    3: (np.array([-2, -1, 0, 1, 2]), np.array([-1, 2, 0, -2, 1]) / 2.0),
}


class StencilRangeError(ValueError):
    pass


@dataclass(frozen=True)
class GridField:
    """Samples of a scalar (or vector) field on a uniform (u, v) grid.

    ``values`` has shape ``(n_u, n_v)`` or ``(n_u, n_v, k)``; node ``(i, j)``
    sits at ``(u0 + i*hu, v0 + j*hv)``.
    """

    values: np.ndarray
    u0: float
    v0: float
    hu: float
    hv: float

    @classmethod
    def sample(cls, fn, u_range, v_range, hu, hv):
        nu = int(round((u_range[1] - u_range[0]) / hu)) + 1
        nv = int(round((v_range[1] - v_range[0]) / hv)) + 1
        uu = u_range[0] + hu * np.arange(nu)
        vv = v_range[0] + hv * np.arange(nv)
        U, V = np.meshgrid(uu, vv, indexing="ij")
        return cls(np.asarray(fn(U, V), dtype=float), u_range[0], v_range[0], hu, hv)

    def node(self, point):
        i = (point[0] - self.u0) / self.hu
        j = (point[1] - self.v0) / self.hv
        ii, jj = int(round(i)), int(round(j))
        if abs(i - ii) > 1e-6 or abs(j - jj) > 1e-6:
            raise ValueError(f"point {tuple(point)} is not a grid node")
        return ii, jj


@lru_cache(maxsize=None)
def central_weights(order, accuracy):
    """Central stencil (offsets, weights) for d^order/dx^order with error O(h^accuracy)."""
    if accuracy % 2:
        raise ValueError("accuracy must be even")
    half = (order - 1) // 2 + accuracy // 2
    offsets = np.arange(-half, half + 1)
    A = np.vander(offsets.astype(float), increasing=True).T
    rhs = np.zeros(len(offsets))
    rhs[order] = math.factorial(order)
    return offsets, np.linalg.solve(A, rhs)


def fd_partial(field: GridField, point, var, order, accuracy=None):
    """Central-difference partial derivative at a grid node.

    Default stencils are fourth order for derivative orders 1 and 2 and
    second order for order 3; ``accuracy`` requests a wider stencil.
    """
    if order not in _STENCILS:
        raise ValueError("order must be 1, 2 or 3")
    offsets, weights = _STENCILS[order] if accuracy is None else central_weights(order, accuracy)
    i, j = field.node(point)
    axis = 0 if var == "u" else 1
    h = field.hu if axis == 0 else field.hv
    n = field.values.shape[axis]
    idx = (i, j)[axis]
    if idx + offsets.min() < 0 or idx + offsets.max() >= n:
        raise StencilRangeError(f"stencil of order {order} leaves the grid at {tuple(point)}")
    if axis == 0:
        samples = field.values[i + offsets, j]
    else:
        samples = field.values[i, j + offsets]
    return np.tensordot(weights, samples, axes=(0, 0)) / h**order


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _gl_rule(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _adaptive_gl(fun, a, b, tol, n=10, max_depth=40):
    """Integrate fun over many intervals [a_k, b_k] at once.

    ``fun(x, idx)`` receives nodes ``x`` of shape (m, n) together with the
    index (m,) of the originating interval and returns values of shape
    (c, m, n). Each interval is bisected until the one-level estimate
    |I(whole) - I(halves)| drops below its share of ``tol``.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    xg, wg = _gl_rule(n)
    total = None
    idx = np.arange(len(a))
    lo, hi, tl = a.copy(), b.copy(), np.full(len(a), float(tol))

    def rule(lo, hi, idx):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = mid[:, None] + half[:, None] * xg[None, :]
        y = np.asarray(fun(x, idx), dtype=float)
        if not np.all(np.isfinite(y)):
            raise FloatingPointError("non-finite integrand sample")
        return np.einsum("cmn,n->cm", y, wg) * half[None, :]

    for _ in range(max_depth):
        if len(lo) == 0:
            break
        mid = 0.5 * (lo + hi)
        whole = rule(lo, hi, idx)
        halves = rule(np.concatenate([lo, mid]), np.concatenate([mid, hi]), np.concatenate([idx, idx]))
        m = len(lo)
        fine = halves[:, :m] + halves[:, m:]
        if total is None:
            total = np.zeros((whole.shape[0], len(a)))
        err = np.max(np.abs(fine - whole), axis=0)
        ok = err < tl
        np.add.at(total.T, idx[ok], fine[:, ok].T)
        keep = ~ok
        lo, hi, idx, tl = (
            np.concatenate([lo[keep], mid[keep]]),
            np.concatenate([mid[keep], hi[keep]]),
            np.concatenate([idx[keep], idx[keep]]),
            np.concatenate([tl[keep], tl[keep]]) * 0.5,
        )
    else:
        raise RuntimeError("adaptive quadrature did not converge")
    if total is None:
        total = np.zeros((1, len(a)))
    return total


def gauss_legendre_integral(g, a, b, tol=1e-12, n=10):
    """Integrals of a scalar function over intervals [a_k, b_k]."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.size == 0:
        return np.zeros(0)

    def fun(x, idx):
        return np.asarray(g(x), dtype=float)[None]

    return _adaptive_gl(fun, a, b, tol, n)[0]


@dataclass(frozen=True)
class PlanarPath:
    """Piecewise-linear path in the (u, v) domain."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("path points must have shape (n, 2)")
        if len(pts) > 1 and np.any(np.all(np.diff(pts, axis=0) == 0, axis=1)):
            raise ValueError("consecutive path points must be distinct")
        object.__setattr__(self, "points", pts)

    @classmethod
    def through(cls, *points):
        pts = [np.asarray(points[0], dtype=float)]
        for p in points[1:]:
            p = np.asarray(p, dtype=float)
            if not np.array_equal(p, pts[-1]):
                pts.append(p)
        return cls(np.array(pts))

    @classmethod
    def l_path(cls, start, end, first="u"):
        """Axis-aligned path moving along ``first`` then along the other variable."""
        start = np.asarray(start, dtype=float)
        end = np.asarray(end, dtype=float)
        corner = np.array([end[0], start[1]]) if first == "u" else np.array([start[0], end[1]])
        return cls.through(start, corner, end)


def line_integral(one_form, path: PlanarPath, tol=1e-10, n=10):
    """Integrate the vector-valued 1-form omega_u du + omega_v dv along ``path``.

    ``one_form(u, v)`` returns ``(omega_u, omega_v)``, each of shape (3, ...).
    """
    pts = path.points
    if len(pts) < 2:
        return np.zeros(3)
    start, delta = pts[:-1], np.diff(pts, axis=0)

    def fun(s, idx):
        uu = start[idx, 0][:, None] + s * delta[idx, 0][:, None]
        vv = start[idx, 1][:, None] + s * delta[idx, 1][:, None]
        wu, wv = one_form(uu, vv)
        return (np.asarray(wu) * delta[idx, 0][None, :, None]
                + np.asarray(wv) * delta[idx, 1][None, :, None])

    seg = _adaptive_gl(fun, np.zeros(len(start)), np.ones(len(start)), tol, n)
    return seg.sum(axis=1)


def segment_integrals(one_form, starts, ends, tol=1e-10, n=10):
    """Integrals of the 1-form over many independent straight segments, shape (m, 3)."""
    starts = np.asarray(starts, dtype=float)
    ends = np.asarray(ends, dtype=float)
    if len(starts) == 0:
        return np.zeros((0, 3))
    delta = ends - starts

    def fun(s, idx):
        uu = starts[idx, 0][:, None] + s * delta[idx, 0][:, None]
        vv = starts[idx, 1][:, None] + s * delta[idx, 1][:, None]
        wu, wv = one_form(uu, vv)
        return (np.asarray(wu) * delta[idx, 0][None, :, None]
                + np.asarray(wv) * delta[idx, 1][None, :, None])

    return _adaptive_gl(fun, np.zeros(len(starts)), np.ones(len(starts)), tol, n).T

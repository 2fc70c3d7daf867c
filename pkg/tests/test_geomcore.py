import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from frontforge.expr import differentiate, evaluate, parse
from frontforge.geomcore import (GridField, PlanarPath, StencilRangeError, central_weights, cross, det3, dot,
                                 fd_partial, gauss_legendre_integral, line_integral, norm)
from frontforge.kenmotsu import KenmotsuOneForm

vec3 = arrays(np.float64, 3, elements=st.floats(-10, 10))
E1, E2, E3 = np.eye(3)


def test_det3_identity_and_repeated_column():
    assert det3(E1, E2, E3) == 1.0
    a, b = np.array([1.0, 2, 3]), np.array([-1.0, 0.5, 2])
    assert det3(a, a, b) == 0.0


def test_det3_of_cosh_gauss_map_frame():
    u = np.linspace(0, 2 * np.pi, 17)
    z, c, s = np.zeros_like(u), np.cos(u), np.sin(u)
    vals = det3((z, z, z + 1), (c, s, z), (-s, c, z))
    np.testing.assert_allclose(vals, 1.0, atol=1e-15)


@settings(max_examples=200)
@given(vec3, vec3)
def test_lagrange_identity(a, b):
    lhs = dot(cross(a, b), cross(a, b))
    rhs = dot(a, a) * dot(b, b) - dot(a, b) ** 2
    assert abs(lhs - rhs) <= 1e-12 * (1 + dot(a, a) * dot(b, b))


@settings(max_examples=200)
@given(vec3, vec3, vec3, vec3, st.floats(-3, 3))
def test_det3_antisymmetry_and_linearity(a, b, c, d, t):
    scale = 1 + norm(a) * norm(b) * (norm(c) + norm(d))
    assert abs(det3(a, b, c) + det3(b, a, c)) <= 1e-12 * scale
    assert abs(det3(a, b, c) + det3(a, c, b)) <= 1e-12 * scale
    lhs = det3(a, b, c + t * d)
    rhs = det3(a, b, c) + t * det3(a, b, d)
    assert abs(lhs - rhs) <= 1e-12 * scale * (1 + abs(t))


def test_fd_polynomial_exactness():
    g = GridField.sample(lambda U, V: V**2, (0.0, 0.2), (0.0, 0.2), 1e-2, 1e-2)
    assert fd_partial(g, (0.1, 0.1), "v", 1) == pytest.approx(0.2, abs=1e-8)


def test_fd_u_constant_grid():
    g = GridField.sample(lambda U, V: np.sin(V) + 0 * U, (0.0, 1.0), (0.0, 1.0), 0.05, 0.05)
    assert abs(fd_partial(g, (0.5, 0.5), "u", 1)) < 1e-14


def test_fd_second_derivative_matches_symbolic():
    node = parse("sinh(v)/cosh(v)^2")
    g = GridField.sample(lambda U, V: evaluate(node, U, V), (-0.1, 0.1), (-0.1, 0.1), 1e-2, 1e-2)
    sym = evaluate(differentiate(differentiate(node, "v"), "v"), 0.0, 0.0)
    assert fd_partial(g, (0.0, 0.0), "v", 2) == pytest.approx(sym, abs=1e-6)


def test_fd_out_of_range():
    g = GridField.sample(lambda U, V: U + V, (0.0, 1.0), (0.0, 1.0), 0.1, 0.1)
    with pytest.raises(StencilRangeError):
        fd_partial(g, (0.1, 0.5), "u", 1)


def test_fd_vector_field():
    g = GridField.sample(lambda U, V: np.stack([U**2, U * V, V], -1), (0, 1), (0, 1), 0.1, 0.1)
    np.testing.assert_allclose(fd_partial(g, (0.5, 0.5), "u", 1), [1.0, 0.5, 0.0], atol=1e-12)


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("acc", [2, 4, 8])
def test_central_weights_moments(order, acc):
    off, w = central_weights(order, acc)
    for k in range(order + acc):
        want = math.factorial(order) if k == order else 0.0
        assert abs(np.sum(w * off.astype(float) ** k) - want) < 1e-9 * max(1, abs(off).max() ** k)


def test_default_stencils_are_the_documented_ones():
    o, w = central_weights(2, 4)
    np.testing.assert_allclose(w, np.array([-1, 16, -30, 16, -1]) / 12, atol=1e-13)


def test_gauss_legendre_integral():
    val = gauss_legendre_integral(np.sin, [0.0, 0.0], [np.pi, np.pi / 2])
    np.testing.assert_allclose(val, [2.0, 1.0], rtol=1e-12)
    assert gauss_legendre_integral(np.exp, 0.0, 1.0)[0] == pytest.approx(np.e - 1, rel=1e-13)


def test_line_integral_exact_form_route_independent():
    form = lambda u, v: (np.stack([v, 0 * v, 0 * v]), np.stack([u, 0 * u, 0 * u]))
    for path in (PlanarPath.through((0, 0), (1, 1)), PlanarPath.l_path((0, 0), (1, 1), "u"),
                 PlanarPath.l_path((0, 0), (1, 1), "v"), PlanarPath.through((0, 0), (2, -1), (1, 1))):
        np.testing.assert_allclose(line_integral(form, path), [1, 0, 0], atol=1e-12)


def test_line_integral_zero_length():
    form = lambda u, v: (np.stack([np.ones_like(u)] * 3), np.stack([np.ones_like(u)] * 3))
    np.testing.assert_array_equal(line_integral(form, PlanarPath.through((0.3, 0.3))), [0, 0, 0])


def test_line_integral_translation_form(translation):
    form = KenmotsuOneForm(translation.data)
    val = line_integral(form, PlanarPath.through((0.0, 0.0), (np.pi / 2, 0.0)))
    np.testing.assert_allclose(val, [0.25, np.pi / 8, 0.0], atol=1e-12)

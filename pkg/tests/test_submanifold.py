from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isl.errors import DimensionMismatch, InvalidParams, NotOnManifold, RankDeficient
from isl.numeric import max_abs
from isl.submanifold import (Polynomial, curve_point, frames_at, make_implicit, retract, sample_points,
                             split_vector)

H = np.sqrt(0.5)


def _frame_is_orthonormal(M, f):
    T, N = f.T, f.N
    J = np.atleast_2d(M.JF(f.x))
    return max(max_abs(T.T @ T - np.eye(M.n)), max_abs(N.T @ N - np.eye(M.r)), max_abs(T.T @ N),
               max_abs(J @ T))


def test_constraint_values_and_gradients():
    assert make_implicit("sphere", m=4, R=1.0).F(np.array([1.0, 0, 0, 0]))[0] == 0.0
    ps = make_implicit("product_spheres", p=2, r1=0.6, r2=0.8)
    assert max_abs(ps.F(np.array([0.6, 0, 0.8, 0]))) <= 1e-15
    assert np.array_equal(make_implicit("sphere", m=3, R=2.0).JF(np.array([2.0, 0, 0])), [[4, 0, 0]])


def test_sphere_frame_at_first_axis():
    f = frames_at(make_implicit("sphere", m=4, R=1.0), [1, 0, 0, 0])
    assert np.array_equal(f.N[:, 0], [1, 0, 0, 0])
    assert np.allclose(f.T, np.eye(4)[:, 1:])


def test_circle_frame_tangent_sign_rule():
    f = frames_at(make_implicit("sphere", m=2, R=1.0), [0, 1])
    assert np.allclose(f.N[:, 0], [0, 1]) and np.allclose(f.T[:, 0], [1, 0])


def test_product_of_spheres_frame_is_radial_then_tangential():
    M = make_implicit("product_spheres", p=2, r1=H, r2=H)
    f = frames_at(M, [H, 0, H, 0])
    assert np.allclose(f.N[:, 0], [H, 0, H, 0], atol=1e-15)
    assert np.allclose(f.N[:, 1], [H, 0, -H, 0], atol=1e-15)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.2, 0.9))
def test_product_frame_is_orthonormal_and_smooth_in_parameters(seed, r1):
    r2 = float(np.sqrt(1 - r1 * r1))
    M = make_implicit("product_spheres", p=2, r1=r1, r2=r2)
    x = sample_points(M, 1, seed)[0]
    f = frames_at(M, x)
    assert _frame_is_orthonormal(M, f) <= 1e-10
    # radial normal is the position vector (unit length because r1^2 + r2^2 = 1)
    assert max_abs(f.N[:, 0] - x) <= 1e-12


@pytest.mark.parametrize("M", [
    make_implicit("sphere", m=5, R=2.0),
    make_implicit("product_spheres", p=3, r1=1.0, r2=2.0),
    make_implicit("custom", m=4, constraints=["x1^2 + 2*x2^2 + x3^2 + 3*x4^2 - 1"]),
    make_implicit("custom", m=4, constraints=["x1^2 + x2^2 + x3^2 + x4^2 - 1", "x1 + x2 - 0.5"]),
])
def test_sampled_points_lie_on_the_manifold_with_valid_frames(M):
    for x in sample_points(M, 10, seed=1):
        assert M.residual(x) <= 1e-10
        assert _frame_is_orthonormal(M, frames_at(M, x)) <= 1e-10


def test_sampling_is_deterministic():
    M = make_implicit("sphere", m=4, R=1.0)
    a, b = sample_points(M, 5, seed=9), sample_points(M, 5, seed=9)
    assert all(np.array_equal(p, q) for p, q in zip(a, b))


def test_split_vector_examples():
    f = frames_at(make_implicit("sphere", m=4, R=1.0), [1, 0, 0, 0])
    tan, nor = split_vector(f, f.N[:, 0])
    assert np.allclose(tan, 0) and np.allclose(nor, [1])
    tan, nor = split_vector(f, f.T[:, 0])
    assert np.allclose(tan, [1, 0, 0]) and np.allclose(nor, [0])
    tan, nor = split_vector(f, [1, 1, 0, 0])
    assert np.allclose(tan, [1, 0, 0]) and np.allclose(nor, [1])
    with pytest.raises(DimensionMismatch):
        split_vector(f, [1, 0])


def test_curve_point_on_the_circle():
    M = make_implicit("sphere", m=2, R=1.0)
    x = np.array([1.0, 0.0])
    assert np.array_equal(curve_point(M, x, [1.0], 0.0), x)
    y = curve_point(M, x, [1.0], 0.1)
    assert np.allclose(y, np.array([1.0, 0.1]) / np.hypot(1.0, 0.1), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.1, 0.1), st.integers(0, 500))
def test_curve_points_stay_on_the_manifold(t, seed):
    M = make_implicit("product_spheres", p=2, r1=0.6, r2=0.8)
    x = sample_points(M, 1, seed)[0]
    X = np.random.default_rng(seed).standard_normal(M.n)
    assert M.residual(curve_point(M, x, X, t)) <= 1e-12


def test_frames_reject_points_off_the_manifold():
    M = make_implicit("sphere", m=3, R=1.0)
    with pytest.raises(NotOnManifold):
        frames_at(M, [1.0, 0.1, 0.0])
    with pytest.raises(DimensionMismatch):
        frames_at(M, [1.0, 0.0])


def test_frames_reject_rank_deficient_constraints():
    M = make_implicit("custom", m=3, constraints=["x1^2 + x2^2 + x3^2 - 1", "2*x1^2 + 2*x2^2 + 2*x3^2 - 2"])
    with pytest.raises(RankDeficient):
        frames_at(M, [1.0, 0.0, 0.0])


def test_retract_maps_onto_sphere():
    M = make_implicit("sphere", m=4, R=1.0)
    assert np.allclose(retract(M, [2, 0, 0, 0]), [1, 0, 0, 0])


def test_polynomial_parse_and_gradient():
    poly = Polynomial.parse(3, "x1^2 + x2^2 - 2*x1*x3 - 1")
    x = np.array([1.0, 2.0, 3.0])
    assert poly(x) == pytest.approx(1 + 4 - 6 - 1)
    assert np.allclose(poly.gradient(x), [2 * 1 - 2 * 3, 4, -2])
    assert Polynomial.parse(2, "1e-3*x1 - x2")(np.array([1000.0, 1.0])) == pytest.approx(0.0)


@pytest.mark.parametrize("text", ["", "x5^2 - 1", "y1 + 1", "x1 ** x2"])
def test_polynomial_parse_errors(text):
    with pytest.raises(InvalidParams):
        Polynomial.parse(3, text)


@pytest.mark.parametrize("kind, params", [
    ("sphere", {"m": 1, "R": 1.0}),
    ("sphere", {"m": 3, "R": -1.0}),
    ("product_spheres", {"p": 1, "r1": 1.0, "r2": 1.0}),
    ("product_spheres", {"p": 2, "r1": 0.0, "r2": 1.0}),
    ("custom", {"m": 2, "constraints": ["x1 - 1", "x2 - 1"]}),
    ("torus", {}),
])
def test_bad_submanifold_parameters(kind, params):
    with pytest.raises(InvalidParams):
        make_implicit(kind, **params)

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from conftest import grid, perturbations
from neutralcoat.geometry import (
    GeometryError,
    Perturbation,
    ShellParams,
    StarBoundary,
    check_admissible,
    curvature,
    eval_normal_jacobian,
    eval_point,
    w2inf_norm,
)


def test_point_examples():
    assert np.allclose(eval_point(StarBoundary(1.0), 0.0), [1.0, 0.0])
    c2 = StarBoundary(1.0, Perturbation(cos=(0.0, 0.1)))
    assert np.allclose(eval_point(c2, 0.0), [1.1, 0.0], atol=1e-15)
    assert np.allclose(eval_point(c2, np.pi / 2), [0.0, 0.9], atol=1e-15)


def test_normal_jacobian_examples():
    r = 0.7
    t = np.linspace(0, 2 * np.pi, 13)
    nuJ, J = eval_normal_jacobian(StarBoundary(r), t)
    assert np.allclose(nuJ, r * np.stack((np.cos(t), np.sin(t)), -1))
    assert np.allclose(J, r)

    eps = 0.03
    nuJ, J = eval_normal_jacobian(StarBoundary(1.0, Perturbation(sin=(eps,))), 0.0)
    assert np.allclose(nuJ, [1.0, -eps])
    assert J == pytest.approx(np.sqrt(1 + eps ** 2), rel=1e-15)


def test_perturbation_derivatives_match_finite_differences():
    f = Perturbation(0.01, (0.02, 0.0, -0.01), (0.0, 0.03))
    t = np.linspace(0, 2 * np.pi, 50)
    d = 1e-5
    assert np.allclose(f(t, 1), (f(t + d) - f(t - d)) / (2 * d), atol=1e-9)
    assert np.allclose(f(t, 2), (f(t + d, 1) - f(t - d, 1)) / (2 * d), atol=1e-8)
    with pytest.raises(ValueError):
        f(t, 3)


def _fd_curvature(curve, t, step):
    # tangent angle from centered point differences, then d(angle)/d(arclength)
    def angle(s):
        d = curve.point(s + step) - curve.point(s - step)
        return np.arctan2(d[..., 1], d[..., 0])

    dphi = np.angle(np.exp(1j * (angle(t + step) - angle(t - step))))
    ds = np.linalg.norm(curve.point(t + step) - curve.point(t - step), axis=-1)
    return dphi / ds


def test_curvature_examples():
    assert np.allclose(curvature(StarBoundary(0.4), grid(16)), 1 / 0.4)
    eps = 0.01
    c = StarBoundary(1.0, Perturbation(cos=(0.0, eps)))
    expected = (1.01 ** 2 + 1.01 * 4 * eps) / (1.01 ** 2) ** 1.5
    assert curvature(c, 0.0) == pytest.approx(expected, rel=1e-14)
    assert curvature(c, 0.0) == pytest.approx(_fd_curvature(c, 0.0, 1e-5), abs=1e-6)


def test_total_curvature_is_two_pi():
    c = StarBoundary(1.0, Perturbation(cos=(0.0, 0.1)))
    t = grid(256)
    _, J = c.normal_jacobian(t)
    assert np.sum(c.curvature(t) * J) * (2 * np.pi / 256) == pytest.approx(2 * np.pi, abs=1e-10)


def test_w2inf_norm_examples():
    assert w2inf_norm(Perturbation()) == (0.0, 0.0, 0.0, 0.0)
    eps = 0.01
    norms = w2inf_norm(Perturbation(cos=(0.0, 0.0, eps)))
    assert np.allclose(norms, (eps, 3 * eps, 9 * eps, 13 * eps), rtol=1e-12)


def test_w2inf_norm_against_refined_search():
    f = Perturbation(cos=(0.02,), sin=(0.0, 0.0, 0.0, 0.01))
    fine = np.linspace(0, 2 * np.pi, 200001)
    expected = []
    for d in range(3):
        g = lambda s: -abs(float(f(s, d)))  # noqa: E731
        t0 = fine[np.argmax(np.abs(f(fine, d)))]
        res = minimize_scalar(g, bounds=(t0 - 1e-4, t0 + 1e-4), method="bounded",
                              options={"xatol": 1e-12})
        expected.append(-res.fun)
    got = w2inf_norm(f)
    assert np.allclose(got[:3], expected, rtol=1e-5)
    assert got[3] == pytest.approx(sum(got[:3]))


def test_shell_params_and_serialization():
    b = ShellParams(0.1, -0.2, 0.05)
    assert b.sup_norm() == 0.2
    f = b.to_perturbation()
    t = grid(7)
    assert np.allclose(f(t), 0.1 - 0.2 * np.cos(2 * t) + 0.05 * np.sin(2 * t))
    data = json.loads(json.dumps(f.to_dict()))
    assert Perturbation.from_dict(data) == f
    with pytest.raises(GeometryError):
        Perturbation.from_dict({"a0": 0.0, "cosine": [1.0]})


def test_construction_errors():
    with pytest.raises(GeometryError):
        StarBoundary(-1.0)
    with pytest.raises(GeometryError):
        StarBoundary(1.0, Perturbation(cos=(1.5,)))
    with pytest.raises(GeometryError):
        check_admissible(StarBoundary(0.7, Perturbation(cos=(0.0, 0.0, 0.28))), StarBoundary(1.0))
    assert check_admissible(StarBoundary(0.5), StarBoundary(1.0)) == pytest.approx(0.5)


@settings(max_examples=50, deadline=None)
@given(perturbations(), st.floats(0.3, 3.0))
def test_normal_length_equals_jacobian(f, r0):
    c = StarBoundary(r0, f.scaled(r0))
    t = grid(64)
    nuJ, J = c.normal_jacobian(t)
    assert np.allclose(np.linalg.norm(nuJ, axis=-1), J, rtol=1e-14, atol=0)
    # closed-curve identity: integral of nu ds vanishes
    assert np.all(np.abs(nuJ.sum(axis=0) * (2 * np.pi / 64)) <= 1e-12)


@settings(max_examples=50, deadline=None)
@given(perturbations(), st.integers(0, 63))
def test_rotation_rotates_points(f, k):
    phi = 2 * np.pi * k / 64
    c = StarBoundary(1.0, f)
    t = grid(64)
    rot = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
    assert np.allclose(c.rotated(phi).point(t), np.roll(c.point(t), k, axis=0) @ rot.T, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(perturbations(max_coeff=0.004))
def test_curvature_matches_tangent_angle_oracle(f):
    c = StarBoundary(1.0, f)
    t = np.linspace(0.1, 6.2, 17)
    assert np.allclose(c.curvature(t), _fd_curvature(c, t, 1e-5), atol=1e-6)

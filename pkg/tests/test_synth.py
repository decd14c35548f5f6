import numpy as np
import pytest

from geodmp.errors import InvalidParams
from geodmp.quaternion import quat_distance, rotate_vector
from geodmp.synth import synth_scenario


def test_plane_orientations_constant():
    demos, _ = synth_scenario("plane")
    q = np.concatenate([d.q for d in demos])
    assert np.max(np.abs(q - q[0])) < 1e-9


@pytest.mark.parametrize("kind", ["sine_surface", "c_chamfer"])
def test_normals_match_finite_differences(kind):
    _, truth = synth_scenario(kind)
    (x0, x1), (y0, y1) = truth.x_range, truth.y_range
    rng = np.random.default_rng(0)
    x = rng.uniform(x0 + 0.05 * (x1 - x0), x1 - 0.05 * (x1 - x0), 200)
    y = rng.uniform(y0, y1, 200)
    h = 1e-6 * max(x1 - x0, y1 - y0)
    hx = (truth.height(x + h, y) - truth.height(x - h, y)) / (2 * h)
    hy = (truth.height(x, y + h) - truth.height(x, y - h)) / (2 * h)
    n_fd = np.column_stack([-hx, -hy, np.ones_like(hx)])
    n_fd /= np.linalg.norm(n_fd, axis=1, keepdims=True)
    assert np.max(np.abs(truth.normal(x, y) - n_fd)) < 1e-4


def test_orientation_points_tool_axis_along_normal():
    demos, truth = synth_scenario("sine_surface")
    d = demos[3]
    z_tool = rotate_vector(d.q, np.array([0.0, 0.0, 1.0]))
    np.testing.assert_allclose(z_tool, truth.normal(d.y[:, 0], d.y[:, 1]), atol=1e-12)
    np.testing.assert_allclose(d.y[:, 2], truth.height(d.y[:, 0], d.y[:, 1]), atol=1e-15)


def test_quadratic_warp_same_points():
    plain, _ = synth_scenario("sine_surface")
    warped, _ = synth_scenario("sine_surface", time_warp="quadratic")
    for a, b in zip(plain, warped):
        np.testing.assert_array_equal(a.y, b.y)
        np.testing.assert_array_equal(a.q, b.q)
        assert not np.allclose(a.t, b.t)
        assert np.all(np.diff(b.t) > 0.0) and b.t[-1] == a.t[-1]


def test_noise_is_seeded():
    a, _ = synth_scenario("plane", noise=1e-3, seed=4)
    b, _ = synth_scenario("plane", noise=1e-3, seed=4)
    c, _ = synth_scenario("plane", noise=1e-3, seed=5)
    np.testing.assert_array_equal(a[0].y, b[0].y)
    assert not np.array_equal(a[0].y, c[0].y)


def test_sweep_layout():
    demos, truth = synth_scenario("sine_surface", {"n_sweeps": 5, "n_points": 30})
    assert len(demos) == 5 and all(len(d) == 30 for d in demos)
    ys = [d.y[0, 1] for d in demos]
    np.testing.assert_allclose(ys, np.linspace(*truth.y_range, 5))
    assert quat_distance(demos[0].q[0], truth.orientation(0.0, 0.0)) < 1e-12


@pytest.mark.parametrize("kwargs", [
    {"kind": "torus"},
    {"kind": "plane", "params": {"bogus": 1.0}},
    {"kind": "plane", "params": {"width": -1.0}},
    {"kind": "plane", "noise": -0.1},
    {"kind": "plane", "time_warp": "cubic"},
    {"kind": "c_chamfer", "params": {"width": 0.05}},
])
def test_invalid_params(kwargs):
    with pytest.raises(InvalidParams):
        synth_scenario(**kwargs)

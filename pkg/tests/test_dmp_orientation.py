import dataclasses

import numpy as np
import pytest

from geodmp.dmp_orientation import (
    estimate_orientation_series,
    fit_geo_dmp,
    fit_time_quat_dmp,
    generate_geo_dmp,
    generate_time_quat_dmp,
    time_playback,
)
from geodmp.errors import DegenerateDemo, DegenerateGoal, InvalidSpeed
from geodmp.metrics import quat_frechet
from geodmp.quaternion import (
    IDENTITY,
    interpolate_sequence,
    quat_distance,
    quat_exp,
    quat_from_axis_angle,
    quat_mul,
)
from oracles import compound, quadratic_warp, single_axis


def max_err_to(gen, path):
    """Max geodesic distance from generated samples to a dense demo path."""
    dense = path(np.linspace(0.0, 1.0, 4000))
    return max(np.min(quat_distance(q, dense)) for q in gen.q)


def test_single_axis_eta_is_axis():
    series = estimate_orientation_series(single_axis(np.linspace(0.0, 1.0, 91)))
    np.testing.assert_allclose(series.eta, np.tile([0.0, 0.0, 1.0], (len(series.g), 1)),
                               atol=1e-6)
    assert np.max(np.abs(series.deta)) < 1e-6
    assert series.L == pytest.approx(np.pi / 2, abs=1e-9)


@pytest.mark.parametrize("n_fit", [200, None])
def test_unit_speed_interior(n_fit):
    _, p = quadratic_warp(300)
    series = estimate_orientation_series(compound(p), n_fit=n_fit)
    norms = np.linalg.norm(series.eta[1:-1], axis=1)
    assert np.all((norms > 0.95) & (norms < 1.05))


def test_constant_orientation_rejected():
    with pytest.raises(DegenerateDemo):
        estimate_orientation_series(np.tile(IDENTITY, (10, 1)))
    with pytest.raises(DegenerateDemo):
        fit_time_quat_dmp(np.tile(IDENTITY, (10, 1)), np.arange(10.0))


def there_and_back(p):
    p = np.asarray(p)
    a = np.column_stack([0.4 * np.sin(np.pi * p), 0.2 * np.sin(2 * np.pi * p), 0 * p])
    return quat_mul(quat_from_axis_angle([0.0, 0.0, 1.0], 0.3),
                    quat_exp(a))


def test_returning_rotation_rejected():
    series = estimate_orientation_series(there_and_back(np.linspace(0.0, 1.0, 200)))
    with pytest.raises(DegenerateGoal):
        fit_geo_dmp(series)
    # the lenient mode accepts it and still reproduces the demo
    gen = generate_geo_dmp(fit_geo_dmp(series, strict=False))
    assert max_err_to(gen, there_and_back) < 0.02


def test_single_axis_reproduction():
    model = fit_geo_dmp(estimate_orientation_series(single_axis(np.linspace(0.0, 1.0, 200))))
    gen = generate_geo_dmp(model)
    assert max_err_to(gen, single_axis) < 0.02


def test_compound_reproduction_and_pure_geodesic_is_easier():
    p = np.linspace(0.0, 1.0, 400)
    err_c = max_err_to(generate_geo_dmp(fit_geo_dmp(estimate_orientation_series(compound(p)))),
                       compound)
    err_s = max_err_to(generate_geo_dmp(fit_geo_dmp(estimate_orientation_series(single_axis(p)))),
                       single_axis)
    assert err_c < 0.05
    assert err_s < err_c


def test_unit_norm_and_unit_speed_generation():
    gen = generate_geo_dmp(fit_geo_dmp(estimate_orientation_series(
        compound(np.linspace(0.0, 1.0, 300)))))
    assert np.max(np.abs(np.linalg.norm(gen.q, axis=1) - 1.0)) < 1e-9
    mid = (gen.g > 0.1 * gen.g[-1]) & (gen.g < 0.9 * gen.g[-1])
    norms = np.linalg.norm(gen.eta[mid], axis=1)
    assert np.all((norms > 0.9) & (norms < 1.1))


def test_equilibrium_with_zero_weights():
    model = fit_geo_dmp(estimate_orientation_series(single_axis(np.linspace(0.0, 1.0, 50))))
    model = dataclasses.replace(model, weights=np.zeros_like(model.weights))
    q = quat_from_axis_angle([1.0, 2.0, 0.0], 0.4)
    gen = generate_geo_dmp(model, q_start=q, q_goal=q)
    assert np.max(quat_distance(gen.q, q)) < 1e-9


def test_rotated_task_equivariance():
    model = fit_geo_dmp(estimate_orientation_series(single_axis(np.linspace(0.0, 1.0, 100))))
    base = generate_geo_dmp(model)
    r = quat_from_axis_angle([0.0, 0.0, 1.0], 0.7)
    moved = generate_geo_dmp(model, q_start=quat_mul(r, model.q0), q_goal=quat_mul(r, model.qg))
    assert np.max(quat_distance(moved.q, quat_mul(r, base.q))) < 1e-6


def test_reparameterization_invariance():
    n = 400
    _, p = quadratic_warp(n)
    gens = [generate_geo_dmp(fit_geo_dmp(estimate_orientation_series(compound(pp))))
            for pp in (np.linspace(0.0, 1.0, n), p)]
    assert np.max(quat_distance(gens[0].q, gens[1].q)) < 1e-3


def test_time_playback():
    series = estimate_orientation_series(single_axis(np.linspace(0.0, 1.0, 100)))
    L = series.L
    t, q, g = time_playback(series, lambda g: L, dt=0.01)
    np.testing.assert_allclose(np.diff(t), 0.01)
    assert t[-1] == pytest.approx(1.0)
    # a ramp profile traverses the same path
    t2, q2, g2 = time_playback(series, lambda g: 0.5 * L + g, dt=0.005)
    assert not np.allclose(len(t), len(t2))
    expected = interpolate_sequence(series.g, series.q, g2)
    assert np.max(quat_distance(q2, expected)) < 1e-6
    assert np.max(quat_distance(q2, interpolate_sequence(g, q, g2))) < 1e-6
    with pytest.raises(InvalidSpeed):
        time_playback(series, lambda g: 0.0, dt=0.01)


def test_baseline_reproduction():
    t = np.linspace(0.0, 2.0, 400)
    _, q = generate_time_quat_dmp(fit_time_quat_dmp(compound(t / 2.0), t))
    dense = compound(np.linspace(0.0, 1.0, 4000))
    assert max(np.min(quat_distance(qk, dense)) for qk in q) < 0.05


def test_baseline_suffers_from_time_warp():
    t, p = quadratic_warp(400)
    demo = compound(p)
    dense = compound(np.linspace(0.0, 1.0, 2000))
    geo = generate_geo_dmp(fit_geo_dmp(estimate_orientation_series(demo)))
    _, base = generate_time_quat_dmp(fit_time_quat_dmp(demo, t))
    assert quat_frechet(base, dense) > quat_frechet(geo.q, dense)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from geodmp.errors import EmptySequence, NoSamples, NotConverged
from geodmp.quaternion import (
    IDENTITY,
    geodesic_length_series,
    intrinsic_mean,
    make_continuous,
    mean_objective,
    quat_conj,
    quat_distance,
    quat_exp,
    quat_from_axis_angle,
    quat_from_two_vectors,
    quat_log,
    quat_mul,
    rotate_vector,
    slerp,
)
from oracles import random_quats

I = np.array([0.0, 1.0, 0.0, 0.0])

finite = st.floats(-1.0, 1.0, allow_nan=False)
quats = arrays(float, 4, elements=finite).filter(lambda v: np.linalg.norm(v) > 0.1).map(
    lambda v: v / np.linalg.norm(v))


def test_mul_identity_and_i_squared():
    q = random_quats(np.random.default_rng(0), 1)[0]
    np.testing.assert_allclose(quat_mul(IDENTITY, q), q, atol=1e-15)
    np.testing.assert_allclose(quat_mul(I, I), [-1.0, 0.0, 0.0, 0.0], atol=1e-15)


def test_mul_inverse():
    qs = random_quats(np.random.default_rng(1), 50)
    np.testing.assert_allclose(quat_mul(qs, quat_conj(qs)), np.tile(IDENTITY, (50, 1)), atol=1e-12)


def test_mul_matches_rotation_composition():
    rng = np.random.default_rng(2)
    a, b = random_quats(rng, 2)
    v = rng.normal(size=3)
    np.testing.assert_allclose(rotate_vector(quat_mul(a, b), v),
                               rotate_vector(a, rotate_vector(b, v)), atol=1e-12)


def test_conj_examples():
    np.testing.assert_array_equal(quat_conj(IDENTITY), IDENTITY)
    np.testing.assert_array_equal(quat_conj([0.0, 0.0, 1.0, 0.0]), [0.0, 0.0, -1.0, 0.0])
    q = random_quats(np.random.default_rng(3), 1)[0]
    np.testing.assert_array_equal(quat_conj(quat_conj(q)), q)


def test_log_exp_examples():
    np.testing.assert_array_equal(quat_log(IDENTITY), [0.0, 0.0, 0.0])
    np.testing.assert_allclose(quat_log(I), [np.pi / 2, 0.0, 0.0], atol=1e-15)
    np.testing.assert_array_equal(quat_exp([0.0, 0.0, 0.0]), IDENTITY)
    np.testing.assert_allclose(quat_exp([np.pi / 2, 0.0, 0.0]), I, atol=1e-15)


def test_exp_log_roundtrip_1000():
    qs = random_quats(np.random.default_rng(4), 1000)
    qs = qs[qs[:, 0] > -1.0 + 1e-6]
    assert np.max(np.abs(quat_exp(quat_log(qs)) - qs)) < 1e-9


def test_log_exp_roundtrip_1000():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(1000, 3))
    a *= (rng.uniform(0.0, np.pi - 1e-3, 1000) / np.linalg.norm(a, axis=1))[:, np.newaxis]
    assert np.max(np.abs(quat_log(quat_exp(a)) - a)) < 1e-9


def test_log_norm_range():
    qs = random_quats(np.random.default_rng(6), 500)
    n = np.linalg.norm(quat_log(qs), axis=1)
    assert np.all((n >= 0.0) & (n <= np.pi))


def test_distance_examples():
    q = random_quats(np.random.default_rng(7), 1)[0]
    assert quat_distance(q, q) == pytest.approx(0.0, abs=1e-12)
    assert quat_distance(IDENTITY, I) == pytest.approx(np.pi, abs=1e-12)
    assert quat_distance(q, -q) == pytest.approx(2.0 * np.pi)


def test_distance_is_rotation_angle():
    for angle in (0.1, 1.0, 2.5):
        q = quat_from_axis_angle([1.0, 2.0, 3.0], angle)
        assert quat_distance(q, IDENTITY) == pytest.approx(angle, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(quats, quats, quats)
def test_distance_metric_properties(a, b, c):
    dab = quat_distance(a, b)
    assert dab == pytest.approx(quat_distance(b, a), abs=1e-9)
    assert 0.0 <= dab <= 2.0 * np.pi
    assert dab <= quat_distance(a, c) + quat_distance(c, b) + 1e-9


@settings(max_examples=100, deadline=None)
@given(quats)
def test_unit_norm_after_mul(q):
    out = quat_mul(q, quat_from_axis_angle([0.0, 1.0, 0.0], 0.7))
    assert abs(np.linalg.norm(out) - 1.0) < 1e-9


def test_make_continuous():
    qs = single_axis_seq = quat_from_axis_angle([0.0, 0.0, 1.0], np.linspace(0.0, 3.0, 20))
    flipped = qs * np.where(np.arange(20) % 3 == 0, -1.0, 1.0)[:, np.newaxis]
    out = make_continuous(flipped)
    assert np.all(np.sum(out[1:] * out[:-1], axis=1) >= 0.0)
    np.testing.assert_allclose(np.abs(np.sum(out * single_axis_seq, axis=1)), 1.0, atol=1e-12)


def test_geodesic_length_examples():
    cum, total = geodesic_length_series([IDENTITY])
    np.testing.assert_array_equal(cum, [0.0])
    assert total == 0.0
    cum, total = geodesic_length_series([IDENTITY, I])
    np.testing.assert_allclose(cum, [0.0, np.pi], atol=1e-12)
    with pytest.raises(EmptySequence):
        geodesic_length_series(np.zeros((0, 4)))


@pytest.mark.parametrize("m", [1, 7, 100])
def test_geodesic_length_single_axis(m):
    theta = 2.3
    qs = quat_from_axis_angle([1.0, -1.0, 0.5], np.linspace(0.0, theta, m + 1))
    cum, total = geodesic_length_series(qs)
    assert total == pytest.approx(theta, abs=1e-9)
    assert np.all(np.diff(cum) >= 0.0)


def test_geodesic_length_ignores_sign_flips():
    qs = quat_from_axis_angle([0.0, 0.0, 1.0], np.linspace(0.0, 1.0, 11))
    qs[5] *= -1.0
    assert geodesic_length_series(qs)[1] == pytest.approx(1.0, abs=1e-9)


def test_slerp_endpoints_and_midpoint():
    a = IDENTITY
    b = quat_from_axis_angle([0.0, 1.0, 0.0], 1.2)
    np.testing.assert_allclose(slerp(a, b, 0.0), a, atol=1e-15)
    np.testing.assert_allclose(slerp(a, b, 1.0), b, atol=1e-12)
    np.testing.assert_allclose(slerp(a, b, 0.5), quat_from_axis_angle([0.0, 1.0, 0.0], 0.6),
                               atol=1e-12)


def test_mean_of_coincident_samples():
    q = random_quats(np.random.default_rng(8), 1)[0]
    np.testing.assert_allclose(intrinsic_mean([q, q], [1.0, 1.0]), q, atol=1e-12)


def test_mean_two_samples_is_midpoint():
    a = quat_from_axis_angle([1.0, 0.0, 0.0], 0.2)
    b = quat_from_axis_angle([1.0, 0.0, 0.0], 1.0)
    m = intrinsic_mean([a, b])
    assert quat_distance(m, quat_from_axis_angle([1.0, 0.0, 0.0], 0.6)) < 1e-9


def test_mean_zero_weight_ignored():
    a = quat_from_axis_angle([0.0, 1.0, 0.0], 0.4)
    b = quat_from_axis_angle([0.0, 1.0, 0.0], -0.4)
    far = quat_from_axis_angle([1.0, 0.0, 0.0], 1.5)
    m = intrinsic_mean([a, b, far], [1.0, 1.0, 0.0])
    assert quat_distance(m, IDENTITY) < 1e-9


def test_mean_handles_double_cover():
    a = quat_from_axis_angle([0.0, 0.0, 1.0], 0.3)
    b = -quat_from_axis_angle([0.0, 0.0, 1.0], 0.5)
    m = intrinsic_mean([a, b])
    assert min(quat_distance(m, quat_from_axis_angle([0.0, 0.0, 1.0], 0.4)),
               quat_distance(-m, quat_from_axis_angle([0.0, 0.0, 1.0], 0.4))) < 1e-9


def test_mean_equivariance_and_weight_scaling():
    rng = np.random.default_rng(9)
    base = quat_from_axis_angle([0.3, 0.2, 1.0], 0.5)
    qs = quat_mul(quat_exp(0.2 * rng.normal(size=(5, 3))), base)
    w = rng.uniform(0.1, 2.0, 5)
    m = intrinsic_mean(qs, w)
    r = random_quats(rng, 1)[0]
    assert quat_distance(intrinsic_mean(quat_mul(r, qs), w), quat_mul(r, m)) < 1e-6
    assert quat_distance(intrinsic_mean(qs, 7.5 * w), m) < 1e-9


def test_mean_gradient_vanishes():
    rng = np.random.default_rng(10)
    qs = quat_exp(0.3 * rng.normal(size=(4, 3)))
    w = rng.uniform(0.5, 1.5, 4)
    m = intrinsic_mean(qs, w)
    grad = w @ quat_log(quat_mul(qs, quat_conj(m))) / w.sum()
    assert np.linalg.norm(grad) < 1e-10
    # small perturbations do not lower the objective
    f0 = mean_objective(qs, w, m)
    for d in 1e-3 * rng.normal(size=(10, 3)):
        assert mean_objective(qs, w, quat_mul(quat_exp(d), m)) >= f0


def test_mean_errors():
    with pytest.raises(NoSamples):
        intrinsic_mean(np.zeros((0, 4)))
    with pytest.raises(NoSamples):
        intrinsic_mean([IDENTITY], [0.0])
    qs = quat_exp(0.5 * np.random.default_rng(11).normal(size=(3, 3)))
    with pytest.raises(NotConverged) as info:
        intrinsic_mean(qs, max_iter=1, tol=1e-16)
    assert info.value.last.shape == (4,)


def test_from_two_vectors():
    ez = np.array([0.0, 0.0, 1.0])
    for n in ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.3, -0.2, 0.9], [0.0, 0.0, -1.0]):
        n = np.asarray(n) / np.linalg.norm(n)
        np.testing.assert_allclose(rotate_vector(quat_from_two_vectors(ez, n), ez), n, atol=1e-12)
    # antipodal tie: half turn about x
    np.testing.assert_allclose(quat_from_two_vectors(ez, -ez), [0.0, 1.0, 0.0, 0.0], atol=1e-15)

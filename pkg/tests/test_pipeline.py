import numpy as np
import pytest

from geodmp.basis import phase
from geodmp.demo import concat
from geodmp.errors import DegenerateDemo, InsufficientData, LengthMismatch, UnsupportedRegion
from geodmp.pipeline import (
    SyncTrajectory,
    encode_skill,
    evaluate,
    execute_skill,
    fit_force_kernels,
    generate_reference,
    query_force_kernels,
    truth_reference,
)
from geodmp.quaternion import quat_distance, quat_from_axis_angle, quat_mul
from geodmp.surface import build_chart, dtw_align, fit_surface
from geodmp.synth import synth_scenario


def learn(kind, **surface_kw):
    demos, truth = synth_scenario(kind)
    chart = build_chart(concat(demos))
    return fit_surface(dtw_align(demos), chart=chart, **surface_kw), truth


@pytest.fixture(scope="module")
def plane():
    return learn("plane")


@pytest.fixture(scope="module")
def sine():
    return learn("sine_surface")


@pytest.fixture(scope="module")
def sine_ref(sine):
    surface, _ = sine
    return generate_reference(surface, (-0.35, -0.3), (0.35, 0.3), 100)


def straight_ref(n=60, rotate=False):
    lam = np.linspace(0.0, 1.0, n)
    y = np.column_stack([0.2 * lam, 0.1 * lam, np.full(n, 0.05)])
    angle = 0.6 * lam if rotate else np.zeros(n)
    q = quat_from_axis_angle([0.0, 1.0, 0.0], angle)
    return SyncTrajectory.from_samples(lam, y, q, 8.0 + 2.0 * lam)


# --- generate_reference ------------------------------------------------------

def test_reference_endpoints(plane):
    surface, _ = plane
    ref = generate_reference(surface, (-0.3, -0.2), (0.3, 0.25), 40)
    assert len(ref) == 41 and ref.lam[0] == 0.0 and ref.lam[-1] == 1.0
    np.testing.assert_allclose(ref.y[[0, -1], :2], surface.chart.to_xy([[-0.3, -0.2], [0.3, 0.25]]),
                               atol=1e-15)


def test_reference_midpoint_on_plane(plane):
    surface, truth = plane
    ref = generate_reference(surface, (-0.3, -0.2), (0.3, 0.25), 40)
    mid = ref.y[20]
    np.testing.assert_allclose(mid[:2], surface.chart.to_xy([0.0, 0.025]), atol=1e-15)
    assert abs(mid[2] - truth.height(mid[0], mid[1])) < 2e-3


def test_reference_outside_hull(plane):
    surface, _ = plane
    with pytest.raises(UnsupportedRegion):
        generate_reference(surface, (0.0, 0.0), (1.5, 0.0), 20)


# --- force kernels -----------------------------------------------------------

def test_force_constant():
    x = phase(np.linspace(0.0, 1.0, 200), 4.0)
    model = fit_force_kernels(np.full(200, 5.0), x, 20)
    probe = np.linspace(phase(1.0, 4.0), 1.0, 500)
    assert np.max(np.abs(query_force_kernels(model, probe) - 5.0)) < 1e-6


def test_force_ramp():
    x = phase(np.linspace(0.0, 1.0, 200), 4.0)
    f = 10.0 * (1.0 - x) / (1.0 - x.min())
    model = fit_force_kernels(f, x, 20)
    rms = np.sqrt(np.mean((query_force_kernels(model, x) - f) ** 2))
    assert rms < 0.2


def test_force_too_few_samples():
    with pytest.raises(InsufficientData):
        fit_force_kernels([5.0], [1.0], 20)


# --- encode / execute --------------------------------------------------------

def test_roundtrip(sine_ref):
    ref = sine_ref
    out = execute_skill(encode_skill(ref), n_steps=len(ref))
    rep = evaluate(out, ref)
    assert rep.pos_rms < 1e-2 * ref.s_cum[-1]
    assert rep.ori_max < 0.03
    assert rep.force_rms < 0.05 * np.ptp(ref.f)


def test_roundtrip_linear_coregistration(sine_ref):
    out = execute_skill(encode_skill(sine_ref, coregistration="linear"), n_steps=len(sine_ref))
    assert evaluate(out, sine_ref).pos_rms < 1e-2 * sine_ref.s_cum[-1]


def test_pass_through_orientation():
    ref = straight_ref()
    bundle = encode_skill(ref)
    assert bundle.geo_model is None
    out = execute_skill(bundle, n_steps=60)
    assert evaluate(out, ref).ori_max == 0.0


def test_zero_length_reference():
    lam = np.linspace(0.0, 1.0, 30)
    ref = SyncTrajectory.from_samples(lam, np.zeros((30, 3)), np.tile([1.0, 0, 0, 0], (30, 1)),
                                      np.ones(30))
    with pytest.raises(DegenerateDemo):
        encode_skill(ref)


def test_initial_conditions(sine_ref):
    bundle = encode_skill(sine_ref)
    out = execute_skill(bundle, n_steps=50)
    np.testing.assert_allclose(out.y[0], sine_ref.y[0], atol=1e-12)
    assert quat_distance(out.q[0], sine_ref.q[0]) < 1e-9
    assert out.phase_force[0] == 1.0
    assert out.f[0] == pytest.approx(query_force_kernels(bundle.force_model, 1.0), abs=1e-12)


def test_speed_profiles_do_not_change_geometry(sine_ref):
    bundle = encode_skill(sine_ref)
    slow = execute_skill(bundle, 80, speed_profile=lambda lam: 0.01 + 0.0 * lam)
    fast = execute_skill(bundle, 80, speed_profile=lambda lam: 0.05 + 0.1 * np.sin(np.pi * lam))
    for field in ("y", "q", "f"):
        assert np.max(np.abs(getattr(slow, field) - getattr(fast, field))) < 1e-9
    assert slow.t[-1] > fast.t[-1] > 0.0
    assert slow.t[-1] == pytest.approx(slow.s_cum[-1] / 0.01)


def test_two_steps_hit_endpoints():
    ref = straight_ref(rotate=True)
    out = execute_skill(encode_skill(ref), n_steps=2)
    assert len(out) == 2
    L = ref.s_cum[-1]
    assert np.linalg.norm(out.y[-1] - ref.y[-1]) < 1e-2 * L
    assert quat_distance(out.q[-1], ref.q[-1]) < 1e-2


def test_phases_and_monotone_progress(sine_ref):
    out = execute_skill(encode_skill(sine_ref), n_steps=120)
    assert np.array_equal(out.phase_ori, out.phase_force)
    for arr in (out.lam, out.s_cum, out.g_cum):
        assert np.all(np.diff(arr) >= 0.0)
    assert np.all(np.diff(out.phase_ori) < 0.0)


# --- evaluate ----------------------------------------------------------------

def test_evaluate_identical():
    ref = straight_ref(rotate=True)
    assert all(v == 0.0 for v in evaluate(ref, ref).as_dict().values())


def test_evaluate_constant_offset():
    ref = straight_ref()
    moved = SyncTrajectory.from_samples(ref.lam, ref.y + [0.0, 0.0, 1e-3], ref.q, ref.f)
    rep = evaluate(moved, ref)
    assert rep.pos_rms == pytest.approx(1e-3, rel=1e-9)
    assert rep.pos_max == pytest.approx(1e-3, rel=1e-9)


def test_evaluate_fixed_rotation():
    ref = straight_ref(rotate=True)
    r = quat_from_axis_angle([1.0, 2.0, -0.5], np.deg2rad(5.0))
    turned = SyncTrajectory.from_samples(ref.lam, ref.y, quat_mul(r, ref.q), ref.f)
    assert evaluate(turned, ref).ori_max == pytest.approx(np.deg2rad(5.0), abs=1e-9)


def test_evaluate_length_mismatch():
    a, b = straight_ref(60), straight_ref(40)
    with pytest.raises(LengthMismatch):
        evaluate(a, b, allow_resample=False)
    assert evaluate(a, b).pos_max < 1e-12


# --- surface generalization --------------------------------------------------

def test_sine_held_out_path(sine):
    surface, truth = sine
    a, b = (-0.35, -0.3), (0.35, 0.3)
    out = execute_skill(encode_skill(generate_reference(surface, a, b, 100)), n_steps=101)
    gt = truth_reference(truth, surface.chart, a, b, 100)
    diag = np.hypot(np.ptp(truth.x_range), np.ptp(truth.y_range))
    dp = np.linalg.norm(out.y - gt.y, axis=1)
    normal_err = quat_distance(out.q, gt.q)
    assert dp.max() < 0.02 * diag
    assert normal_err.max() < np.deg2rad(8.0)

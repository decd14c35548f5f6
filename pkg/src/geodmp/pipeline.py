"""Synchronized position, orientation and force skills on a learned surface.

A reference between two chart points is read off the surface model, then
re-encoded with an AL-DMP (positions), a Geo-DMP (orientations) and force
kernels over the Geo-DMP phase. A shared progress variable ``lam`` in
``[0, 1]`` indexes all three channels.
"""
from dataclasses import dataclass

import numpy as np

from . import basis
from .dmp_orientation import (
    EPS_GEODESIC,
    N_FIT,
    estimate_orientation_series,
    fit_geo_dmp,
    generate_geo_dmp,
)
from .dmp_position import (
    ALPHA_X,
    ALPHA_Z,
    BETA_Z,
    arc_length_resample,
    chord_lengths,
    fit_al_dmp,
    generate_al_dmp,
)
from .errors import (
    InsufficientData,
    InvalidSpeed,
    LengthMismatch,
    NoNeighbors,
    UnsupportedRegion,
)
from .quaternion import (
    geodesic_length_series,
    interpolate_sequence,
    make_continuous,
    quat_distance,
)
from .surface import query_force, query_height, query_orientation

N_RETRY = 3
N_POS_SAMPLES = 200
FORCE_WIDTH_SCALE = 8.0


@dataclass(frozen=True)
class SyncTrajectory:
    """Position, orientation and force sampled on a common progress grid.

    ``phase_ori`` and ``phase_force`` are only set on executed trajectories;
    ``t`` holds timestamps when a speed profile was applied.
    """
    lam: np.ndarray
    y: np.ndarray
    q: np.ndarray
    f: np.ndarray
    s_cum: np.ndarray
    g_cum: np.ndarray
    t: np.ndarray = None
    phase_ori: np.ndarray = None
    phase_force: np.ndarray = None

    def __len__(self):
        return len(self.lam)

    @classmethod
    def from_samples(cls, lam, y, q, f, t=None):
        """Build from raw samples, filling in cumulative lengths."""
        y = np.asarray(y, dtype=float)
        q = make_continuous(np.asarray(q, dtype=float))
        g_cum, _ = geodesic_length_series(q)
        return cls(lam=np.asarray(lam, dtype=float), y=y, q=q, f=np.asarray(f, dtype=float),
                   s_cum=chord_lengths(y), g_cum=g_cum,
                   t=None if t is None else np.asarray(t, dtype=float))


@dataclass(frozen=True)
class ForceKernelModel:
    weights: np.ndarray
    centers: np.ndarray
    widths: np.ndarray


@dataclass(frozen=True)
class SkillBundle:
    """Everything needed to replay a skill.

    ``lam_knots``, ``s_frac`` and ``g_frac`` register the normalized arc and
    geodesic lengths of the reference against progress. ``geo_model`` is
    None for a constant-orientation reference, which then replays
    ``q_const``.
    """
    al_model: object
    geo_model: object
    force_model: ForceKernelModel
    endpoints: tuple
    lam_knots: np.ndarray
    s_frac: np.ndarray
    g_frac: np.ndarray
    q_const: np.ndarray = None
    surface: object = None


@dataclass(frozen=True)
class ErrorReport:
    pos_rms: float
    pos_max: float
    ori_rms: float
    ori_max: float
    force_rms: float

    FIELDS = ("pos_rms", "pos_max", "ori_rms", "ori_max", "force_rms")

    def as_dict(self):
        return {k: getattr(self, k) for k in self.FIELDS}


# --- reference generation ----------------------------------------------------

def _orientation_with_retry(surface, point, n_retry):
    d = surface.d_query
    for attempt in range(n_retry + 1):
        try:
            return query_orientation(surface, point, d)
        except NoNeighbors:
            if attempt == n_retry:
                raise
            d *= 2.0


def generate_reference(surface, start_uv, end_uv, n_u=100, n_retry=N_RETRY):
    """Straight line in the chart between two points, lifted onto the surface.

    Sample ``i`` sits at ``(u, v) = A + (i / n_u) (B - A)`` for
    ``i = 0 .. n_u``; height and force come from the kernel fields and the
    orientation from the neighbouring demo orientations, with the query
    radius doubled up to ``n_retry`` times when nothing is in range.

    Raises
    ------
    UnsupportedRegion
        If a sample lies outside the supported kernels or has no
        demonstration orientation nearby even after the retries.
    """
    if n_u < 1:
        raise ValueError("n_u must be >= 1")
    a = np.asarray(start_uv, dtype=float)
    b = np.asarray(end_uv, dtype=float)
    lam = np.arange(n_u + 1) / n_u
    uv = a + lam[:, np.newaxis] * (b - a)
    z, ok_z = query_height(surface, uv[:, 0], uv[:, 1])
    f, ok_f = query_force(surface, uv[:, 0], uv[:, 1])
    bad = ~(ok_z & ok_f)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise UnsupportedRegion(f"(u, v) = ({uv[k, 0]:.6g}, {uv[k, 1]:.6g}) is outside "
                                "the region supported by the demonstrations")
    y = np.column_stack([surface.chart.to_xy(uv), z])
    q = np.empty((len(lam), 4))
    for k, point in enumerate(y):
        try:
            q[k] = _orientation_with_retry(surface, point, n_retry)
        except NoNeighbors as exc:
            raise UnsupportedRegion(f"no demonstration orientation near sample {k}: {exc}") \
                from exc
    return SyncTrajectory.from_samples(lam, y, q, f)


# --- force kernels -----------------------------------------------------------

def fit_force_kernels(f, phase, n_basis=20, alpha_x=ALPHA_X, width_scale=FORCE_WIDTH_SCALE):
    """Order-0 LWR of force over phase, without any attractor term.

    Each kernel weight is the activation-weighted mean of the force samples,
    so the normalized kernel sum is a smoothed copy of ``f(x)``. Kernels sit
    at the DMP basis centers; their precision is ``width_scale`` times the
    DMP basis precision, since the wide DMP kernels bias an order-0 fit
    near the ends of the phase range.

    Raises
    ------
    InsufficientData
        If there are fewer samples than kernels.
    """
    f = np.asarray(f, dtype=float)
    phase = np.asarray(phase, dtype=float)
    if len(f) != len(phase):
        raise ValueError("force and phase must have equal length")
    if len(f) < n_basis:
        raise InsufficientData(f"{len(f)} force samples for {n_basis} kernels")
    c = basis.centers(n_basis, alpha_x)
    h = width_scale * basis.widths(c)
    psi = basis.activations(phase, c, h)
    mass = psi.sum(axis=0)
    # a kernel with no data borrows the nearest sample
    nearest = f[np.argmin(np.abs(phase[:, np.newaxis] - c), axis=0)]
    w = np.where(mass > 1e-300, psi.T @ f / np.where(mass > 1e-300, mass, 1.0), nearest)
    return ForceKernelModel(weights=w, centers=c, widths=h)


def query_force_kernels(model, phase):
    """Normalized kernel sum ``sum w psi(x) / sum psi(x)``."""
    psi = basis.activations(phase, model.centers, model.widths)
    return psi @ model.weights / psi.sum(axis=1)


# --- skill encoding and replay -----------------------------------------------

def encode_skill(ref, n_basis_pos=50, n_basis_ori=30, n_basis_force=30, alpha_z=ALPHA_Z,
                 beta_z=BETA_Z, alpha_x=ALPHA_X, n_fit=N_FIT, eps_geodesic=EPS_GEODESIC,
                 coregistration="reference", surface=None):
    """Fit the three channel models to a reference trajectory.

    Positions are resampled by arc length and fit with an AL-DMP, the
    orientations with a Geo-DMP, and the force with kernels over the Geo-DMP
    phase ``x(g)``. A reference that barely rotates gets no Geo-DMP; its
    orientation is replayed as a constant and force falls back to the
    arc-length phase.

    ``coregistration="reference"`` replays each channel at the normalized
    length it had at the same progress in the reference, which keeps
    orientation and force attached to the right place on the path.
    ``"linear"`` instead maps progress straight to normalized length in both
    channels.

    Raises
    ------
    DegenerateDemo
        If the reference has no arc length.
    """
    gains = {"alpha_z": alpha_z, "beta_z": beta_z, "alpha_x": alpha_x}
    series = arc_length_resample(ref.y, n_samples=max(N_POS_SAMPLES, len(ref)))
    al_model = fit_al_dmp(series, n_basis=n_basis_pos, **gains)
    s_frac = ref.s_cum / ref.s_cum[-1]

    g_total = ref.g_cum[-1]
    if g_total < eps_geodesic:
        geo_model, g_frac, q_const = None, s_frac.copy(), ref.q[0].copy()
    else:
        oseries = estimate_orientation_series(ref.q, n_fit=n_fit, eps_geodesic=eps_geodesic)
        geo_model = fit_geo_dmp(oseries, n_basis=n_basis_ori, strict=False, **gains)
        g_frac, q_const = ref.g_cum / g_total, None
    if coregistration == "linear":
        s_frac = g_frac = np.asarray(ref.lam, dtype=float).copy()
    elif coregistration != "reference":
        raise ValueError(f"unknown coregistration {coregistration!r}")
    force_model = fit_force_kernels(ref.f, basis.phase(g_frac, alpha_x), n_basis_force, alpha_x)
    endpoints = (tuple(ref.y[0].tolist()), tuple(ref.y[-1].tolist()))
    return SkillBundle(al_model=al_model, geo_model=geo_model, force_model=force_model,
                       endpoints=endpoints, lam_knots=np.asarray(ref.lam, dtype=float).copy(),
                       s_frac=s_frac, g_frac=g_frac, q_const=q_const, surface=surface)


def _timestamps(s, lam, speed_profile):
    v = np.asarray(speed_profile(lam), dtype=float) * np.ones_like(lam)
    if np.any(~np.isfinite(v)) or np.any(v <= 0.0):
        raise InvalidSpeed("speed profile must be finite and positive")
    ds = np.diff(s) if s[-1] > s[0] else np.diff(lam)
    # trapezoid rule on 1 / v
    dt = ds * 0.5 * (1.0 / v[1:] + 1.0 / v[:-1])
    return np.concatenate([[0.0], np.cumsum(dt)])


def execute_skill(bundle, n_steps=100, speed_profile=None, n_integrate=1000):
    """Replay a skill on ``n_steps`` evenly spaced progress values.

    Both DMPs are integrated once over their full length with
    ``n_integrate`` Euler steps. Sample ``k`` has progress
    ``lam = k / (n_steps - 1)``, reads the position at the matching arc
    length and the orientation at the matching geodesic length, and the force
    at the orientation phase of that same geodesic length.

    Parameters
    ----------
    bundle : SkillBundle
    n_steps : int
        Number of output samples, at least 2 (start and goal).
    speed_profile : callable, optional
        Path speed ``v(lam) > 0`` in m/s. Only the timestamps depend on it.
    """
    if n_steps < 2:
        raise ValueError("n_steps must be >= 2")
    lam = np.arange(n_steps) / (n_steps - 1)
    s_frac = np.interp(lam, bundle.lam_knots, bundle.s_frac)
    g_frac = np.interp(lam, bundle.lam_knots, bundle.g_frac)

    al = bundle.al_model
    pos = generate_al_dmp(al, n_steps=n_integrate)
    y = np.column_stack([np.interp(s_frac * al.L, pos.s, col) for col in pos.y.T])

    if bundle.geo_model is None:
        q = np.repeat(bundle.q_const[np.newaxis], n_steps, axis=0)
        alpha_x = al.alpha_x
    else:
        geo = bundle.geo_model
        ori = generate_geo_dmp(geo, n_steps=n_integrate)
        q = interpolate_sequence(ori.g, ori.q, g_frac * geo.L)
        alpha_x = geo.alpha_x
    x = basis.phase(g_frac, alpha_x)
    f = query_force_kernels(bundle.force_model, x)

    traj = SyncTrajectory.from_samples(lam, y, q, f)
    t = None if speed_profile is None else _timestamps(traj.s_cum, lam, speed_profile)
    return SyncTrajectory(lam=traj.lam, y=traj.y, q=traj.q, f=traj.f, s_cum=traj.s_cum,
                          g_cum=traj.g_cum, t=t, phase_ori=x, phase_force=x.copy())


# --- evaluation --------------------------------------------------------------

def resample(traj, lam):
    """Interpolate a trajectory at new progress values."""
    lam = np.asarray(lam, dtype=float)
    y = np.column_stack([np.interp(lam, traj.lam, col) for col in traj.y.T])
    q = interpolate_sequence(traj.lam, traj.q, lam)
    f = np.interp(lam, traj.lam, traj.f)
    return SyncTrajectory.from_samples(lam, y, q, f)


def evaluate(generated, truth, allow_resample=True):
    """Per-sample position, orientation and force errors.

    Orientation error is the geodesic distance ``2 |log(q1 * conj(q2))|``,
    taken on the shorter side of the double cover. When the lengths differ,
    ``truth`` is resampled at the progress values of ``generated``.

    Raises
    ------
    LengthMismatch
        If the lengths differ and ``allow_resample`` is False.
    """
    if len(generated) != len(truth):
        if not allow_resample:
            raise LengthMismatch(f"{len(generated)} vs {len(truth)} samples")
        truth = resample(truth, generated.lam)
    dp = np.linalg.norm(generated.y - truth.y, axis=1)
    d = quat_distance(generated.q, truth.q)
    do = np.minimum(d, 2.0 * np.pi - d)
    df = generated.f - truth.f
    return ErrorReport(pos_rms=float(np.sqrt(np.mean(dp**2))), pos_max=float(dp.max()),
                       ori_rms=float(np.sqrt(np.mean(do**2))), ori_max=float(do.max()),
                       force_rms=float(np.sqrt(np.mean(df**2))))


def truth_reference(truth, chart, start_uv, end_uv, n_u=100):
    """Analytic counterpart of :func:`generate_reference` on a synthetic surface."""
    a = np.asarray(start_uv, dtype=float)
    b = np.asarray(end_uv, dtype=float)
    lam = np.arange(n_u + 1) / n_u
    xy = chart.to_xy(a + lam[:, np.newaxis] * (b - a))
    x, yy = xy[:, 0], xy[:, 1]
    y = np.column_stack([x, yy, truth.height(x, yy)])
    return SyncTrajectory.from_samples(lam, y, truth.orientation(x, yy), truth.force(x, yy))

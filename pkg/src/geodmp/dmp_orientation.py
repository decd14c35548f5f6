"""Geodesic-length DMPs (Geo-DMPs) for orientation on S^3.

The orientation analogue of the arc-length DMP uses the accumulated geodesic
length ``g`` of the orientation path instead of time::

    L eta' = alpha_z (beta_z 2 log(q_g * conj(q)) - eta) + f_q(x)
    L q'   = 1/2 eta * q
    L x'   = -alpha_x x

``eta`` is the scaled angular rate ``L * dq/dg`` expressed as a tangent
vector. Demonstrations are differentiated numerically in the geodesic domain,
so the learned model carries no information about execution speed.

A plain time-based quaternion DMP is included as a baseline for comparisons.
"""
from dataclasses import dataclass

import numpy as np

from . import basis
from .dmp_position import ALPHA_X, ALPHA_Z, BETA_Z, _retarget
from .errors import DegenerateDemo, DegenerateGoal, InvalidSpeed
from .quaternion import (
    geodesic_length_series,
    interpolate_sequence,
    make_continuous,
    normalize,
    quat_conj,
    quat_distance,
    quat_exp,
    quat_log,
    quat_mul,
)

EPS_GEODESIC = 1e-6
EPS_STEP = 1e-8
EPS_GOAL = 1e-4
N_FIT = 200


@dataclass(frozen=True)
class OrientationSeries:
    """Orientation samples indexed by cumulative geodesic length.

    Attributes
    ----------
    g : array, shape (n,)
        Cumulative geodesic length (radians), ``g[0] = 0``.
    q : array, shape (n, 4)
    eta : array, shape (n, 3)
        Tangent rate per unit geodesic length; unit norm for a demo.
    deta : array, shape (n, 3)
        Derivative of ``eta`` with respect to ``g``.
    """
    g: np.ndarray
    q: np.ndarray
    eta: np.ndarray
    deta: np.ndarray

    @property
    def L(self):
        return float(self.g[-1])


@dataclass(frozen=True)
class GeoDmpModel:
    alpha_z: float
    beta_z: float
    alpha_x: float
    L: float
    q0: np.ndarray
    qg: np.ndarray
    eta0: np.ndarray  # unit-speed tangent at the start of the demo
    weights: np.ndarray
    centers: np.ndarray
    widths: np.ndarray
    eps_goal: float = EPS_GOAL


@dataclass(frozen=True)
class TimeQuatDmpModel:
    alpha_z: float
    beta_z: float
    alpha_x: float
    tau: float
    q0: np.ndarray
    qg: np.ndarray
    omega0: np.ndarray  # angular rate (tangent units per second) at t = 0
    weights: np.ndarray
    centers: np.ndarray
    widths: np.ndarray
    eps_goal: float = EPS_GOAL


def _merge_stationary(qs, eps_step):
    """Drop samples closer than ``eps_step`` to the last kept one."""
    kept = [0]
    for k in range(1, len(qs)):
        if quat_distance(qs[k], qs[kept[-1]]) > eps_step:
            kept.append(k)
    if kept[-1] != len(qs) - 1:
        if len(kept) > 1:
            kept[-1] = len(qs) - 1
        else:
            kept.append(len(qs) - 1)
    return qs[kept]


def _node_rates(knots, qs):
    """Tangent rate per unit of ``knots`` at every sample.

    Rates on each interval are ``2 log(q_{k+1} * conj(q_k)) / dk``; interior
    nodes take the second-order weighted average of the two neighbouring
    intervals, end nodes the adjacent interval.
    """
    dk = np.diff(knots)
    mid = 2.0 * quat_log(quat_mul(qs[1:], quat_conj(qs[:-1]))) / dk[:, np.newaxis]
    rates = np.empty((len(qs), 3))
    rates[0], rates[-1] = mid[0], mid[-1]
    if len(qs) > 2:
        a, b = dk[:-1, np.newaxis], dk[1:, np.newaxis]
        rates[1:-1] = (mid[:-1] * b + mid[1:] * a) / (a + b)
    return rates


def estimate_orientation_series(qs, n_fit=N_FIT, eps_geodesic=EPS_GEODESIC, eps_step=EPS_STEP):
    """Differentiate an orientation demo with respect to geodesic length.

    Parameters
    ----------
    qs : array-like, shape (n, 4)
    n_fit : int or None
        Resample uniformly in ``g`` to this many samples before
        differentiating. Dense demos otherwise give oscillating ``eta'``.
        ``None`` keeps the (merged) demo samples.
    eps_geodesic : float
        Minimum total geodesic length.
    eps_step : float
        Steps shorter than this are merged away before differentiating.

    Raises
    ------
    DegenerateDemo
        If the demo barely rotates or too few distinct samples remain.
    """
    qs = make_continuous(normalize(np.asarray(qs, dtype=float)))
    if qs.ndim != 2 or len(qs) < 2:
        raise DegenerateDemo("need at least two orientation samples")
    g, L = geodesic_length_series(qs)
    if L < eps_geodesic:
        raise DegenerateDemo(f"geodesic length {L:.3g} below {eps_geodesic:g}")
    qs = _merge_stationary(qs, eps_step)
    g, L = geodesic_length_series(qs)
    if n_fit is not None:
        if n_fit < 3:
            raise ValueError("n_fit must be >= 3")
        g_new = np.linspace(0.0, L, n_fit)
        qs = interpolate_sequence(g, qs, g_new)
        g = g_new
    elif len(qs) < 3:
        raise DegenerateDemo("need at least three distinct orientation samples")
    eta = _node_rates(g, qs)
    deta = np.gradient(eta, g, axis=0, edge_order=2)
    return OrientationSeries(g=g, q=qs, eta=eta, deta=deta)


def _attractor(q_goal, q):
    return 2.0 * quat_log(quat_mul(q_goal, quat_conj(q)))


def _goal_vector(q0, qg):
    return quat_log(quat_mul(qg, quat_conj(q0)))


def fit_geo_dmp(series, n_basis=30, alpha_z=ALPHA_Z, beta_z=BETA_Z, alpha_x=ALPHA_X,
                eps_goal=EPS_GOAL, solver="lstsq", strict=True):
    """Learn Geo-DMP forcing weights from an :class:`OrientationSeries`.

    The forcing target is
    ``L (L eta') - alpha_z (beta_z 2 log(q_g * conj(q_k)) - L eta)``, scaled
    by ``diag(log(q_g * conj(q_0)))^-1`` and regressed on the phase
    ``x = exp(-alpha_x g / L)``.

    With ``strict=False`` a demo that returns to its start orientation is
    accepted; its goal scaling then uses the ``+-eps_goal`` replacement, so
    it is only replayed faithfully between the trained boundaries.

    Raises
    ------
    DegenerateGoal
        If the demo ends where it started although it rotates in between,
        and ``strict`` is set.
    """
    L = series.L
    q0, qg = series.q[0], series.q[-1]
    goal = _goal_vector(q0, qg)
    if strict and L > 0.0 and np.all(np.abs(goal) < eps_goal):
        raise DegenerateGoal("start and goal orientations coincide")
    scale = basis.goal_scaling(goal, eps_goal)
    x = basis.phase(series.g / L, alpha_x)
    z = L * series.eta
    forcing = L * (L * series.deta) - alpha_z * (beta_z * _attractor(qg, series.q) - z)
    c = basis.centers(n_basis, alpha_x)
    h = basis.widths(c)
    w = basis.fit_weights(x, forcing / scale, c, h, solver)
    return GeoDmpModel(alpha_z=alpha_z, beta_z=beta_z, alpha_x=alpha_x, L=L,
                       q0=q0.copy(), qg=qg.copy(), eta0=series.eta[0].copy(),
                       weights=w, centers=c, widths=h, eps_goal=eps_goal)


def generate_geo_dmp(model, q_start=None, q_goal=None, n_steps=1000, g_end=None):
    """Integrate a Geo-DMP in the geodesic-length domain.

    Each explicit Euler step of size ``dg = L / n_steps`` applies
    ``q <- exp(dg eta / (2 L)) * q`` followed by ``eta <- eta + dg eta'``.
    The forcing term is dropped beyond ``g = L``.

    Returns
    -------
    OrientationSeries
        Here ``eta`` is the DMP state divided by ``L`` (unit speed when the
        demo is reproduced) and ``deta`` its derivative.
    """
    if n_steps < 2:
        raise ValueError("n_steps must be >= 2")
    q_start = model.q0 if q_start is None else normalize(q_start)
    q_goal = model.qg if q_goal is None else normalize(q_goal)
    L = model.L
    dg = L / n_steps
    g_end = L if g_end is None else float(g_end)
    total = int(round(g_end / dg))

    new_scale = basis.goal_scaling(_goal_vector(q_start, q_goal), model.eps_goal)
    g = dg * np.arange(total + 1)
    x = basis.phase(g / L, model.alpha_x)
    forcing = new_scale * basis.normalized_sum(x, model.weights, model.centers,
                                               model.widths) * x[:, np.newaxis]
    forcing[g > L * (1.0 + 1e-12)] = 0.0

    az, bz = model.alpha_z, model.beta_z
    q = np.empty((total + 1, 4))
    z = np.empty((total + 1, 3))
    dz = np.empty((total + 1, 3))
    q[0] = q_start
    z[0] = L * _retarget(_goal_vector(model.q0, model.qg), _goal_vector(q_start, q_goal),
                        model.eps_goal) * model.eta0
    for k in range(total + 1):
        dz[k] = (az * (bz * _attractor(q_goal, q[k]) - z[k]) + forcing[k]) / L
        if k < total:
            q[k + 1] = quat_mul(quat_exp(dg * z[k] / (2.0 * L)), q[k])
            z[k + 1] = z[k] + dg * dz[k]
    return OrientationSeries(g=g, q=q, eta=z / L, deta=dz / L)


def time_playback(series, speed_profile, dt, max_steps=1_000_000):
    """Replay an orientation series under a geodesic speed profile.

    Parameters
    ----------
    series : OrientationSeries
    speed_profile : callable
        Maps geodesic length ``g`` to the rate ``dg/dt`` in rad/s.
    dt : float
        Controller period in seconds.

    Returns
    -------
    t : array, shape (m,)
    q : array, shape (m, 4)
    g : array, shape (m,)
        Geodesic length reached at each timestamp; the path itself only
        depends on ``g``, never on the speed profile.

    Raises
    ------
    InvalidSpeed
        If the profile returns a nonpositive rate.
    """
    L = series.L
    g_values = [0.0]
    # accumulated rounding must not cost an extra, nearly empty step
    done = L * (1.0 - 1e-12)
    while g_values[-1] < done:
        rate = float(speed_profile(g_values[-1]))
        if not rate > 0.0:
            raise InvalidSpeed(f"speed {rate!r} at g = {g_values[-1]:.6g}")
        g_next = g_values[-1] + rate * dt
        g_values.append(L if g_next >= done else g_next)
        if len(g_values) > max_steps:
            raise InvalidSpeed("speed profile too slow to finish the path")
    g_values = np.asarray(g_values)
    t = dt * np.arange(len(g_values))
    return t, interpolate_sequence(series.g, series.q, g_values), g_values


def fit_time_quat_dmp(qs, timestamps, n_basis=30, alpha_z=ALPHA_Z, beta_z=BETA_Z,
                      alpha_x=ALPHA_X, eps_goal=EPS_GOAL, solver="lstsq"):
    """Learn a time-based quaternion DMP (baseline).

    ``tau eta_dot = alpha_z (beta_z 2 log(q_g * conj(q)) - eta) + f(x)``,
    ``tau q_dot = 1/2 eta * q`` and ``tau x_dot = -alpha_x x``.
    """
    qs = make_continuous(normalize(np.asarray(qs, dtype=float)))
    t = np.asarray(timestamps, dtype=float)
    if len(qs) < 3 or len(t) != len(qs):
        raise DegenerateDemo("need at least three timestamped orientations")
    if geodesic_length_series(qs)[1] < EPS_GEODESIC:
        raise DegenerateDemo("demonstration does not rotate")
    if np.any(np.diff(t) <= 0.0):
        raise ValueError("timestamps must be strictly increasing")
    t = t - t[0]
    tau = t[-1]
    q0, qg = qs[0], qs[-1]
    goal = _goal_vector(q0, qg)
    if np.all(np.abs(goal) < eps_goal):
        raise DegenerateGoal("start and goal orientations coincide")
    scale = basis.goal_scaling(goal, eps_goal)
    omega = _node_rates(t, qs)
    domega = np.gradient(omega, t, axis=0, edge_order=2)
    x = basis.phase(t / tau, alpha_x)
    forcing = tau**2 * domega - alpha_z * (beta_z * _attractor(qg, qs) - tau * omega)
    c = basis.centers(n_basis, alpha_x)
    h = basis.widths(c)
    w = basis.fit_weights(x, forcing / scale, c, h, solver)
    return TimeQuatDmpModel(alpha_z=alpha_z, beta_z=beta_z, alpha_x=alpha_x, tau=tau,
                            q0=q0.copy(), qg=qg.copy(), omega0=omega[0].copy(),
                            weights=w, centers=c, widths=h, eps_goal=eps_goal)


def generate_time_quat_dmp(model, q_start=None, q_goal=None, dt=None, n_steps=1000):
    """Euler-integrate the time-based baseline; returns ``(t, q)``."""
    q_start = model.q0 if q_start is None else normalize(q_start)
    q_goal = model.qg if q_goal is None else normalize(q_goal)
    tau = model.tau
    dt = tau / n_steps if dt is None else float(dt)
    new_scale = basis.goal_scaling(_goal_vector(q_start, q_goal), model.eps_goal)
    t = dt * np.arange(n_steps + 1)
    x = basis.phase(t / tau, model.alpha_x)
    forcing = new_scale * basis.normalized_sum(x, model.weights, model.centers,
                                               model.widths) * x[:, np.newaxis]
    forcing[t > tau * (1.0 + 1e-12)] = 0.0

    az, bz = model.alpha_z, model.beta_z
    q = np.empty((n_steps + 1, 4))
    q[0] = q_start
    eta = tau * _retarget(_goal_vector(model.q0, model.qg), _goal_vector(q_start, q_goal),
                         model.eps_goal) * model.omega0
    for k in range(n_steps):
        deta = (az * (bz * _attractor(q_goal, q[k]) - eta) + forcing[k]) / tau
        q[k + 1] = quat_mul(quat_exp(dt * eta / (2.0 * tau)), q[k])
        eta = eta + dt * deta
    return t, q

"""Arc-length and time-based DMPs for 3D position trajectories.

The arc-length DMP (AL-DMP) replaces time by the path arc length ``s``::

    L z' = alpha_z (beta_z (g - y) - z) + F(x)
    L y' = z
    L x' = -alpha_x x

with ``F(x) = diag(g - y0) (sum w_i psi_i(x) / sum psi_i(x)) x``. Because
nothing in the system refers to time, the generated path does not depend on
how fast the demonstration was executed.
"""
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from . import basis
from .errors import DegenerateDemo, DegenerateGoal

ALPHA_Z = 25.0
BETA_Z = ALPHA_Z / 4.0
ALPHA_X = 4.0
EPS_LENGTH = 1e-6
EPS_GOAL = 1e-4


@dataclass(frozen=True)
class PositionSeries:
    """Positions sampled uniformly in arc length.

    Attributes
    ----------
    s : array, shape (n,)
        Cumulative arc length, ``s[0] = 0``.
    y : array, shape (n, 3)
    dy, ddy : array, shape (n, 3)
        First and second derivatives with respect to ``s``.
    """
    s: np.ndarray
    y: np.ndarray
    dy: np.ndarray
    ddy: np.ndarray

    @property
    def L(self):
        return float(self.s[-1])


@dataclass(frozen=True)
class AlDmpModel:
    alpha_z: float
    beta_z: float
    alpha_x: float
    L: float
    y0: np.ndarray
    g: np.ndarray
    dy0: np.ndarray  # unit tangent at the start of the demo
    weights: np.ndarray
    centers: np.ndarray
    widths: np.ndarray
    eps_goal: float = EPS_GOAL


@dataclass(frozen=True)
class ClassicalDmpModel:
    alpha_z: float
    beta_z: float
    alpha_x: float
    tau: float
    y0: np.ndarray
    g: np.ndarray
    yd0: np.ndarray  # initial velocity of the demo
    weights: np.ndarray
    centers: np.ndarray
    widths: np.ndarray
    eps_goal: float = EPS_GOAL


def chord_lengths(positions):
    positions = np.asarray(positions, dtype=float)
    steps = np.linalg.norm(np.diff(positions, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(steps)])


def arc_length_resample(positions, timestamps=None, n_samples=None, eps_length=EPS_LENGTH):
    """Reparameterize a demonstration by arc length.

    The cumulative chord length of the samples gives the arc length. A cubic
    spline through the samples (in that parameter) is evaluated on a uniform
    grid, and both derivatives come from central finite differences.

    Parameters
    ----------
    positions : array-like, shape (n, 3)
    timestamps : array-like, shape (n,), optional
        Only checked for monotonicity; arc length ignores timing.
    n_samples : int, optional
        Size of the uniform grid, defaults to ``n``.

    Raises
    ------
    DegenerateDemo
        If fewer than two samples are given or the path is shorter than
        ``eps_length``.
    """
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 2 or len(positions) < 2:
        raise DegenerateDemo("need at least two position samples")
    if timestamps is not None and np.any(np.diff(np.asarray(timestamps, dtype=float)) < 0.0):
        raise ValueError("timestamps must be nondecreasing")
    s_raw = chord_lengths(positions)
    L = s_raw[-1]
    if L < eps_length:
        raise DegenerateDemo(f"path length {L:.3g} below {eps_length:g}")
    n_samples = len(positions) if n_samples is None else int(n_samples)
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")

    keep = np.concatenate([[True], np.diff(s_raw) > 0.0])
    s_knots, y_knots = s_raw[keep], positions[keep]
    s = np.linspace(0.0, L, n_samples)
    if len(s_knots) >= 4:
        y = CubicSpline(s_knots, y_knots, axis=0)(s)
    else:
        y = np.column_stack([np.interp(s, s_knots, col) for col in y_knots.T])
    y[0], y[-1] = positions[0], positions[-1]
    ds = s[1] - s[0]
    edge = 2 if n_samples >= 3 else 1
    dy = np.gradient(y, ds, axis=0, edge_order=edge)
    ddy = np.gradient(dy, ds, axis=0, edge_order=edge)
    return PositionSeries(s=s, y=y, dy=dy, ddy=ddy)


def _check_goal(delta, eps):
    if np.all(np.abs(delta) < eps):
        raise DegenerateGoal("start and goal coincide in every dimension")


def fit_al_dmp(series, n_basis=50, alpha_z=ALPHA_Z, beta_z=BETA_Z, alpha_x=ALPHA_X,
               eps_goal=EPS_GOAL, solver="lstsq"):
    """Learn AL-DMP forcing weights from an arc-length series.

    The forcing target at each sample is
    ``L^2 y'' - alpha_z (beta_z (g - y) - L y')`` divided by the goal
    scaling ``g - y0``, regressed against the phase ``x = exp(-alpha_x s / L)``.

    ``solver="lstsq"`` solves the normalized basis system jointly;
    ``solver="lwr"`` fits each basis function on its own, which is cheaper but
    noticeably less accurate where the targets change quickly with phase.

    Raises
    ------
    DegenerateGoal
        If start and goal coincide in every dimension, including a constant
        series.
    """
    L = series.L
    y0, g = series.y[0], series.y[-1]
    delta = g - y0
    _check_goal(delta, eps_goal)
    scale = basis.goal_scaling(delta, eps_goal)

    x = basis.phase(series.s / L, alpha_x)
    forcing = L**2 * series.ddy - alpha_z * (beta_z * (g - series.y) - L * series.dy)
    c = basis.centers(n_basis, alpha_x)
    h = basis.widths(c)
    w = basis.fit_weights(x, forcing / scale, c, h, solver)
    dy0 = series.dy[0] / np.linalg.norm(series.dy[0])
    return AlDmpModel(alpha_z=alpha_z, beta_z=beta_z, alpha_x=alpha_x, L=L,
                      y0=y0.copy(), g=g.copy(), dy0=dy0, weights=w,
                      centers=c, widths=h, eps_goal=eps_goal)


def _retarget(model_delta, new_delta, eps):
    """Per-dimension ratio of the new goal scaling to the trained one.

    The demo's initial velocity is carried over with this ratio. A new goal
    on top of the start has nothing to scale, so the system starts at rest.
    """
    new_delta = np.asarray(new_delta, dtype=float)
    if np.all(np.abs(new_delta) < eps):
        return np.zeros_like(new_delta)
    return basis.goal_scaling(new_delta, eps) / basis.goal_scaling(model_delta, eps)


def generate_al_dmp(model, y_start=None, g_new=None, n_steps=1000, s_end=None):
    """Integrate an AL-DMP in the arc-length domain.

    Explicit Euler with step ``L / n_steps``. The forcing term is switched
    off beyond ``s = L`` so that longer horizons settle onto the goal.

    Parameters
    ----------
    model : AlDmpModel
    y_start, g_new : array-like, shape (3,), optional
        New start and goal, defaulting to the trained ones.
    n_steps : int
        Number of steps covering ``[0, L]``.
    s_end : float, optional
        Integration horizon, ``L`` by default.

    Returns
    -------
    PositionSeries
        ``dy`` and ``ddy`` hold ``z / L`` and ``z' / L``.
    """
    if n_steps < 2:
        raise ValueError("n_steps must be >= 2")
    y_start = model.y0 if y_start is None else np.asarray(y_start, dtype=float)
    g_new = model.g if g_new is None else np.asarray(g_new, dtype=float)
    L = model.L
    ds = L / n_steps
    s_end = L if s_end is None else float(s_end)
    total = int(round(s_end / ds))

    ratio = _retarget(model.g - model.y0, g_new - y_start, model.eps_goal)
    scale = basis.goal_scaling(g_new - y_start, model.eps_goal)
    s = ds * np.arange(total + 1)
    x = basis.phase(s / L, model.alpha_x)
    shape = basis.normalized_sum(x, model.weights, model.centers, model.widths)
    forcing = scale * shape * x[:, np.newaxis]
    forcing[s > L * (1.0 + 1e-12)] = 0.0

    az, bz = model.alpha_z, model.beta_z
    y = np.empty((total + 1, 3))
    z = np.empty((total + 1, 3))
    dz = np.empty((total + 1, 3))
    y[0] = y_start
    z[0] = L * ratio * model.dy0
    for k in range(total + 1):
        dz[k] = (az * (bz * (g_new - y[k]) - z[k]) + forcing[k]) / L
        if k < total:
            y[k + 1] = y[k] + ds * z[k] / L
            z[k + 1] = z[k] + ds * dz[k]
    return PositionSeries(s=s, y=y, dy=z / L, ddy=dz / L)


def fit_classical_dmp(positions, timestamps, n_basis=50, alpha_z=ALPHA_Z, beta_z=BETA_Z,
                      alpha_x=ALPHA_X, eps_goal=EPS_GOAL, solver="lstsq"):
    """Learn a time-based DMP (``tau z' = ...``, ``tau x' = -alpha_x x``)."""
    y = np.asarray(positions, dtype=float)
    t = np.asarray(timestamps, dtype=float)
    if len(y) < 3 or len(t) != len(y):
        raise DegenerateDemo("need at least three timestamped samples")
    if np.any(np.diff(t) <= 0.0):
        raise ValueError("timestamps must be strictly increasing")
    if chord_lengths(y)[-1] < EPS_LENGTH:
        raise DegenerateDemo("demonstration does not move")
    t = t - t[0]
    tau = t[-1]
    yd = np.gradient(y, t, axis=0, edge_order=2)
    ydd = np.gradient(yd, t, axis=0, edge_order=2)
    y0, g = y[0], y[-1]
    _check_goal(g - y0, eps_goal)
    scale = basis.goal_scaling(g - y0, eps_goal)
    x = basis.phase(t / tau, alpha_x)
    forcing = tau**2 * ydd - alpha_z * (beta_z * (g - y) - tau * yd)
    c = basis.centers(n_basis, alpha_x)
    h = basis.widths(c)
    w = basis.fit_weights(x, forcing / scale, c, h, solver)
    return ClassicalDmpModel(alpha_z=alpha_z, beta_z=beta_z, alpha_x=alpha_x, tau=tau,
                             y0=y0.copy(), g=g.copy(), yd0=yd[0].copy(), weights=w,
                             centers=c, widths=h, eps_goal=eps_goal)


def generate_classical_dmp(model, y_start=None, g_new=None, dt=None, n_steps=1000):
    """Euler-integrate a time-based DMP; returns positions, shape (n_steps + 1, 3)."""
    y_start = model.y0 if y_start is None else np.asarray(y_start, dtype=float)
    g_new = model.g if g_new is None else np.asarray(g_new, dtype=float)
    tau = model.tau
    dt = tau / n_steps if dt is None else float(dt)
    ratio = _retarget(model.g - model.y0, g_new - y_start, model.eps_goal)
    scale = basis.goal_scaling(g_new - y_start, model.eps_goal)
    t = dt * np.arange(n_steps + 1)
    x = basis.phase(t / tau, model.alpha_x)
    forcing = scale * basis.normalized_sum(x, model.weights, model.centers,
                                           model.widths) * x[:, np.newaxis]
    forcing[t > tau * (1.0 + 1e-12)] = 0.0

    az, bz = model.alpha_z, model.beta_z
    y = np.empty((n_steps + 1, 3))
    y[0] = y_start
    z = tau * ratio * model.yd0
    for k in range(n_steps):
        zd = (az * (bz * (g_new - y[k]) - z) + forcing[k]) / tau
        y[k + 1] = y[k] + dt * z / tau
        z = z + dt * zd
    return y

"""Unit quaternion algebra on S^3.

Quaternions are numpy arrays with the scalar part first, ``(w, x, y, z)``.
Every function accepts a single quaternion of shape ``(4,)`` or a stack of
shape ``(..., 4)`` and broadcasts over the leading axes. Tangent vectors at
the identity are 3-vectors holding the half rotation vector, so that
``quat_exp(0.5 * theta * axis)`` rotates by ``theta`` about ``axis``.
"""
import numpy as np

from .errors import EmptySequence, NoSamples, NotConverged

#: Norm of the imaginary part below which ``quat_log`` returns zero.
EPS_U = 1e-12

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


def normalize(q):
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def quat_mul(q1, q2):
    """Hamilton product ``q1 * q2``, renormalized to unit length."""
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    w1, u1 = q1[..., :1], q1[..., 1:]
    w2, u2 = q2[..., :1], q2[..., 1:]
    w = w1 * w2 - np.sum(u1 * u2, axis=-1, keepdims=True)
    u = w1 * u2 + w2 * u1 + np.cross(u1, u2)
    return normalize(np.concatenate([w, u], axis=-1))


def quat_conj(q):
    q = np.asarray(q, dtype=float)
    return np.concatenate([q[..., :1], -q[..., 1:]], axis=-1)


def quat_log(q):
    """Logarithmic map of a unit quaternion to the tangent space at identity.

    Returns ``arccos(w) * u / |u|``, or the zero vector when ``|u|`` is below
    :data:`EPS_U`. The angle is evaluated as ``arctan2(|u|, w)``, which equals
    ``arccos(w)`` on S^3 but keeps full precision near the identity.

    Parameters
    ----------
    q : array-like, shape (..., 4)

    Returns
    -------
    a : array, shape (..., 3)
        Tangent vector with norm in ``[0, pi]``.
    """
    q = np.asarray(q, dtype=float)
    w = q[..., 0]
    u = q[..., 1:]
    nu = np.linalg.norm(u, axis=-1)
    ok = nu >= EPS_U
    angle = np.arctan2(nu, w)
    scale = np.where(ok, angle / np.where(ok, nu, 1.0), 0.0)
    return u * scale[..., np.newaxis]


def quat_exp(a):
    """Exponential map from the tangent space at identity onto S^3.

    ``cos|a| + sin|a| a/|a|``; the zero vector maps to the identity.
    """
    a = np.asarray(a, dtype=float)
    theta = np.linalg.norm(a, axis=-1, keepdims=True)
    # sinc(theta/pi) = sin(theta)/theta, exactly 1 at theta = 0
    return np.concatenate([np.cos(theta), np.sinc(theta / np.pi) * a], axis=-1)


def quat_distance(q1, q2):
    """Geodesic distance on S^3, ``2 |log(q1 * conj(q2))|``.

    An exactly antipodal pair (relative quaternion ``-1``) gets ``2 pi``, the
    branch in which the logarithm would otherwise return zero. The result
    lies in ``[0, 2 pi]`` and equals the rotation angle between ``q1`` and
    ``q2`` when they lie in the same hemisphere.
    """
    rel = quat_mul(q1, quat_conj(q2))
    nu = np.linalg.norm(rel[..., 1:], axis=-1)
    antipodal = (nu < EPS_U) & (rel[..., 0] < 0.0)
    d = 2.0 * np.linalg.norm(quat_log(rel), axis=-1)
    return np.where(antipodal, 2.0 * np.pi, d)


def make_continuous(qs):
    """Flip signs along a sequence so that consecutive dot products are >= 0."""
    qs = np.array(qs, dtype=float)
    if len(qs) < 2:
        return qs
    dots = np.sum(qs[1:] * qs[:-1], axis=-1)
    flips = np.concatenate([[1.0], np.cumprod(np.where(dots < 0.0, -1.0, 1.0))])
    return qs * flips[:, np.newaxis]


def slerp(q0, q1, t):
    """Geodesic interpolation ``exp(t log(q1 * conj(q0))) * q0``."""
    t = np.asarray(t, dtype=float)
    step = quat_log(quat_mul(q1, quat_conj(q0)))
    return quat_mul(quat_exp(t[..., np.newaxis] * step), q0)


def interpolate_sequence(knots, qs, at):
    """Piecewise geodesic interpolation of ``qs`` sampled at ``knots``.

    ``knots`` must be nondecreasing; values of ``at`` outside the knot range
    are clamped to the end samples.
    """
    knots = np.asarray(knots, dtype=float)
    qs = np.asarray(qs, dtype=float)
    at = np.clip(np.atleast_1d(np.asarray(at, dtype=float)), knots[0], knots[-1])
    if len(knots) == 1:
        return np.repeat(qs[:1], len(at), axis=0)
    idx = np.clip(np.searchsorted(knots, at, side="right") - 1, 0, len(knots) - 2)
    span = knots[idx + 1] - knots[idx]
    frac = np.where(span > 0.0, (at - knots[idx]) / np.where(span > 0.0, span, 1.0), 0.0)
    return slerp(qs[idx], qs[idx + 1], frac)


def geodesic_length_series(qs):
    """Cumulative geodesic length along an orientation sequence.

    Parameters
    ----------
    qs : array-like, shape (n, 4)
        Orientation samples. Signs are made continuous first, so that the
        double cover cannot introduce spurious ``2 pi`` steps.

    Returns
    -------
    cumulative : array, shape (n,)
        ``cumulative[0] = 0`` and ``cumulative[k]`` is the summed distance of
        the first ``k`` steps.
    total : float
        Total geodesic length, the last cumulative value.
    """
    qs = np.asarray(qs, dtype=float)
    if qs.ndim != 2 or len(qs) == 0:
        raise EmptySequence("need at least one quaternion")
    qs = make_continuous(qs)
    steps = quat_distance(qs[1:], qs[:-1]) if len(qs) > 1 else np.zeros(0)
    cumulative = np.concatenate([[0.0], np.cumsum(steps)])
    return cumulative, float(cumulative[-1])


def mean_objective(qs, weights, q_mean):
    """Weighted sum of squared distances ``sum w_i |2 log(q_i * conj(q_mean))|^2``."""
    rel = quat_mul(np.asarray(qs, dtype=float), quat_conj(q_mean))
    d = 2.0 * np.linalg.norm(quat_log(rel), axis=-1)
    return float(np.sum(np.asarray(weights, dtype=float) * d**2))


def intrinsic_mean(qs, weights=None, tol=1e-10, max_iter=100):
    """Weighted intrinsic (Karcher) mean of unit quaternions.

    Minimizes ``sum w_i |2 log(q_i * conj(q_D))|^2`` over ``q_D`` by the
    fixed-point iteration ``q_D <- exp(delta) * q_D`` with
    ``delta = sum w_i log(q_i * conj(q_D)) / sum w_i``.

    Parameters
    ----------
    qs : array-like, shape (n, 4)
        Samples; they should form a single-hemisphere cluster.
    weights : array-like, shape (n,), optional
        Nonnegative weights, uniform by default. Zero-weight samples are
        dropped before iterating.
    tol : float
        Stop once ``|delta|`` (the Riemannian gradient up to a constant
        factor) falls below this value.
    max_iter : int
        Iteration budget.

    Returns
    -------
    q_mean : array, shape (4,)

    Raises
    ------
    NoSamples
        If no sample carries positive weight.
    NotConverged
        If ``max_iter`` is reached; the exception holds the last iterate.
    """
    qs = np.atleast_2d(np.asarray(qs, dtype=float))
    if weights is None:
        weights = np.ones(len(qs))
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0.0):
        raise ValueError("weights must be nonnegative")
    keep = weights > 0.0
    if len(qs) == 0 or not np.any(keep):
        raise NoSamples("no sample with positive weight")
    qs, weights = normalize(qs[keep]), weights[keep]

    q_mean = qs[np.argmax(weights)]
    # align every sample with the starting iterate (q and -q are one rotation)
    qs = np.where((qs @ q_mean)[:, np.newaxis] < 0.0, -qs, qs)
    total = weights.sum()
    for _ in range(max_iter):
        delta = weights @ quat_log(quat_mul(qs, quat_conj(q_mean))) / total
        if np.linalg.norm(delta) < tol:
            return q_mean
        q_mean = quat_mul(quat_exp(delta), q_mean)
    raise NotConverged(max_iter, q_mean)


def quat_from_axis_angle(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis, axis=-1, keepdims=True)
    return quat_exp(0.5 * np.asarray(angle, dtype=float)[..., np.newaxis] * axis)


def rotate_vector(q, v):
    """Rotate 3-vector(s) ``v`` by unit quaternion(s) ``q``."""
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    w, u = q[..., :1], q[..., 1:]
    t = 2.0 * np.cross(u, v)
    return v + w * t + np.cross(u, t)


def quat_from_two_vectors(a, b):
    """Minimal rotation taking direction ``a`` onto direction ``b``.

    When ``b`` is opposite to ``a`` the rotation is a half turn about the
    x-axis (or about y if ``a`` is itself along x).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a = a / np.linalg.norm(a, axis=-1, keepdims=True)
    b = b / np.linalg.norm(b, axis=-1, keepdims=True)
    a, b = np.broadcast_arrays(a, b)
    cos = np.sum(a * b, axis=-1, keepdims=True)
    q = np.concatenate([1.0 + cos, np.cross(a, b)], axis=-1)
    opposite = (1.0 + cos[..., 0]) < 1e-12
    if np.any(opposite):
        ex = np.broadcast_to([1.0, 0.0, 0.0], a.shape)
        ey = np.broadcast_to([0.0, 1.0, 0.0], a.shape)
        along_x = np.abs(a[..., :1]) > 0.9
        axis = np.where(along_x, ey, ex)
        axis = axis - np.sum(axis * a, axis=-1, keepdims=True) * a
        half_turn = np.concatenate([np.zeros_like(cos), axis], axis=-1)
        q = np.where(opposite[..., np.newaxis], half_turn, q)
    return normalize(q)

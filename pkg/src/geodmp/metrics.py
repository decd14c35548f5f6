"""Path comparison metrics."""
import numpy as np

from .quaternion import quat_distance


def euclidean(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b), axis=-1)


def discrete_frechet(P, Q, metric=euclidean):
    """Discrete Frechet distance between two sampled paths.

    The coupling recurrence is swept one anti-diagonal at a time, so only
    ``len(P) + len(Q)`` vectorized steps are needed.

    Parameters
    ----------
    P, Q : array, shape (n, d) and (m, d)
    metric : callable
        Broadcasting pointwise distance, e.g. :func:`euclidean` or
        :func:`geodmp.quaternion.quat_distance`.
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    n, m = len(P), len(Q)
    if n == 0 or m == 0:
        raise ValueError("paths must be nonempty")
    D = metric(P[:, np.newaxis], Q[np.newaxis, :])
    F = np.full((n, m), np.inf)
    F[0, 0] = D[0, 0]
    for k in range(1, n + m - 1):
        i = np.arange(max(0, k - m + 1), min(n, k + 1))
        j = k - i
        best = np.full(len(i), np.inf)
        up = i > 0
        best[up] = F[i[up] - 1, j[up]]
        left = j > 0
        best[left] = np.minimum(best[left], F[i[left], j[left] - 1])
        diag = up & left
        best[diag] = np.minimum(best[diag], F[i[diag] - 1, j[diag] - 1])
        F[i, j] = np.maximum(best, D[i, j])
    return float(F[-1, -1])


def quat_frechet(P, Q):
    return discrete_frechet(P, Q, quat_distance)

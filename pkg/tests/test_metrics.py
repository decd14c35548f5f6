import numpy as np
import pytest

from geodmp.metrics import discrete_frechet, quat_frechet
from geodmp.quaternion import quat_from_axis_angle


def brute_frechet(P, Q):
    n, m = len(P), len(Q)
    D = np.linalg.norm(P[:, None] - Q[None], axis=-1)
    F = np.full((n, m), np.inf)
    for i in range(n):
        for j in range(m):
            prev = 0.0 if i == j == 0 else min(
                F[i - 1, j] if i else np.inf, F[i, j - 1] if j else np.inf,
                F[i - 1, j - 1] if i and j else np.inf)
            F[i, j] = max(prev, D[i, j])
    return F[-1, -1]


def test_matches_recursive_definition():
    rng = np.random.default_rng(0)
    for n, m in [(1, 1), (1, 5), (7, 3), (20, 25)]:
        P, Q = rng.normal(size=(n, 2)), rng.normal(size=(m, 2))
        assert discrete_frechet(P, Q) == pytest.approx(brute_frechet(P, Q), abs=1e-15)


def test_offset_and_identity():
    P = np.column_stack([np.linspace(0, 1, 50), np.zeros(50)])
    assert discrete_frechet(P, P) == 0.0
    assert discrete_frechet(P, P + [0.0, 0.3]) == pytest.approx(0.3)


def test_quaternion_paths():
    a = quat_from_axis_angle([0.0, 0.0, 1.0], np.linspace(0.0, 1.0, 30))
    b = quat_from_axis_angle([0.0, 0.0, 1.0], np.linspace(0.0, 1.0, 30) ** 2)
    assert quat_frechet(a, a) == pytest.approx(0.0, abs=1e-7)
    assert 0.0 < quat_frechet(a, b) < 0.3


def test_empty_rejected():
    with pytest.raises(ValueError):
        discrete_frechet(np.zeros((0, 2)), np.zeros((3, 2)))

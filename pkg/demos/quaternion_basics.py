"""
Unit quaternions, distances and the intrinsic mean
==================================================

Orientations are (w, x, y, z) arrays. This walks through the log/exp maps,
the geodesic distance and a weighted average of a few nearby orientations.
"""
import numpy as np

from geodmp import (
    intrinsic_mean,
    quat_distance,
    quat_exp,
    quat_from_axis_angle,
    quat_log,
    slerp,
)

# a 90 degree turn about z; log gives half the rotation vector
q = quat_from_axis_angle([0.0, 0.0, 1.0], np.pi / 2)
print("q          =", np.round(q, 6))
print("log(q)     =", np.round(quat_log(q), 6))
print("exp(log q) =", np.round(quat_exp(quat_log(q)), 6))

# distance is the rotation angle between two orientations
p = quat_from_axis_angle([1.0, 0.0, 0.0], np.pi / 6)
print("d(q, p) = %.4f rad" % quat_distance(q, p))

# halfway along the shortest arc
mid = slerp(q, p, 0.5)
print("d(q, mid) = %.4f, d(mid, p) = %.4f" % (quat_distance(q, mid), quat_distance(mid, p)))

# three tool orientations around a surface normal, the closest weighted most
rng = np.random.default_rng(0)
axes = rng.normal(size=(3, 3))
samples = quat_from_axis_angle(axes / np.linalg.norm(axes, axis=1, keepdims=True),
                               np.deg2rad([5.0, 8.0, 12.0]))
weights = np.array([0.7, 0.2, 0.1])
mean = intrinsic_mean(samples, weights)
print("mean =", np.round(mean, 6))
print("distances to samples (deg):", np.round(np.rad2deg(quat_distance(mean, samples)), 3))

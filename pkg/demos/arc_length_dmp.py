"""
Position DMPs over arc length
=============================

A helix is demonstrated twice along the same path, once at constant speed and
once accelerating from rest. A time-based DMP learns two different motions;
the arc-length DMP learns the same path both times.
"""
import numpy as np

from geodmp import (
    arc_length_resample,
    discrete_frechet,
    fit_al_dmp,
    fit_classical_dmp,
    generate_al_dmp,
    generate_classical_dmp,
)


def helix(p):
    a = 4.0 * np.pi * p
    return np.column_stack([0.1 * np.cos(a), 0.1 * np.sin(a), 0.2 * p])


n, T = 400, 2.0
t = np.linspace(0.0, T, n)
steady = helix(t / T)
# same points in space, but progress grows with (t / T)^2
warped = helix((t / T) ** 2)

al_paths, cl_paths = [], []
for demo in (steady, warped):
    series = arc_length_resample(demo, n_samples=200)
    model = fit_al_dmp(series, n_basis=50)
    al_paths.append(generate_al_dmp(model).y)
    cl_paths.append(generate_classical_dmp(fit_classical_dmp(demo, t)))

L = series.L
print("path length L = %.4f m" % L)
print("arc-length DMP: change between demos = %.2e L" %
      (discrete_frechet(*al_paths) / L))
print("time DMP:       change between demos = %.2e L" %
      (discrete_frechet(*cl_paths) / L))

# the learned shape can be moved to a new goal
gen = generate_al_dmp(model, g_new=model.g + np.array([0.02, 0.0, 0.05]), s_end=2.0 * L)
print("end point after retargeting:", np.round(gen.y[-1], 4))

"""
Learning a surface from demonstration sweeps
============================================

Eight sweeps over a wavy surface are aligned, pooled and fitted with a grid
of Gaussian kernels. The model then answers height, force and tool
orientation queries anywhere between the sweeps.
"""
import numpy as np

from geodmp import (
    build_chart,
    concat,
    dtw_align,
    fit_surface,
    quat_distance,
    query_force,
    query_height,
    query_orientation,
    synth_scenario,
)

demos, truth = synth_scenario("sine_surface", noise=2e-4, time_warp="quadratic", seed=1)
print("%d sweeps, %d samples each" % (len(demos), len(demos[0])))

# the chart maps the demo footprint onto [-0.5, 0.5]^2
chart = build_chart(concat(demos))
surface = fit_surface(dtw_align(demos), chart=chart, overlap=0.5)

# compare against the analytic surface on a grid between the sweeps
u, v = np.meshgrid(np.linspace(-0.45, 0.45, 30), np.linspace(-0.45, 0.45, 30))
z, ok = query_height(surface, u.ravel(), v.ravel())
xy = chart.to_xy(np.column_stack([u.ravel(), v.ravel()]))
err = z - truth.height(xy[:, 0], xy[:, 1])
print("height RMS error %.2e m over %d supported points" % (np.sqrt(np.mean(err**2)), ok.sum()))

f, _ = query_force(surface, 0.0, 0.0)
print("force at the center %.3f N (truth %.3f N)" % (f, truth.force(*chart.to_xy([0.0, 0.0]))))

point = np.array([*chart.to_xy([0.1, -0.2]), 0.0])
point[2] = query_height(surface, 0.1, -0.2)[0]
q = query_orientation(surface, point)
print("orientation error %.2f deg" %
      np.rad2deg(quat_distance(q, truth.orientation(point[0], point[1]))))

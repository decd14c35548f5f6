"""
A synchronized skill between two new points
===========================================

From a learned surface we generate a reference between two points that no
demonstration visited, encode it as position, orientation and force
primitives, and replay it at two different speeds.
"""
import numpy as np

from geodmp import (
    build_chart,
    concat,
    dtw_align,
    encode_skill,
    evaluate,
    execute_skill,
    fit_surface,
    generate_reference,
    synth_scenario,
    truth_reference,
)

demos, truth = synth_scenario("sine_surface")
chart = build_chart(concat(demos))
surface = fit_surface(dtw_align(demos), chart=chart)

start, end = (-0.37, -0.33), (0.41, 0.36)
ref = generate_reference(surface, start, end, n_u=100)
print("reference: %.3f m of path, %.3f rad of rotation" % (ref.s_cum[-1], ref.g_cum[-1]))

bundle = encode_skill(ref)
slow = execute_skill(bundle, n_steps=101, speed_profile=lambda lam: 0.02)
fast = execute_skill(bundle, n_steps=101, speed_profile=lambda lam: 0.05 + 0.05 * np.sin(np.pi * lam))
print("durations: %.1f s and %.1f s" % (slow.t[-1], fast.t[-1]))
print("largest geometric difference between them: %.1e" % np.max(np.abs(slow.y - fast.y)))
print("force and orientation share one phase:", np.array_equal(slow.phase_ori, slow.phase_force))

# error against the analytic surface along the same chart line
report = evaluate(slow, truth_reference(truth, chart, start, end, 100))
for key, val in report.as_dict().items():
    print("%-9s %.3e" % (key, val))

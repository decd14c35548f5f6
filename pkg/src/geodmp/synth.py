"""Synthetic surfaces with known geometry, for demos and tests.

Each scenario is a height field ``z = h(x, y)`` with an analytic normal.
Demonstrations are straight sweeps along ``+x`` at evenly spaced ``y``; the
tool z-axis follows the surface normal and the normal force is a smooth
profile along ``x``.
"""
from dataclasses import dataclass, field

import numpy as np

from .demo import DemoTrajectory
from .errors import InvalidParams
from .quaternion import quat_from_two_vectors

KINDS = ("plane", "sine_surface", "c_chamfer")
TIME_WARPS = ("none", "quadratic", "piecewise")

DEFAULTS = {
    "plane": {"width": 0.2, "depth": 0.15, "slope_x": 0.1, "slope_y": -0.05, "z0": 0.05},
    "sine_surface": {"width": 0.4, "depth": 0.4, "amplitude": 0.015, "cycles_x": 1.0,
                     "cycles_y": 1.0, "z0": 0.05},
    "c_chamfer": {"width": 0.016, "depth": 0.03, "radius": 0.01, "z0": 0.0},
}
COMMON = {"n_sweeps": 8, "n_points": 100, "duration": 5.0, "force_mean": 10.0,
          "force_amp": 2.0}
EZ = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class AnalyticSurface:
    """Ground truth: height, normal, tool orientation and force over XOY."""
    kind: str
    params: dict = field(default_factory=dict)

    @property
    def x_range(self):
        w = self.params["width"]
        return (-0.5 * w, 0.5 * w) if self.kind == "c_chamfer" else (0.0, w)

    @property
    def y_range(self):
        return (0.0, self.params["depth"])

    def height(self, x, y):
        p = self.params
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        if self.kind == "plane":
            return p["z0"] + p["slope_x"] * x + p["slope_y"] * y
        if self.kind == "sine_surface":
            kx = 2.0 * np.pi * p["cycles_x"] / p["width"]
            ky = 2.0 * np.pi * p["cycles_y"] / p["depth"]
            return p["z0"] + p["amplitude"] * np.sin(kx * x) * np.cos(ky * y)
        # rounded edge: circular arc profile across x, extruded along y
        return p["z0"] + np.sqrt(p["radius"] ** 2 - x**2)

    def gradient(self, x, y):
        """``(dh/dx, dh/dy)``."""
        p = self.params
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        if self.kind == "plane":
            return np.full(x.shape, p["slope_x"]), np.full(x.shape, p["slope_y"])
        if self.kind == "sine_surface":
            kx = 2.0 * np.pi * p["cycles_x"] / p["width"]
            ky = 2.0 * np.pi * p["cycles_y"] / p["depth"]
            a = p["amplitude"]
            return (a * kx * np.cos(kx * x) * np.cos(ky * y),
                    -a * ky * np.sin(kx * x) * np.sin(ky * y))
        return -x / np.sqrt(p["radius"] ** 2 - x**2), np.zeros(x.shape)

    def normal(self, x, y):
        """Upward unit normal ``(-h_x, -h_y, 1) / norm``."""
        hx, hy = self.gradient(x, y)
        n = np.stack([-hx, -hy, np.ones_like(hx)], axis=-1)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)

    def orientation(self, x, y):
        """Minimal rotation taking the tool z-axis onto the normal."""
        return quat_from_two_vectors(EZ, self.normal(x, y))

    def force(self, x, y):
        p = self.params
        lo, hi = self.x_range
        progress = (np.asarray(x, float) - lo) / (hi - lo)
        return p["force_mean"] + p["force_amp"] * np.sin(np.pi * progress) + 0.0 * np.asarray(y)


def _resolve(kind, params):
    if kind not in KINDS:
        raise InvalidParams(f"unknown scenario kind {kind!r}; expected one of {KINDS}")
    merged = {**COMMON, **DEFAULTS[kind]}
    for key, val in (params or {}).items():
        if key not in merged:
            raise InvalidParams(f"unknown parameter {key!r} for {kind}")
        merged[key] = float(val)
    merged["n_sweeps"] = int(merged["n_sweeps"])
    merged["n_points"] = int(merged["n_points"])
    if merged["n_sweeps"] < 1 or merged["n_points"] < 2:
        raise InvalidParams("need n_sweeps >= 1 and n_points >= 2")
    if merged["width"] <= 0.0 or merged["depth"] <= 0.0 or merged["duration"] <= 0.0:
        raise InvalidParams("width, depth and duration must be positive")
    if kind == "c_chamfer" and not 0.0 < 0.5 * merged["width"] < merged["radius"]:
        raise InvalidParams("chamfer width must stay below the arc diameter")
    return merged


def warp_times(progress, duration, time_warp):
    """Timestamps for samples at normalized path progress ``progress``.

    ``quadratic`` moves with progress ``(t / T)^2``, starting at rest;
    ``piecewise`` spends 70 % of the time on the first half of the path.
    """
    p = np.asarray(progress, dtype=float)
    if time_warp == "none":
        return duration * p
    if time_warp == "quadratic":
        return duration * np.sqrt(p)
    if time_warp == "piecewise":
        return duration * np.where(p < 0.5, 1.4 * p, 0.7 + 0.6 * (p - 0.5))
    raise InvalidParams(f"unknown time warp {time_warp!r}; expected one of {TIME_WARPS}")


def synth_scenario(kind, params=None, noise=0.0, time_warp="none", seed=0):
    """Sample demonstration sweeps over an analytic surface.

    Parameters
    ----------
    kind : {"plane", "sine_surface", "c_chamfer"}
    params : dict, optional
        Overrides of :data:`DEFAULTS` and :data:`COMMON`.
    noise : float
        Standard deviation of Gaussian position noise, meters.
    time_warp : {"none", "quadratic", "piecewise"}
    seed : int
        Seed for the noise generator.

    Returns
    -------
    demos : list of DemoTrajectory
    truth : AnalyticSurface
    """
    p = _resolve(kind, params)
    if noise < 0.0:
        raise InvalidParams("noise must be nonnegative")
    truth = AnalyticSurface(kind, p)
    rng = np.random.default_rng(seed)
    (x0, x1), (y0, y1) = truth.x_range, truth.y_range
    progress = np.linspace(0.0, 1.0, p["n_points"])
    t = warp_times(progress, p["duration"], time_warp)
    xs = x0 + (x1 - x0) * progress
    ys = np.linspace(y0, y1, p["n_sweeps"]) if p["n_sweeps"] > 1 else np.array([0.5 * (y0 + y1)])
    demos = []
    for yj in ys:
        yy = np.full_like(xs, yj)
        pos = np.column_stack([xs, yy, truth.height(xs, yy)])
        if noise > 0.0:
            pos = pos + rng.normal(scale=noise, size=pos.shape)
        demos.append(DemoTrajectory(t=t.copy(), y=pos, q=truth.orientation(xs, yy),
                                    f=truth.force(xs, yy)))
    return demos, truth

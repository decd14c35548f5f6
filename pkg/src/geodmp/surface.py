"""Free-form surface encoding from demonstrations.

Demonstration points are projected onto the XOY plane through a single chart
``(u, v) = (s_x (x - x_c), s_y (y - y_c))``. Height and normal force over the
chart are encoded by a normalized grid of 2D Gaussian kernels::

    S(u, v) = sum_ij w_ij psi_ij(u, v) / sum_ij psi_ij(u, v)

and orientations are recovered by a distance-weighted intrinsic mean of the
nearby demonstration orientations.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from .demo import DemoTrajectory, concat
from .errors import (
    DegenerateProjection,
    EmptyDemoSet,
    InsufficientData,
    NoNeighbors,
)
from .quaternion import interpolate_sequence, intrinsic_mean, make_continuous

EPS_SUPPORT = 1e-6
K_MAX = 12


@dataclass(frozen=True)
class ChartParams:
    x_c: float
    y_c: float
    s_x: float
    s_y: float

    def to_uv(self, xy):
        xy = np.asarray(xy, dtype=float)
        return np.stack([self.s_x * (xy[..., 0] - self.x_c),
                         self.s_y * (xy[..., 1] - self.y_c)], axis=-1)

    def to_xy(self, uv):
        uv = np.asarray(uv, dtype=float)
        return np.stack([uv[..., 0] / self.s_x + self.x_c,
                         uv[..., 1] / self.s_y + self.y_c], axis=-1)


@dataclass(frozen=True)
class KernelGrid2D:
    """Uniform grid of Gaussian kernels over the chart.

    ``centers`` has shape ``(n, m, 2)``; the other arrays have shape
    ``(n, m)``. ``support`` flags kernels that saw enough data.
    """
    centers: np.ndarray
    widths: np.ndarray
    weights_z: np.ndarray
    weights_f: np.ndarray
    support: np.ndarray
    sigma: float


@dataclass(frozen=True)
class SurfaceModel:
    chart: ChartParams
    grid: KernelGrid2D
    points: DemoTrajectory
    d_query: float
    k_max: int = K_MAX

    @cached_property
    def _tree(self):
        return cKDTree(self.points.y)


# --- alignment -------------------------------------------------------------

def dtw_path(a, b):
    """Dynamic time warping between two position sequences.

    Returns the warping path as an array of ``(i, j)`` index pairs and the
    accumulated Euclidean cost.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n, m = len(a), len(b)
    cost = np.linalg.norm(a[:, np.newaxis] - b[np.newaxis, :], axis=-1)
    acc = np.full((n, m), np.inf)
    acc[0, 0] = cost[0, 0]
    for k in range(1, n + m - 1):
        i = np.arange(max(0, k - m + 1), min(n, k + 1))
        j = k - i
        best = np.full(len(i), np.inf)
        up = i > 0
        best[up] = acc[i[up] - 1, j[up]]
        left = j > 0
        best[left] = np.minimum(best[left], acc[i[left], j[left] - 1])
        diag = up & left
        best[diag] = np.minimum(best[diag], acc[i[diag] - 1, j[diag] - 1])
        acc[i, j] = best + cost[i, j]

    path = [(n - 1, m - 1)]
    i, j = n - 1, m - 1
    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            step = np.argmin([acc[i - 1, j - 1], acc[i - 1, j], acc[i, j - 1]])
            i, j = (i - 1, j - 1) if step == 0 else (i - 1, j) if step == 1 else (i, j - 1)
        path.append((i, j))
    return np.array(path[::-1]), float(acc[-1, -1])


def _fractional_index(point, poly, lo, hi):
    """Closest point to ``point`` on segments ``lo..hi`` of a polyline, as a float index."""
    best, best_d = float(lo), np.inf
    for k in range(lo, hi):
        seg = poly[k + 1] - poly[k]
        den = seg @ seg
        t = 0.0 if den == 0.0 else float(np.clip((point - poly[k]) @ seg / den, 0.0, 1.0))
        d = np.linalg.norm(poly[k] + t * seg - point)
        if d < best_d:
            best, best_d = k + t, d
    return best


def _warp_onto(ref, demo):
    path, _ = dtw_path(ref.y, demo.y)
    n = len(ref)
    frac = np.empty(n)
    for i in range(n):
        js = path[path[:, 0] == i, 1]
        lo = max(int(js.min()) - 1, 0)
        hi = min(int(js.max()) + 1, len(demo) - 1)
        frac[i] = _fractional_index(ref.y[i], demo.y, lo, hi) if hi > lo else float(lo)
    frac = np.maximum.accumulate(frac)
    idx = np.arange(len(demo), dtype=float)
    y = np.column_stack([np.interp(frac, idx, col) for col in demo.y.T])
    q = interpolate_sequence(idx, make_continuous(demo.q), frac)
    f = np.interp(frac, idx, demo.f)
    return DemoTrajectory(t=ref.t.copy(), y=y, q=q, f=f)


def dtw_align(demos):
    """Warp every demo onto the sample timeline of the longest one.

    Each sample of the reference is matched through DTW on positions, then
    refined to the closest point on the neighbouring segments of the other
    demo; orientation and force are interpolated at that fractional index.
    The reference itself is returned unchanged.

    Raises
    ------
    EmptyDemoSet
        If ``demos`` is empty.
    """
    demos = list(demos)
    if not demos:
        raise EmptyDemoSet("no demonstrations given")
    if any(len(d) < 2 for d in demos):
        raise ValueError("each demonstration needs at least two samples")
    ref_idx = int(np.argmax([len(d) for d in demos]))
    ref = demos[ref_idx]
    return [d if k == ref_idx else _warp_onto(ref, d) for k, d in enumerate(demos)]


# --- chart and kernel fit ---------------------------------------------------

def build_chart(points):
    """Chart mapping the XOY bounding box of ``points`` onto ``[-0.5, 0.5]^2``.

    ``points`` is a :class:`DemoTrajectory` or an ``(n, 2+)`` array of
    positions. The origin is the center of the bounding box.

    Raises
    ------
    DegenerateProjection
        If the projected points span zero area or are collinear.
    """
    y = points.y if isinstance(points, DemoTrajectory) else np.asarray(points, dtype=float)
    xy = y[:, :2]
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = hi - lo
    if len(xy) < 3 or np.any(span <= 0.0):
        raise DegenerateProjection("projected points span zero area")
    sv = np.linalg.svd((xy - xy.mean(axis=0)) / span, compute_uv=False)
    if sv[-1] <= 1e-9 * sv[0]:
        raise DegenerateProjection("projected points are collinear")
    center = 0.5 * (lo + hi)
    return ChartParams(x_c=float(center[0]), y_c=float(center[1]),
                       s_x=float(1.0 / span[0]), s_y=float(1.0 / span[1]))


def _kernel_eval(grid, uv, values):
    """Normalized kernel sum over supported kernels, plus the support flag."""
    uv = np.atleast_2d(np.asarray(uv, dtype=float))
    mask = grid.support.ravel()
    c = grid.centers.reshape(-1, 2)[mask]
    h = grid.widths.ravel()[mask]
    d2 = np.sum((uv[:, np.newaxis, :] - c[np.newaxis]) ** 2, axis=-1)
    logits = -h * d2
    # shift by the row maximum: the ratio is unchanged and nothing underflows
    psi = np.exp(logits - logits.max(axis=1, keepdims=True))
    out = psi @ values.ravel()[mask] / psi.sum(axis=1)
    supported = np.sqrt(d2.min(axis=1)) <= 2.0 * grid.sigma
    return out, supported


def fit_surface(points, chart=None, grid_n=20, grid_m=20, overlap=1.0, d_query=None,
                k_max=K_MAX, eps_support=EPS_SUPPORT):
    """Encode height and force over the chart with a Gaussian kernel grid.

    Kernel weights are order-0 locally weighted averages of the data,
    ``w_ij = sum_k psi_ij(u_k, v_k) z_k / sum_k psi_ij(u_k, v_k)``, the same
    for force.

    Parameters
    ----------
    points : DemoTrajectory or sequence of DemoTrajectory
    chart : ChartParams, optional
        Built from ``points`` when omitted.
    grid_n, grid_m : int
        Kernel counts along ``u`` and ``v``; both at least 2.
    overlap : float
        Kernel standard deviation in units of the larger grid spacing.
    d_query : float, optional
        Orientation query radius in meters; defaults to three times the
        median nearest-neighbour spacing of the points.

    Raises
    ------
    InsufficientData
        If no kernel collects at least ``eps_support`` total activation.
    """
    if not isinstance(points, DemoTrajectory):
        points = concat(points)
    if len(points) == 0:
        raise EmptyDemoSet("no demonstration points")
    if grid_n < 2 or grid_m < 2:
        raise ValueError("grid needs at least 2 x 2 kernels")
    chart = build_chart(points) if chart is None else chart
    uv = chart.to_uv(points.y[:, :2])

    gu = np.linspace(-0.5, 0.5, grid_n)
    gv = np.linspace(-0.5, 0.5, grid_m)
    centers = np.stack(np.meshgrid(gu, gv, indexing="ij"), axis=-1)
    sigma = overlap * max(gu[1] - gu[0], gv[1] - gv[0])
    widths = np.full((grid_n, grid_m), 1.0 / (2.0 * sigma**2))

    d2 = np.sum((centers.reshape(-1, 1, 2) - uv[np.newaxis]) ** 2, axis=-1)
    psi = np.exp(-widths.reshape(-1, 1) * d2)
    mass = psi.sum(axis=1)
    support = mass >= eps_support
    if not np.any(support):
        raise InsufficientData("no kernel is supported by the data")
    safe = np.where(support, mass, 1.0)
    wz = np.where(support, psi @ points.y[:, 2] / safe, 0.0)
    wf = np.where(support, psi @ points.f / safe, 0.0)
    grid = KernelGrid2D(centers=centers, widths=widths,
                        weights_z=wz.reshape(grid_n, grid_m),
                        weights_f=wf.reshape(grid_n, grid_m),
                        support=support.reshape(grid_n, grid_m), sigma=float(sigma))
    if d_query is None:
        # duplicates would drive the median spacing to zero
        unique = np.unique(points.y, axis=0)
        if len(unique) < 2:
            raise InsufficientData("need at least two distinct demo positions")
        dist, _ = cKDTree(unique).query(unique, k=2)
        spacing = float(np.median(dist[:, 1]))
        d_query = 3.0 * spacing
    return SurfaceModel(chart=chart, grid=grid, points=points, d_query=float(d_query),
                        k_max=int(k_max))


def query_height(model, u, v):
    """Encoded height at chart coordinates; returns ``(z, supported)``.

    Scalars give scalars, arrays give arrays. ``supported`` is False when no
    supported kernel center lies within two kernel widths.
    """
    uv = np.stack(np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float)), axis=-1)
    z, ok = _kernel_eval(model.grid, uv.reshape(-1, 2), model.grid.weights_z)
    if uv.ndim == 1:
        return float(z[0]), bool(ok[0])
    return z.reshape(uv.shape[:-1]), ok.reshape(uv.shape[:-1])


def query_force(model, u, v):
    """Encoded normal force at chart coordinates; returns ``(f, supported)``."""
    uv = np.stack(np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float)), axis=-1)
    f, ok = _kernel_eval(model.grid, uv.reshape(-1, 2), model.grid.weights_f)
    if uv.ndim == 1:
        return float(f[0]), bool(ok[0])
    return f.reshape(uv.shape[:-1]), ok.reshape(uv.shape[:-1])


def query_orientation(model, y_d, d_query=None):
    """Orientation at a surface point from nearby demonstration orientations.

    Up to ``k_max`` demo points within ``d_query`` of ``y_d`` are averaged
    with the intrinsic mean, each weighted by ``(d - |y_d - y_i|) / d``.

    Raises
    ------
    NoNeighbors
        If no demo point lies strictly inside the query radius.
    """
    d = model.d_query if d_query is None else float(d_query)
    y_d = np.asarray(y_d, dtype=float)
    k = min(model.k_max, len(model.points))
    dist, idx = model._tree.query(y_d, k=k, distance_upper_bound=d)
    dist, idx = np.atleast_1d(dist), np.atleast_1d(idx)
    found = np.isfinite(dist)
    weights = (d - dist[found]) / d
    if not np.any(weights > 0.0):
        raise NoNeighbors(f"no demonstration point within {d:.6g} m of {y_d.tolist()}")
    return intrinsic_mean(model.points.q[idx[found]], weights)

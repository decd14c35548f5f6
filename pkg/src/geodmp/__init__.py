"""Arc-length and geodesic-length DMPs for surface skills.

Position, orientation and force along a free-form surface are learned from
demonstrations and replayed independently of execution speed.
"""
from . import io
from .demo import DemoPoint, DemoTrajectory, concat
from .dmp_orientation import (
    GeoDmpModel,
    OrientationSeries,
    estimate_orientation_series,
    fit_geo_dmp,
    fit_time_quat_dmp,
    generate_geo_dmp,
    generate_time_quat_dmp,
    time_playback,
)
from .dmp_position import (
    AlDmpModel,
    PositionSeries,
    arc_length_resample,
    fit_al_dmp,
    fit_classical_dmp,
    generate_al_dmp,
    generate_classical_dmp,
)
from .errors import *  # noqa: F401,F403
from .metrics import discrete_frechet, quat_frechet
from .pipeline import (
    ErrorReport,
    ForceKernelModel,
    SkillBundle,
    SyncTrajectory,
    encode_skill,
    evaluate,
    execute_skill,
    fit_force_kernels,
    generate_reference,
    query_force_kernels,
    truth_reference,
)
from .quaternion import (
    geodesic_length_series,
    intrinsic_mean,
    quat_conj,
    quat_distance,
    quat_exp,
    quat_from_axis_angle,
    quat_log,
    quat_mul,
    slerp,
)
from .surface import (
    ChartParams,
    KernelGrid2D,
    SurfaceModel,
    build_chart,
    dtw_align,
    fit_surface,
    query_force,
    query_height,
    query_orientation,
)
from .synth import AnalyticSurface, synth_scenario

__version__ = "0.1.0"

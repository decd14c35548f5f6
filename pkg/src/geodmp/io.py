"""Trajectory tables and model files.

Trajectories are comma-separated text with the header
``t,x,y,z,qw,qx,qy,qz,f`` (seconds, meters, scalar-first quaternion,
newtons). Models are JSON documents with a format tag and version; every
float is written with 17 significant digits so that loading restores it
bit for bit.
"""
import csv
import dataclasses
import json
import math
import warnings

import numpy as np

from .demo import DemoTrajectory
from .dmp_orientation import GeoDmpModel
from .dmp_position import AlDmpModel
from .errors import BadQuaternionNorm, GeoDmpError, NonMonotoneTime, ParseError
from .pipeline import ForceKernelModel, SkillBundle, SyncTrajectory
from .surface import ChartParams, KernelGrid2D, SurfaceModel

HEADER = ("t", "x", "y", "z", "qw", "qx", "qy", "qz", "f")
FORMAT = "geodmp-model"
VERSION = 1
#: Quaternion norm deviations up to this are fixed silently on load.
NORM_SILENT = 1e-6
#: Beyond this the row is rejected.
NORM_REJECT = 1e-3


class QuaternionNormWarning(UserWarning):
    pass


def fmt(v):
    return "%.17g" % v


# --- trajectories ------------------------------------------------------------

def read_table(path):
    """Parse a trajectory file into an ``(n, 9)`` array.

    Raises
    ------
    ParseError
        On a wrong header, a wrong field count or a non-numeric field.
    NonMonotoneTime
        If timestamps do not strictly increase.
    BadQuaternionNorm
        If a quaternion norm is off by more than ``NORM_REJECT``.
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(1, 1, "empty file", path)
        if tuple(h.strip() for h in header) != HEADER:
            raise ParseError(1, 1, f"header must be {','.join(HEADER)}", path)
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(HEADER):
                raise ParseError(line, min(len(row), len(HEADER)) + 1,
                                 f"expected {len(HEADER)} fields, got {len(row)}", path)
            vals = []
            for col, cell in enumerate(row, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(line, col, f"not a number: {cell.strip()!r}", path) from None
                if not math.isfinite(v):
                    raise ParseError(line, col, "value is not finite", path)
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise ParseError(2, 1, "no data rows", path)
    data = np.array(rows, dtype=float)
    # row numbers in errors count data rows from 1
    bad_t = np.flatnonzero(np.diff(data[:, 0]) <= 0.0)
    if len(bad_t):
        raise NonMonotoneTime(int(bad_t[0]) + 2, path)

    norms = np.linalg.norm(data[:, 4:8], axis=1)
    dev = np.abs(norms - 1.0)
    if np.any(dev > NORM_REJECT):
        k = int(np.argmax(dev > NORM_REJECT))
        raise BadQuaternionNorm(k + 1, float(norms[k]), path)
    if np.any(dev > NORM_SILENT):
        warnings.warn(f"{path}: {int(np.sum(dev > NORM_SILENT))} quaternion rows renormalized",
                      QuaternionNormWarning, stacklevel=2)
    # rows already at unit norm are left untouched so files roundtrip exactly
    fix = dev > 0.0
    data[fix, 4:8] /= norms[fix, np.newaxis]
    return data


def load_trajectory(path):
    """Read a demonstration file as a :class:`DemoTrajectory`."""
    d = read_table(path)
    return DemoTrajectory(t=d[:, 0].copy(), y=d[:, 1:4].copy(), q=d[:, 4:8].copy(),
                          f=d[:, 8].copy())


def load_sync(path):
    """Read a trajectory file as a :class:`SyncTrajectory`.

    Progress is the timestamp normalized to ``[0, 1]``.
    """
    d = read_table(path)
    t = d[:, 0]
    lam = (t - t[0]) / (t[-1] - t[0]) if len(t) > 1 else np.zeros(1)
    return SyncTrajectory.from_samples(lam, d[:, 1:4], d[:, 4:8], d[:, 8], t=t)


def save_trajectory(traj, path):
    """Write a DemoTrajectory or SyncTrajectory.

    A SyncTrajectory without timestamps is written with ``t = lam``.
    """
    t = traj.t if traj.t is not None else traj.lam
    data = np.column_stack([t, traj.y, traj.q, traj.f])
    with open(path, "w", newline="") as fh:
        fh.write(",".join(HEADER) + "\n")
        for row in data:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_report(report, fh):
    fields = report.FIELDS
    fh.write(",".join(fields) + "\n")
    fh.write(",".join(fmt(getattr(report, k)) for k in fields) + "\n")


# --- model documents ---------------------------------------------------------

_TYPES = {cls.__name__: cls for cls in (ChartParams, KernelGrid2D, SurfaceModel, DemoTrajectory,
                                        AlDmpModel, GeoDmpModel, ForceKernelModel, SkillBundle)}


def _pack(obj):
    if dataclasses.is_dataclass(obj):
        doc = {"type": type(obj).__name__}
        for f in dataclasses.fields(obj):
            if f.name == "surface":
                continue  # skills reference their surface file, they do not embed it
            doc[f.name] = _pack(getattr(obj, f.name))
        return doc
    if isinstance(obj, np.ndarray):
        return {"dtype": obj.dtype.kind, "shape": list(obj.shape),
                "data": [_pack(v) for v in obj.ravel().tolist()]}
    if isinstance(obj, (tuple, list)):
        return [_pack(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _unpack(doc):
    if isinstance(doc, dict):
        if "dtype" in doc and "shape" in doc:
            dtype = {"b": bool, "i": int}.get(doc["dtype"], float)
            return np.array(doc["data"], dtype=dtype).reshape(doc["shape"])
        cls = _TYPES[doc["type"]]
        kwargs = {k: _unpack(v) for k, v in doc.items() if k != "type"}
        if cls is SkillBundle:
            kwargs["endpoints"] = tuple(tuple(p) for p in kwargs["endpoints"])
        return cls(**kwargs)
    if isinstance(doc, list):
        return [_unpack(v) for v in doc]
    return doc


def _emit(doc, out, indent=0):
    """JSON writer that prints floats with 17 significant digits."""
    pad = " " * indent
    if isinstance(doc, dict):
        out.append("{")
        items = list(doc.items())
        for k, (key, val) in enumerate(items):
            out.append(f"\n{pad}  {json.dumps(key)}: ")
            _emit(val, out, indent + 2)
            if k < len(items) - 1:
                out.append(",")
        out.append(f"\n{pad}}}" if items else "}")
    elif isinstance(doc, list):
        out.append("[")
        for k, val in enumerate(doc):
            if k:
                out.append(", ")
            _emit(val, out, indent)
        out.append("]")
    elif isinstance(doc, bool) or doc is None or isinstance(doc, (int, str)):
        out.append(json.dumps(doc))
    elif isinstance(doc, float):
        if not math.isfinite(doc):
            raise ValueError("model contains a non-finite value")
        text = fmt(doc)
        # keep floats recognizable as floats when they happen to be integral
        out.append(text if any(ch in text for ch in ".e") else text + ".0")
    else:
        raise TypeError(f"cannot emit {type(doc).__name__}")


def dumps_model(model, **meta):
    kind = {"SurfaceModel": "surface", "SkillBundle": "skill"}[type(model).__name__]
    doc = {"format": FORMAT, "version": VERSION, "kind": kind, **meta, "model": _pack(model)}
    out = []
    _emit(doc, out)
    return "".join(out) + "\n"


def save_model(model, path, **meta):
    """Write a SurfaceModel or SkillBundle; ``meta`` adds top-level string fields."""
    with open(path, "w") as fh:
        fh.write(dumps_model(model, **meta))


def load_model(path, kind=None):
    """Read a model document, checking format, version and optionally kind.

    Returns
    -------
    model : SurfaceModel or SkillBundle
    doc : dict
        The top-level document without the ``model`` entry.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg, path) from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise ParseError(1, 1, f"not a {FORMAT} document", path)
    if doc.get("version") != VERSION:
        raise ParseError(1, 1, f"unsupported version {doc.get('version')!r}", path)
    if kind is not None and doc.get("kind") != kind:
        raise GeoDmpError(f"{path}: expected a {kind} model, found {doc.get('kind')!r}")
    try:
        model = _unpack(doc.pop("model"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(1, 1, f"malformed model: {exc}", path) from None
    return model, doc

"""Command-line interface.

Typical flow::

    geodmp synth sine_surface --seed 7 --out run/ --start-uv -0.4,-0.4 --end-uv 0.4,0.4
    geodmp learn-surface run/demo_*.csv --out run/surface.json
    geodmp generate run/surface.json --start-uv -0.4,-0.4 --end-uv 0.4,0.4 --out run/ref.csv
    geodmp learn-skill run/ref.csv --out run/skill.json
    geodmp execute run/skill.json --out run/exec.csv
    geodmp evaluate run/exec.csv run/truth.csv

Every command exits with 0 on success. On failure it exits with 1 and
prints one JSON object to stderr with the error type and message, and the
file, line and column where known.
"""
import argparse
import dataclasses
import json
import os
import sys
import warnings

from . import io
from .demo import concat
from .errors import GeoDmpError, InvalidParams
from .pipeline import (
    encode_skill,
    evaluate,
    execute_skill,
    generate_reference,
    truth_reference,
)
from .surface import build_chart, dtw_align, fit_surface
from .synth import KINDS, TIME_WARPS, synth_scenario


@dataclasses.dataclass
class Config:
    """Tunable defaults; any of them can be set in a ``key=value`` file."""
    grid_n: int = 20
    grid_m: int = 20
    overlap: float = 1.0
    d_query: float = 0.0
    k_max: int = 12
    eps_support: float = 1e-6
    align: bool = True
    n_retry: int = 3
    n_basis_pos: int = 50
    n_basis_ori: int = 30
    n_basis_force: int = 30
    alpha_z: float = 25.0
    beta_z: float = 6.25
    alpha_x: float = 4.0
    n_fit: int = 200
    n_integrate: int = 1000
    coregistration: str = "reference"
    steps: int = 100
    noise: float = 0.0
    time_warp: str = "none"


CONFIG_HELP = {
    "grid_n": "surface kernels along u",
    "grid_m": "surface kernels along v",
    "overlap": "surface kernel sigma in grid spacings",
    "d_query": "orientation query radius in m (0 = 3x median point spacing)",
    "k_max": "max neighbours in an orientation query",
    "eps_support": "min total activation of a supported kernel",
    "align": "DTW-align demos before fitting the surface",
    "n_retry": "orientation query radius doublings before giving up",
    "n_basis_pos": "AL-DMP basis functions",
    "n_basis_ori": "Geo-DMP basis functions",
    "n_basis_force": "force kernels",
    "alpha_z": "DMP stiffness",
    "beta_z": "DMP damping ratio term",
    "alpha_x": "phase decay",
    "n_fit": "orientation samples used for fitting",
    "n_integrate": "Euler steps per DMP rollout",
    "coregistration": "reference | linear",
    "steps": "intervals in generated or executed trajectories (samples = steps + 1)",
    "noise": "synth position noise std in m",
    "time_warp": "synth time warp: none | quadratic | piecewise",
}


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def load_config(path):
    """Read a ``key=value`` file; ``#`` starts a comment."""
    cfg = Config()
    types = {f.name: f.type for f in dataclasses.fields(Config)}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            key = key.strip()
            if not sep or key not in types:
                raise io.ParseError(lineno, 1, f"unknown or malformed entry {line!r}", path)
            conv = {int: int, float: float, bool: _parse_bool, str: str}[types[key]]
            try:
                setattr(cfg, key, conv(val.strip()))
            except ValueError as exc:
                raise io.ParseError(lineno, len(key) + 2, str(exc), path) from None
    return cfg


def dump_config(cfg=None):
    cfg = Config() if cfg is None else cfg
    lines = []
    for f in dataclasses.fields(Config):
        val = getattr(cfg, f.name)
        text = str(val).lower() if isinstance(val, bool) else repr(val) if isinstance(val, float) \
            else str(val)
        lines.append(f"# {CONFIG_HELP[f.name]}\n{f.name}={text}")
    return "\n".join(lines) + "\n"


def _uv(text):
    try:
        u, v = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected u,v but got {text!r}") from None
    return u, v


def _key_value(text):
    key, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value but got {text!r}")
    return key.strip(), val.strip()


def _steps(args, cfg):
    return cfg.steps if args.steps is None else args.steps


# --- commands ----------------------------------------------------------------

def cmd_synth(args, cfg):
    params = dict(args.param or [])
    noise = cfg.noise if args.noise is None else args.noise
    warp = cfg.time_warp if args.time_warp is None else args.time_warp
    demos, truth = synth_scenario(args.kind, params, noise=noise, time_warp=warp, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    for k, demo in enumerate(demos):
        io.save_trajectory(demo, os.path.join(args.out, f"demo_{k:03d}.csv"))
    if (args.start_uv is None) != (args.end_uv is None):
        raise InvalidParams("give both --start-uv and --end-uv, or neither")
    if args.start_uv is not None:
        chart = build_chart(concat(demos))
        ref = truth_reference(truth, chart, args.start_uv, args.end_uv, _steps(args, cfg))
        io.save_trajectory(ref, os.path.join(args.out, "truth.csv"))
    return 0


def learn_surface(demos, cfg):
    """Fit a surface the way ``learn-surface`` does; the chart uses the raw points."""
    chart = build_chart(concat(demos))
    points = dtw_align(demos) if cfg.align else demos
    return fit_surface(points, chart=chart, grid_n=cfg.grid_n, grid_m=cfg.grid_m,
                       overlap=cfg.overlap, d_query=cfg.d_query or None, k_max=cfg.k_max,
                       eps_support=cfg.eps_support)


def cmd_learn_surface(args, cfg):
    demos = [io.load_trajectory(p) for p in args.demos]
    io.save_model(learn_surface(demos, cfg), args.out)
    return 0


def cmd_generate(args, cfg):
    surface, _ = io.load_model(args.model, kind="surface")
    ref = generate_reference(surface, args.start_uv, args.end_uv, _steps(args, cfg), cfg.n_retry)
    io.save_trajectory(ref, args.out)
    return 0


def cmd_learn_skill(args, cfg):
    ref = io.load_sync(args.reference)
    bundle = encode_skill(ref, n_basis_pos=cfg.n_basis_pos, n_basis_ori=cfg.n_basis_ori,
                          n_basis_force=cfg.n_basis_force, alpha_z=cfg.alpha_z,
                          beta_z=cfg.beta_z, alpha_x=cfg.alpha_x, n_fit=cfg.n_fit,
                          coregistration=cfg.coregistration)
    io.save_model(bundle, args.out, reference=os.path.basename(args.reference))
    return 0


def cmd_execute(args, cfg):
    bundle, _ = io.load_model(args.model, kind="skill")
    speed = None if args.speed is None else (lambda lam: args.speed)
    traj = execute_skill(bundle, n_steps=_steps(args, cfg) + 1, speed_profile=speed,
                         n_integrate=cfg.n_integrate)
    io.save_trajectory(traj, args.out)
    return 0


def cmd_evaluate(args, cfg):
    report = evaluate(io.load_sync(args.generated), io.load_sync(args.truth))
    if args.out:
        with open(args.out, "w") as fh:
            io.write_report(report, fh)
    io.write_report(report, sys.stdout)
    return 0


def cmd_config(args, cfg):
    if not args.dump:
        raise InvalidParams("nothing to do; use config --dump")
    text = dump_config(cfg)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file overriding the defaults")
    common.add_argument("--seed", type=int, default=0, help="seed for stochastic synthesis")
    common.add_argument("--steps", type=int, help="trajectory resolution (intervals)")

    parser = argparse.ArgumentParser(prog="geodmp", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="write synthetic demonstrations")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--noise", type=float)
    p.add_argument("--time-warp", choices=TIME_WARPS)
    p.add_argument("--param", type=_key_value, action="append", help="scenario parameter k=v")
    p.add_argument("--start-uv", type=_uv, help="also write truth.csv from this chart point")
    p.add_argument("--end-uv", type=_uv)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("learn-surface", parents=[common], help="fit a surface model")
    p.add_argument("demos", nargs="+")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_learn_surface)

    p = sub.add_parser("generate", parents=[common], help="reference between two chart points")
    p.add_argument("model")
    p.add_argument("--start-uv", type=_uv, required=True)
    p.add_argument("--end-uv", type=_uv, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("learn-skill", parents=[common], help="encode a reference as a skill")
    p.add_argument("reference")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_learn_skill)

    p = sub.add_parser("execute", parents=[common], help="replay a skill")
    p.add_argument("model")
    p.add_argument("--speed", type=float, help="constant path speed in m/s for timestamps")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_execute)

    p = sub.add_parser("evaluate", parents=[common], help="compare two trajectory files")
    p.add_argument("generated")
    p.add_argument("truth")
    p.add_argument("--out", help="also write the report table here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("config", parents=[common], help="show configuration defaults")
    p.add_argument("--dump", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_config)
    return parser


def _error_line(exc):
    info = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, OSError) and exc.filename:
        info["file"] = exc.filename
    for attr in ("path", "line", "column", "row"):
        val = getattr(exc, attr, None)
        if val is not None:
            info["file" if attr == "path" else attr] = val
    return json.dumps(info)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else Config()
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args, cfg)
    except (GeoDmpError, OSError, ValueError) as exc:
        print(_error_line(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

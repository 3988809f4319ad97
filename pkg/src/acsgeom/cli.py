"""Command-line frontend.

Subcommands: ``verify`` (full checker suite), ``geodesic`` (trace table),
``curvature`` / ``signature`` (single checkers), ``project``
(symmetric/antisymmetric decomposition of a tangent field from a file).

Precedence of settings: flags > config file (``--config``, JSON with the
same keys) > built-in defaults.  Relative ``--out`` paths are resolved
against the directory named by the ACSGEOM_OUT_DIR environment variable
when it is set.  Exit codes: 0 all checks pass, 1 a check failed, 2 on
usage, configuration or input errors.

Outputs are reproducible byte for byte for identical flags and seed:
reports carry no timestamps, machine identifiers, or float formatting
that depends on locale.  CSV cells use 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, GeometryError, IoError
from .fiber import FiberMetric, g_adjoint, max_abs
from .geometry import ChartField, geodesic_ambient, geodesic_chart, christoffel
from .structures import (
    MetricField,
    SampleSpace,
    TangentField,
    load_bundle,
    random_sample_space,
    random_tangent_field,
    standard_acs_field,
    standard_symplectic_field,
    sym_antisym_split,
    validate_associated,
    validate_orthogonal,
)
from .verify import (
    CHECK_NAMES,
    VerifyConfig,
    _rng,
    check_curvature_fd,
    check_signature,
    report_document,
    run_suite,
)

OUT_DIR_ENV = "ACSGEOM_OUT_DIR"
COMMANDS = ("verify", "geodesic", "curvature", "project", "signature")
CONFIG_KEYS = ("dim", "points", "seed", "t_max", "t_steps", "h",
               "tolerances", "input", "output", "format")


@dataclass
class RunConfig:
    command: str
    dim: int = 4
    points: int = 8
    seed: int = 0
    t_max: float = 2.0
    t_steps: int = 9
    h: float = 1e-4
    tolerances: dict = field(default_factory=dict)
    input_path: str | None = None
    output_path: str | None = None
    format: str = "report"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        for name, value, least in (("dim", self.dim, 2), ("points", self.points, 1),
                                   ("seed", self.seed, 0), ("t_steps", self.t_steps, 1)):
            if isinstance(value, bool) or not isinstance(value, int) or value < least:
                raise ConfigError(f"{name} must be an integer >= {least}, got {value!r}")
        if self.dim % 2:
            raise ConfigError(f"dim must be even, got {self.dim}")
        for name, value in (("t_max", self.t_max), ("h", self.h)):
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
                raise ConfigError(f"{name} must be a positive number, got {value!r}")
        if self.format not in ("report", "csv"):
            raise ConfigError(f"format must be 'report' or 'csv', got {self.format!r}")
        for name, tol in self.tolerances.items():
            if name not in CHECK_NAMES:
                raise ConfigError(f"unknown tolerance override {name!r}")
            if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
                raise ConfigError(f"tolerance override {name!r} must be positive")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=None,
                        help="fiber dimension 2n (default 4)")
    common.add_argument("--points", type=int, default=None,
                        help="sample points in the weighted space (default 8)")
    common.add_argument("--seed", type=int, default=None,
                        help="master seed for all random draws (default 0)")
    common.add_argument("--t-max", type=float, default=None,
                        help="end of the geodesic parameter grid (default 2.0)")
    common.add_argument("--t-steps", type=int, default=None,
                        help="number of grid points on [0, t-max] (default 9)")
    common.add_argument("--h", type=float, default=None,
                        help="finite-difference step (default 1e-4)")
    common.add_argument("--in", dest="input_path", default=None, metavar="FILE",
                        help="input field bundle (JSON)")
    common.add_argument("--out", dest="output_path", default=None, metavar="FILE",
                        help=f"output file; relative paths resolve against ${OUT_DIR_ENV} "
                             "when set (default: stdout)")
    common.add_argument("--format", choices=("report", "csv"), default=None,
                        help="output format (default report)")
    common.add_argument("--config", default=None, metavar="FILE",
                        help="JSON config merged below flags")
    for name in CHECK_NAMES:
        common.add_argument(f"--tol-{name.replace('_', '-')}",
                            dest=f"tol_{name}", type=float, default=None,
                            help=f"primary tolerance override for the {name} check")

    parser = argparse.ArgumentParser(
        prog="acsgeom",
        description="numerical geometry of the space of almost complex structures")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common],
                   help="run the full verification suite")
    sub.add_parser("geodesic", parents=[common],
                   help="trace a geodesic and its validators")
    sub.add_parser("curvature", parents=[common],
                   help="finite-difference curvature check")
    sub.add_parser("project", parents=[common],
                   help="split an input tangent field into symmetric and "
                        "antisymmetric parts")
    sub.add_parser("signature", parents=[common],
                   help="signature of the metric at the chart origin")
    return parser


def _read_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read config file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    for key in data:
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r} in {path!r}")
    if "tolerances" in data and not isinstance(data["tolerances"], dict):
        raise ConfigError("config key 'tolerances' must be an object")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags over the optional config file over defaults."""
    filed = _read_config_file(args.config) if args.config else {}
    cfg = RunConfig(command=args.command)

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        return filed.get(key, default)

    cfg.dim = pick(args.dim, "dim", cfg.dim)
    cfg.points = pick(args.points, "points", cfg.points)
    cfg.seed = pick(args.seed, "seed", cfg.seed)
    cfg.t_max = pick(args.t_max, "t_max", cfg.t_max)
    cfg.t_steps = pick(args.t_steps, "t_steps", cfg.t_steps)
    cfg.h = pick(args.h, "h", cfg.h)
    cfg.input_path = pick(args.input_path, "input", None)
    cfg.output_path = pick(args.output_path, "output", None)
    cfg.format = pick(args.format, "format", cfg.format)
    tolerances = dict(filed.get("tolerances", {}))
    for name in CHECK_NAMES:
        value = getattr(args, f"tol_{name}")
        if value is not None:
            tolerances[name] = value
    cfg.tolerances = tolerances
    cfg.validate()
    return cfg


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    if not os.path.isabs(path):
        base = os.environ.get(OUT_DIR_ENV)
        if base:
            return os.path.join(base, path)
    return path


def _write_text(cfg: RunConfig, text: str) -> None:
    path = _resolve_out(cfg.output_path)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write output file {path!r}: {exc}") from exc


def _num(x) -> str:
    return format(float(x), ".17g")


def _csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _num(cell)
                              for cell in row))
    return "\n".join(lines) + "\n"


def _checks_csv(reports) -> str:
    rows = [[r.name, r.max_residual, r.tolerance, "1" if r.passed else "0"]
            for r in reports]
    return _csv(["check", "max_residual", "tolerance", "passed"], rows)


def _emit_reports(cfg: RunConfig, reports, vconf: VerifyConfig) -> int:
    doc = report_document(reports, vconf, input_path=cfg.input_path)
    if cfg.format == "csv":
        text = _checks_csv(reports)
    else:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    _write_text(cfg, text)
    if cfg.output_path is not None:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            print(f"{status} {r.name}: max_residual={r.max_residual:.3e} "
                  f"tolerance={r.tolerance:.3e}")
    return 0 if doc["passed"] else 1


def _verify_config(cfg: RunConfig) -> VerifyConfig:
    bundle = load_bundle(cfg.input_path) if cfg.input_path else None
    return VerifyConfig(seed=cfg.seed, dims=(cfg.dim,), fd_dims=(cfg.dim,),
                        points=cfg.points, h=cfg.h, t_max=cfg.t_max,
                        t_steps=cfg.t_steps, tolerances=cfg.tolerances,
                        bundle=bundle)


def cmd_verify(cfg: RunConfig) -> int:
    vconf = _verify_config(cfg)
    return _emit_reports(cfg, run_suite(vconf), vconf)


def cmd_curvature(cfg: RunConfig) -> int:
    vconf = _verify_config(cfg)
    report = check_curvature_fd(cfg.seed, (cfg.dim,), points=cfg.points, h=cfg.h,
                                tolerance=cfg.tolerances.get("curvature_fd", 1e-5))
    return _emit_reports(cfg, [report], vconf)


def cmd_signature(cfg: RunConfig) -> int:
    vconf = _verify_config(cfg)
    report = check_signature(cfg.seed, (cfg.dim,), cfg.points,
                             threshold=cfg.tolerances.get("signature", 1e-10))
    return _emit_reports(cfg, [report], vconf)


def _metric_field(space: SampleSpace) -> MetricField:
    return MetricField(space, np.array(space.metrics, copy=True))


def cmd_geodesic(cfg: RunConfig) -> int:
    """Trace t, max|K(t)|, structure residual, geodesic-equation residual
    and the associated/orthogonal validator flags over the grid."""
    if cfg.input_path:
        bundle = load_bundle(cfg.input_path)
        if bundle.J is None or bundle.K is None:
            raise ConfigError("geodesic needs an input bundle with J and K fields")
        space, j0f, a = bundle.space, bundle.J, bundle.K
        wf = bundle.W if bundle.W is not None else standard_symplectic_field(space)
    else:
        rng = _rng(cfg.seed, "cli_geodesic", cfg.dim)
        space = random_sample_space(rng, cfg.dim, cfg.points)
        j0f = standard_acs_field(space)
        a = random_tangent_field(rng, j0f)
        wf = standard_symplectic_field(space)
    gf = _metric_field(space)
    eye = np.eye(space.dim)

    rows = []
    for t in np.linspace(0.0, cfg.t_max, cfg.t_steps):
        t = float(t)
        jt = geodesic_ambient(j0f, a, t)
        kt = geodesic_chart(a, t)
        acs_res = max(max_abs(jt.ops[i] @ jt.ops[i] + eye)
                      for i in range(space.npoints))
        kp = geodesic_chart(a, t + cfg.h)
        km = geodesic_chart(a, t - cfg.h)
        kdot = TangentField(space, j0f, (kp.ops - km.ops) / (2.0 * cfg.h), 1e-9)
        kdd = (kp.ops - 2.0 * kt.ops + km.ops) / cfg.h**2
        gamma = christoffel(ChartField(space, j0f, kt), kdot, kdot)
        ode_res = max_abs(kdd + gamma.ops)
        assoc = validate_associated(jt, wf).passed
        orth = validate_orthogonal(jt, gf, j0f).passed
        rows.append([t, max_abs(kt.ops), acs_res, ode_res,
                     "1" if assoc else "0", "1" if orth else "0"])
    header = ["t", "k_max", "acs_residual", "geodesic_residual",
              "associated", "orthogonal"]
    if cfg.format == "csv":
        text = _csv(header, rows)
    else:
        doc = {"command": "geodesic", "columns": header,
               "rows": [[float(r[0]), float(r[1]), float(r[2]), float(r[3]),
                         int(r[4]), int(r[5])] for r in rows],
               "seed": cfg.seed, "dim": space.dim, "points": space.npoints,
               "h": cfg.h, "t_max": cfg.t_max, "t_steps": cfg.t_steps,
               "input": cfg.input_path}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    _write_text(cfg, text)
    return 0


def cmd_project(cfg: RunConfig) -> int:
    """Per-point norms of the metric-symmetric and antisymmetric parts of
    an input tangent field, with a class label."""
    if not cfg.input_path:
        raise ConfigError("project requires --in with a bundle holding J and K")
    bundle = load_bundle(cfg.input_path)
    if bundle.J is None or bundle.K is None:
        raise ConfigError("project needs an input bundle with J and K fields")
    space, k = bundle.space, bundle.K
    gf = _metric_field(space)
    p, l = sym_antisym_split(k, gf)
    rows = []
    for i in range(space.npoints):
        sharp = g_adjoint(k.ops[i], FiberMetric(gf.metrics[i]))
        rs = max_abs(k.ops[i] - sharp)
        ra = max_abs(k.ops[i] + sharp)
        label = "symmetric" if rs <= 1e-10 else (
            "antisymmetric" if ra <= 1e-10 else "mixed")
        rows.append([str(space.point_ids[i]), max_abs(p.ops[i]),
                     max_abs(l.ops[i]), label])
    if cfg.format == "csv":
        text = _csv(["id", "p_norm", "l_norm", "class"], rows)
    else:
        doc = {"command": "project", "input": cfg.input_path,
               "points": [{"id": r[0], "p_norm": float(r[1]),
                           "l_norm": float(r[2]), "class": r[3]} for r in rows]}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    _write_text(cfg, text)
    return 0


DISPATCH = {
    "verify": cmd_verify,
    "geodesic": cmd_geodesic,
    "curvature": cmd_curvature,
    "project": cmd_project,
    "signature": cmd_signature,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        cfg = build_config(args)
        return DISPATCH[cfg.command](cfg)
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

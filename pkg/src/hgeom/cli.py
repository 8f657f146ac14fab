"""Command-line entry point ``hgeom``.

Exit codes: 0 success, 1 check violations, 2 usage or input errors.
Floats are printed with ``repr``, which round-trips doubles exactly.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .algebra import as_points
from .errors import HGeomError
from .measure import PointCloud, density_at
from .regions import dist_to_subgroup, region_from_json
from .subgroups import HORIZONTAL, VERTICAL, SplitPair, Subgroup, complement, make_subgroup
from .synthetic import (
    four_corner_ifs,
    sample_ball,
    sample_ifs_fractal,
    sample_intrinsic_graph,
    sample_subgroup,
)
from .tangent import classify_cloud
from .verify import CHECKS, CheckReport, run_check

USAGE_ERROR = 2


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return repr(float(x))


def _json_arg(text: str):
    """Inline JSON, or a path to a JSON file."""
    if text is None:
        return None
    path = Path(text)
    if not text.lstrip().startswith(("[", "{")) and path.exists():
        return json.loads(path.read_text())
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not valid JSON and not a readable file: {text!r}") from exc


def _float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text).strip()
    if text.startswith("["):
        return [float(v) for v in json.loads(text)]
    return [float(v) for v in text.split(",") if v.strip()]


def _seed(value) -> int:
    if value is not None:
        return int(value)
    return int(os.environ.get("HGEOM_SEED", "0"))


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True))


def _default_subgroup(kind: str, n: int) -> Subgroup:
    eye = np.eye(2 * n)
    if kind == VERTICAL:
        return make_subgroup(VERTICAL, eye[1:], n)  # everything but x_1
    return make_subgroup(HORIZONTAL, eye[:1], n)


# ---------------------------------------------------------------- subcommands


def cmd_generate(args) -> int:
    seed = _seed(args.seed)
    n = args.n
    if args.type == "subgroup":
        if args.subgroup:
            S = Subgroup.from_json(_json_arg(args.subgroup))
        elif args.basis:
            S = make_subgroup(args.kind, _json_arg(args.basis), n)
        else:
            S = _default_subgroup(args.kind, n)
        base = None if args.base is None else _json_arg(args.base)
        cloud = sample_subgroup(S, base, args.count, args.box_radius, seed)
    elif args.type == "graph":
        W = Subgroup.from_json(_json_arg(args.W)) if args.W else _default_subgroup(VERTICAL, n)
        V = Subgroup.from_json(_json_arg(args.V)) if args.V else complement(W)
        phi = {"family": args.family}
        if args.value is not None:
            phi["value"] = _json_arg(args.value)
        if args.matrix is not None:
            phi["matrix"] = _json_arg(args.matrix)
        for key in ("slope", "amplitude", "frequency"):
            if getattr(args, key) is not None:
                phi[key] = getattr(args, key)
        cloud = sample_intrinsic_graph(SplitPair(W, V), phi, args.domain_radius, args.count, seed)
    elif args.type == "ifs":
        maps = _json_arg(args.maps) if args.maps else four_corner_ifs(n, args.ratio)
        cloud = sample_ifs_fractal(maps, args.depth, seed, args.count)
    else:
        cloud = sample_ball(n, args.count, args.box_radius, args.k_m, seed)
    if args.out:
        cloud.save(args.out)
    print(f"generated {args.type} cloud: {len(cloud)} points in H^{cloud.n}, k_m={cloud.k_m}"
          + (f" -> {args.out}" if args.out else ""))
    return 0


def cmd_dist(args) -> int:
    S = Subgroup.from_json(_json_arg(args.subgroup))
    d = dist_to_subgroup(as_points(_json_arg(args.p)), S, tol=args.tol, method=args.method)
    if np.ndim(d):
        for v in np.ravel(d):
            print(_fmt(v))
    else:
        print(_fmt(d))
    return 0


def cmd_contains(args) -> int:
    region = region_from_json(_json_arg(args.region))
    out = region.contains(as_points(_json_arg(args.p)))
    for v in np.ravel(out):
        print("true" if v else "false")
    return 0


def _query_points(cloud: PointCloud, args, seed: int) -> np.ndarray:
    if args.points:
        return np.atleast_2d(as_points(_json_arg(args.points)))
    count = min(args.samples, len(cloud))
    rng = np.random.default_rng(seed)
    return cloud.points[np.sort(rng.choice(len(cloud), size=count, replace=False))]


def cmd_density(args) -> int:
    cloud = PointCloud.load(args.cloud)
    k_m = cloud.k_m if args.k_m is None else args.k_m
    radii = _float_list(args.radii)
    pts = _query_points(cloud, args, _seed(args.seed))
    reports = [density_at(cloud, p, k_m, radii) for p in pts]
    rows = [row for i, rep in enumerate(reports) for row in rep.csv_rows(i)]
    header = ("point_index", "radius", "ball_mass", "normalized")
    stream = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(stream)
        w.writerow(header)
        for i, r, m, v in rows:
            w.writerow((i, _fmt(r), _fmt(m), _fmt(v)))
    finally:
        if args.out:
            stream.close()
    if args.out:
        ups = [r.upper_density for r in reports]
        print(f"density: {len(reports)} points, upper proxy range [{_fmt(min(ups))}, {_fmt(max(ups))}] -> {args.out}")
    return 0


def cmd_tangent(args) -> int:
    cloud = PointCloud.load(args.cloud)
    radii = _float_list(args.radii)
    reports = classify_cloud(cloud, args.k, args.aperture, radii, min(args.samples, len(cloud)),
                             _seed(args.seed), args.budget, args.threads)
    payload = [r.to_json() for r in reports]
    if args.out:
        _write_json(args.out, payload)
    conv = sum(r.converged for r in reports)
    failed = sum(r.error is not None for r in reports)
    print(f"tangent: {conv}/{len(reports)} converged, {failed} insufficient-data"
          + (f" -> {args.out}" if args.out else ""))
    return 0


def cmd_verify(args) -> int:
    params = _json_arg(args.params) if args.params else {}
    report = run_check(args.check, params, args.trials, _seed(args.seed))
    if args.out:
        Path(args.out).write_text(report.dumps())
    print(report.summary())
    return 0 if report.passed else 1


def cmd_report(args) -> int:
    reports = []
    for path in args.inputs:
        obj = json.loads(Path(path).read_text())
        for item in obj if isinstance(obj, list) else [obj]:
            reports.append(CheckReport.from_json(item))
    header = ("check_name", "trials", "violations", "skipped", "worst_margin", "tolerance", "seed")
    stream = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(stream)
        w.writerow(header)
        for r in reports:
            w.writerow((r.check_name, r.trials, r.violations, r.skipped, _fmt(r.worst_margin), _fmt(r.tolerance), r.seed))
    finally:
        if args.out:
            stream.close()
    bad = [r for r in reports if not r.passed]
    for r in reports:
        print(r.summary(), file=sys.stderr if not args.out else sys.stdout)
    print(f"report: {len(reports)} checks, {len(bad)} with violations")
    return 1 if bad else 0


# ---------------------------------------------------------------- parser


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="hgeom", description="Heisenberg-group geometry toolkit")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    subs = {}

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="JSON file supplying any flag; command-line flags override it")
        p.add_argument("--seed", type=int, default=None, help="seed (default: $HGEOM_SEED or 0)")
        p.add_argument("--threads", type=int, default=1, help="worker cap for parallel stages")
        p.set_defaults(func=func)
        subs[name] = p
        return p

    g = add("generate", cmd_generate, "write a synthetic PointCloud JSON")
    g.add_argument("--type", choices=("subgroup", "graph", "ifs", "ball"), required=True)
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--count", type=int, default=10_000)
    g.add_argument("--out")
    g.add_argument("--kind", choices=(HORIZONTAL, VERTICAL), default=VERTICAL)
    g.add_argument("--basis", help="JSON list of horizontal basis vectors")
    g.add_argument("--subgroup", help="Subgroup JSON (inline or file)")
    g.add_argument("--base", help="coset base point as a JSON array")
    g.add_argument("--box-radius", type=float, default=1.0)
    g.add_argument("--W", help="vertical domain subgroup of the graph")
    g.add_argument("--V", help="horizontal target subgroup of the graph")
    g.add_argument("--family", choices=("constant", "linear", "smooth"), default="linear")
    g.add_argument("--value")
    g.add_argument("--matrix")
    g.add_argument("--slope", type=float)
    g.add_argument("--amplitude", type=float)
    g.add_argument("--frequency", type=float)
    g.add_argument("--domain-radius", type=float, default=1.0)
    g.add_argument("--maps", help="JSON list of [point, ratio] pairs")
    g.add_argument("--ratio", type=float, default=0.5)
    g.add_argument("--depth", type=int, default=8)
    g.add_argument("--k-m", type=int, default=3, help="declared metric dimension of a ball cloud")

    d = add("dist", cmd_dist, "distance from a point to a homogeneous subgroup")
    d.add_argument("--p", required=True, help="point (or list of points) as JSON")
    d.add_argument("--subgroup", required=True, help="Subgroup JSON (inline or file)")
    d.add_argument("--method", choices=("auto", "bisection"), default="auto")
    d.add_argument("--tol", type=float, default=1e-9)

    c = add("contains", cmd_contains, "region membership of a point")
    c.add_argument("--p", required=True)
    c.add_argument("--region", required=True, help="Region JSON (inline or file)")

    de = add("density", cmd_density, "finite-scale density sweep, CSV output")
    de.add_argument("--cloud", required=True)
    de.add_argument("--radii", required=True, help="decreasing radii, comma separated or JSON")
    de.add_argument("--k-m", type=int, default=None)
    de.add_argument("--points", help="query points as JSON (default: sampled from the cloud)")
    de.add_argument("--samples", type=int, default=10)
    de.add_argument("--out")

    t = add("tangent", cmd_tangent, "fit approximate tangent subgroups at sampled cloud points")
    t.add_argument("--cloud", required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--aperture", type=float, default=0.3)
    t.add_argument("--radii", required=True)
    t.add_argument("--budget", type=int, default=200)
    t.add_argument("--samples", type=int, default=50)
    t.add_argument("--out")

    v = add("verify", cmd_verify, "run one randomized check; exit 1 on violations")
    v.add_argument("--check", required=True, choices=CHECKS)
    v.add_argument("--params", help="JSON object of check parameters (inline or file)")
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--out")

    r = add("report", cmd_report, "aggregate CheckReport JSON files into CSV plus a summary")
    r.add_argument("inputs", nargs="+")
    r.add_argument("--out")
    return parser, subs


def _config_path(argv: list[str]) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(subs: dict, argv: list[str], path: str) -> None:
    """Turn config keys into subcommand defaults so explicit flags still win."""
    command = next((tok for tok in argv if not tok.startswith("-")), None)
    if command not in subs:
        return
    cfg = json.loads(Path(path).read_text())
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    cfg = {k.replace("-", "_"): val for k, val in cfg.items()}
    sp = subs[command]
    known = {a.dest for a in sp._actions}
    unknown = set(cfg) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for a in sp._actions:
        if a.dest in cfg:
            a.required = False
    sp.set_defaults(**cfg)


def run(argv=None) -> int:
    parser, subs = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        path = _config_path(argv)
        if path:
            _apply_config(subs, argv, path)
    except (UsageError, ValueError, OSError) as exc:
        print(f"hgeom: error: bad config: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return USAGE_ERROR
    try:
        return args.func(args)
    except (UsageError, HGeomError, ValueError, KeyError, OSError) as exc:
        print(f"hgeom {args.command}: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

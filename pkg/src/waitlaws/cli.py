"""Command-line driver.

    waitlaws run --experiment critical --horizons 1000,31623 --samples 2000 --out out/
    waitlaws run --config my.json --seed 7
    waitlaws tables --laws theta,delta --alpha 0.3,0.5 --out tables/

Settings are resolved as experiment defaults, then the JSON ``--config``
file, then command-line flags. The exit status is 0 iff every check in the
report passes, 1 if some check fails, 2 for invalid configurations.
"""

from __future__ import annotations

import argparse
import json
import sys

from .experiments import EXPERIMENTS, ConfigError, default_config, run, write_outputs
from .parallel import default_jobs

__all__ = ["main", "build_parser"]


def _floats(s: str) -> list[float]:
    try:
        return [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None


def _ints(s: str) -> list[int]:
    out = []
    for v in _floats(s):
        if v != int(v):
            raise argparse.ArgumentTypeError(f"expected integers, got {v}")
        out.append(int(v))
    return out


def _count(s: str) -> int:
    # accepts 10000 or 1e4
    return _ints(s)[0]


def _pairs(s: str) -> list[list[float]]:
    out = []
    for item in s.split(","):
        try:
            x, y = item.split(":")
            out.append([float(x), float(y)])
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected x:y pairs, got {item!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="waitlaws", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a Monte Carlo experiment and check its acceptance bands")
    r.add_argument("--experiment", choices=[e for e in EXPERIMENTS if e != "tables"])
    r.add_argument("--config", help="JSON file with ExperimentConfig fields")
    r.add_argument("--map", choices=["farey", "lasota-yorke", "thaler0", "gauss", "renewal"])
    r.add_argument("--alpha", type=_floats, help="comma-separated alpha values (renewal)")
    r.add_argument("--horizons", type=_ints)
    r.add_argument("--horizon", type=_count, help="single horizon; same as --horizons N")
    r.add_argument("--samples", type=_count)
    r.add_argument("--seed", type=int)
    r.add_argument("--x", dest="x_grid", type=_floats, help="x grid, e.g. 0.5,1,2")
    r.add_argument("--xy", dest="xy_grid", type=_pairs, help="(x, y) grid, e.g. 0.5:0.5,0:1")
    r.add_argument("--cap", type=_count, help="iteration cap for float orbits")
    r.add_argument("--records", action="store_true", help="also write per-sample CSV records")
    r.add_argument("--out", help="output directory")
    r.add_argument("--jobs", type=int, default=None, help="worker threads (default: all cores)")

    t = sub.add_parser("tables", help="write (x, pdf, cdf) grids of the limit laws")
    t.add_argument("--laws", default="theta", help="comma-separated law names")
    t.add_argument("--alpha", type=_floats)
    t.add_argument("--points", type=int, default=None)
    t.add_argument("--xmax", type=float, default=None)
    t.add_argument("--out", required=True)
    return p


def _resolve(args) -> "ExperimentConfig":
    file_cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
    if args.command == "tables":
        experiment = "tables"
        flags = dict(laws=[s.strip() for s in args.laws.split(",") if s.strip()],
                     alphas=args.alpha, grid_points=args.points, grid_max=args.xmax, out=args.out)
    else:
        experiment = args.experiment or file_cfg.get("experiment")
        if experiment is None:
            raise ConfigError("give --experiment or a config file with an 'experiment' key")
        horizons = args.horizons or ([args.horizon] if args.horizon is not None else None)
        flags = dict(map=args.map, alphas=args.alpha, horizons=horizons, samples=args.samples,
                     seed=args.seed, x_grid=args.x_grid, xy_grid=args.xy_grid, cap=args.cap,
                     out=args.out, jobs=args.jobs)
        if args.records:
            flags["write_records"] = True
    merged = {k: v for k, v in file_cfg.items() if k != "experiment"}
    merged.update({k: v for k, v in flags.items() if v is not None})
    cfg = default_config(experiment, **merged)
    if getattr(args, "jobs", None) is None:
        cfg.jobs = default_jobs()
    cfg.validate()
    return cfg


def _summary(rep) -> str:
    lines = []
    for r in rep.rows:
        mark = {True: "PASS", False: "FAIL", None: "    "}[r["pass"]]
        val = r["value"]
        val = f"{val:.6g}" if isinstance(val, float) else str(val)
        band = r["band"] or ""
        alpha = f" alpha={r['alpha']}" if "alpha" in r else ""
        lines.append(f"{mark}  n={r['n']} N={r['N']}{alpha}  {r['statistic']} = {val}  {band}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        rep = run(cfg)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"waitlaws: error: {exc}", file=sys.stderr)
        return 2
    print(_summary(rep))
    if cfg.out:
        for p in write_outputs(cfg, rep, cfg.out):
            print(f"wrote {p}")
    print("all checks passed" if rep.all_pass else f"{len(rep.failures())} check(s) failed")
    return 0 if rep.all_pass else 1


if __name__ == "__main__":
    sys.exit(main())

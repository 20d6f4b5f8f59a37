"""Command line front end.

    weylmod verify --suite spinor --grid-n 48 --grid-l 2.5 --seed 0 --out report.json
    weylmod flow-trace --lambda-max 6 --steps 241 --seeds seeds.json --out trace.csv
    weylmod entropy --state state.json --out entropy.json

Exit status is 0 when every check passes, 1 when a check fails and 2 for
configuration or input errors.
"""

import argparse
import csv
import json
import logging
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import ConfigError, WeylmodError
from .report import CheckReport, write_json
from .threads import limited_threads
from .waves import GridSpec

log = logging.getLogger("weylmod")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
CONFIG_KEYS = {"lambdas", "tolerances", "instances"}


def _grid(n, length, base=None):
    base = base or GridSpec()
    try:
        return GridSpec(base.L if length is None else length, base.N if n is None else n)
    except ValueError as exc:
        raise ConfigError(str(exc), "grid") from exc


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", path) from exc


def _load_config(path):
    if path is None:
        return {}
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise ConfigError("expected a JSON object", path)
    unknown = set(obj) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", path)
    tols = obj.get("tolerances", {})
    if not isinstance(tols, dict) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in tols.values()):
        raise ConfigError("expected an object of numbers", f"{path}.tolerances")
    lams = obj.get("lambdas")
    if lams is not None and (not isinstance(lams, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in lams)):
        raise ConfigError("expected a list of numbers", f"{path}.lambdas")
    inst = obj.get("instances")
    if inst is not None and (isinstance(inst, bool) or not isinstance(inst, int) or inst < 1):
        raise ConfigError("expected a positive integer", f"{path}.instances")
    return obj


def cmd_verify(args):
    from .suites import DEFAULT_LAMBDAS, RunConfig, run_suite

    cfg_file = _load_config(args.config)
    config = RunConfig(
        suite=args.suite,
        grid=_grid(args.grid_n, args.grid_l),
        seed=args.seed,
        lambdas=tuple(cfg_file.get("lambdas") or DEFAULT_LAMBDAS),
        tolerances=dict(cfg_file.get("tolerances", {})),
        instances=cfg_file.get("instances", 10_000),
    )
    with limited_threads():
        checks, extra = run_suite(config)
    report = CheckReport(
        suite=config.suite,
        checks=checks,
        environment={"grid": {"L": config.grid.L, "N": config.grid.N}, "seed": config.seed},
        extra=extra,
    )
    for c in checks:
        log.info("%-4s %s = %.3e", "ok" if c.passed else "FAIL", c.name, c.value)
    write_json(report.as_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _load_seeds(path):
    obj = _read_json(path)
    if isinstance(obj, dict):
        obj = obj.get("seeds")
    try:
        seeds = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError("expected a list of four-vectors", path) from exc
    if seeds.ndim != 2 or seeds.shape[1] != 4 or len(seeds) == 0:
        raise ConfigError("expected a non-empty list of four-vectors", path)
    if not np.all(np.isfinite(seeds)):
        raise ConfigError("seed coordinates must be finite", path)
    return seeds


def write_trace_csv(rows, out):
    fields = ["seed", "lambda", "x0", "x1", "x2", "x3", "branch", "marker"]

    def fmt(v):
        return format(v, ".17g") if isinstance(v, float) else v

    fh = sys.stdout if out in (None, "-") else open(out, "w", newline="")
    try:
        w = csv.writer(fh)
        w.writerow(fields)
        for r in rows:
            w.writerow([fmt(r[k]) for k in fields])
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_flow_trace(args):
    from .flow import trace_flow

    if args.steps < 2:
        raise ConfigError("steps must be >= 2", "steps")
    if not args.lambda_max > 0:
        raise ConfigError("lambda-max must be positive", "lambda_max")
    rows = trace_flow(args.lambda_max, args.steps, _load_seeds(args.seeds))
    write_trace_csv(rows, args.out)
    return EXIT_OK


def cmd_entropy(args):
    from .dirac import MajoranaState, majorana_embed
    from .entropy import THEOREM_PREFACTOR, energy_density_profile, entropy_report, normalize
    from .states import load_state

    spec = load_state(args.state)
    grid = _grid(args.grid_n, args.grid_l, spec.grid)
    if not (spec.majorana or args.embed):
        raise ConfigError("state is not flagged majorana; pass --embed to embed it", args.state)
    with limited_threads():
        psi = spec.build(grid)
        if not isinstance(psi, MajoranaState):
            psi = majorana_embed(psi)
        if not args.no_normalize:
            psi, factor = normalize(psi)
            log.info("normalization factor applied: %.17g", factor)
        prefactor = THEOREM_PREFACTOR if args.prefactor is None else args.prefactor
        rep = entropy_report(psi, prefactor)
        if args.profile_csv:
            energy_density_profile(psi).to_csv(args.profile_csv)
    out = {
        "state": spec.name or str(args.state),
        "environment": {"version": __version__, "grid": {"L": grid.L, "N": grid.N}},
        **rep.as_dict(),
    }
    out["generated_at"] = datetime.now(timezone.utc).isoformat()
    write_json(out, args.out)
    finite = all(np.isfinite(v) for v in (rep.s_generator, rep.s_fourier, rep.s_energy))
    return EXIT_OK if finite else EXIT_FAIL


def build_parser():
    from .suites import SUITES

    p = argparse.ArgumentParser(prog="weylmod", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-q", "--quiet", action="store_true", help="only log warnings")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    v.add_argument("--suite", required=True, help=f"one of {', '.join(SUITES)}")
    v.add_argument("--grid-n", type=int, default=None, help="grid points per axis (default 48)")
    v.add_argument("--grid-l", type=float, default=None, help="box half-width (default 2.5)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--config", default=None, help="JSON with lambdas, tolerances, instances")
    v.add_argument("--out", default="-", help="report path, '-' for stdout")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("flow-trace", help="sample modular-flow trajectories to CSV")
    f.add_argument("--lambda-max", type=float, required=True)
    f.add_argument("--steps", type=int, required=True)
    f.add_argument("--seeds", required=True, help="JSON list of (x0, x1, x2, x3) seed points")
    f.add_argument("--out", default="-")
    f.set_defaults(func=cmd_flow_trace)

    e = sub.add_parser("entropy", help="relative entropy of a Majorana state by three routes")
    e.add_argument("--state", required=True, help="JSON state file")
    e.add_argument("--no-normalize", action="store_true",
                   help="require ||Psi|| = 1 instead of rescaling")
    e.add_argument("--embed", action="store_true", help="embed a Weyl state as a Majorana state")
    e.add_argument("--grid-n", type=int, default=None)
    e.add_argument("--grid-l", type=float, default=None)
    e.add_argument("--prefactor", type=float, default=None,
                   help="energy-density prefactor (default 1/4 pi^2)")
    e.add_argument("--profile-csv", default=None, help="also dump t(x) to this CSV")
    e.add_argument("--out", default="-")
    e.set_defaults(func=cmd_entropy)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
    except (WeylmodError, OSError, ValueError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

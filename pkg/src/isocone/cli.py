"""Command-line interface: bounds, 1-D minimization, profiles, verification.

Commands emit machine-readable output (JSON records one per line, or CSV
with a header row) and use the exit codes

    0  success
    1  verification failure
    2  spec/flag parse failure
    3  no bound formula applies to the input
    4  minimization did not converge (a partial record is still printed)

A JSON config file (``--config``) may supply any flag by its long name;
explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .bounds import REPORT_FIELDS, compare_bounds, load_catalog, parse_manifold
from .errors import (
    ConvergenceError,
    FormulaInapplicableError,
    SpecParseError,
)
from .geometry import SphericalCone
from .isoperimetry import cone_iso_profile, sphere_iso_profile
from .variational import LineProblem, closed_form_line, minimize_line
from .verify import SUITES, run_suite

__all__ = ["main", "RunConfig"]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_INAPPLICABLE = 3
EXIT_NO_CONVERGENCE = 4

MINIMIZE_FIELDS = ("n", "V", "scal", "value", "closed_form", "rel_err", "residual", "iterations")


@dataclass
class RunConfig:
    command: str
    manifold: str = ""
    format: str = "json"
    output: str | None = None
    grid: int = 4001
    domain: float = 12.0
    samples: int = 99
    suite: str = "all"
    seed: int = 0
    obj_rtol: float = 1e-12
    catalog: str | None = None
    minimizer_out: str | None = None


def _require_finite(record: dict) -> dict:
    for key, val in record.items():
        if isinstance(val, float) and not math.isfinite(val):
            raise RuntimeError(f"refusing to serialize non-finite {key}={val}")
    return record


def _emit(records: list[dict], fields, fmt: str, output: str | None) -> None:
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for rec in records:
            writer.writerow(["" if rec.get(k) is None else repr(rec[k]) if isinstance(rec[k], float) else rec[k] for k in fields])
    else:
        for rec in records:
            buf.write(json.dumps({k: rec.get(k) for k in fields}))
            buf.write("\n")
    text = buf.getvalue()
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve(cfg: RunConfig):
    extra = load_catalog(cfg.catalog) if cfg.catalog else None
    return parse_manifold(cfg.manifold, extra)


def cmd_bound(cfg: RunConfig) -> int:
    entry = _resolve(cfg)
    records = [_require_finite(rep.to_dict()) for rep in compare_bounds(entry)]
    _emit(records, REPORT_FIELDS, cfg.format, cfg.output)
    return EXIT_OK


def cmd_minimize(cfg: RunConfig) -> int:
    entry = _resolve(cfg)
    if not entry.einstein:
        raise FormulaInapplicableError(
            "the 1-D reduction needs an Einstein base (constant scalar curvature)"
        )
    norm = entry.normalized()
    n = norm.n
    problem = LineProblem(
        n=n,
        base_volume=norm.volume,
        scal=n * (n - 1.0),
        half_width=cfg.domain,
        num=cfg.grid,
    )
    closed = closed_form_line(n, norm.volume)

    def record(res):
        return _require_finite(
            {
                "n": n,
                "V": norm.volume,
                "scal": problem.scal,
                "value": res.value,
                "closed_form": closed,
                "rel_err": abs(res.value - closed) / closed,
                "residual": res.residual,
                "iterations": res.iterations,
            }
        )

    try:
        res = minimize_line(problem, obj_rtol=cfg.obj_rtol)
    except ConvergenceError as exc:
        if exc.best is not None:
            _emit([record(exc.best)], MINIMIZE_FIELDS, cfg.format, cfg.output)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    _emit([record(res)], MINIMIZE_FIELDS, cfg.format, cfg.output)
    if cfg.minimizer_out:
        res.minimizer.to_csv(cfg.minimizer_out)
    return EXIT_OK


def cmd_profile(cfg: RunConfig) -> int:
    entry = _resolve(cfg)
    if cfg.samples < 2:
        raise SpecParseError("--samples must be >= 2")
    cone = SphericalCone(entry.as_einstein_data())
    rows = []
    for k in range(1, cfg.samples + 1):
        beta = k / (cfg.samples + 1.0)
        cp = cone_iso_profile(cone, beta)
        sp = sphere_iso_profile(cone.n + 1, beta)
        rows.append((beta, cp, sp, abs(cp - sp)))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["beta", "cone_perimeter", "sphere_perimeter", "abs_diff"])
    for row in rows:
        writer.writerow([repr(float(x)) for x in row])
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.suite != "all" and cfg.suite not in SUITES:
        raise SpecParseError(
            f"unknown suite {cfg.suite!r}; choose from {sorted(SUITES)} or 'all'"
        )
    results = run_suite(cfg.suite, seed=cfg.seed)
    failed = [r for r in results if not r.passed]
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}")
    if failed:
        first = failed[0]
        lines.append(
            "first counterexample: "
            + json.dumps({"check": first.name, **_jsonable(first.detail)})
        )
    text = "\n".join(lines) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def _jsonable(detail: dict) -> dict:
    out = {}
    for k, v in detail.items():
        if isinstance(v, (np.floating, np.integer)):
            out[k] = v.item()
        elif isinstance(v, np.ndarray):
            out[k] = v.tolist()
        else:
            out[k] = v
    return out


COMMANDS = {
    "bound": cmd_bound,
    "minimize": cmd_minimize,
    "profile": cmd_profile,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isocone",
        description="Yamabe-type bounds and isoperimetric profiles on spherical cones",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file supplying defaults for any flag")
        sp.add_argument("--format", choices=["json", "csv"], default=None)
        sp.add_argument("--output", default=None, help="write output here instead of stdout")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--catalog", default=None, help="extra JSON manifold catalog")

    sp = sub.add_parser("bound", help="lower-bound reports for a manifold spec")
    common(sp)
    sp.add_argument("--manifold", required=True)

    sp = sub.add_parser("minimize", help="1-D Yamabe quotient minimization")
    common(sp)
    sp.add_argument("--manifold", required=True)
    sp.add_argument("--grid", type=int, default=None, help="number of line nodes")
    sp.add_argument("--domain", type=float, default=None, help="half-width T")
    sp.add_argument("--obj-rtol", type=float, default=None, dest="obj_rtol")
    sp.add_argument("--minimizer-out", default=None, dest="minimizer_out")

    sp = sub.add_parser("profile", help="cone vs sphere isoperimetric profile table")
    common(sp)
    sp.add_argument("--manifold", required=True)
    sp.add_argument("--samples", type=int, default=None)

    sp = sub.add_parser("verify", help="run a property suite")
    common(sp)
    sp.add_argument("--suite", default=None)
    return parser


_DEFAULTS = RunConfig(command="")


def _merge_config(args: argparse.Namespace) -> RunConfig:
    file_values = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_values = json.load(fh)
        if not isinstance(file_values, dict):
            raise SpecParseError("config file must hold a JSON object")
    cfg = RunConfig(command=args.command)
    for name in vars(cfg):
        if name == "command":
            continue
        flag = getattr(args, name, None)
        if flag is not None:
            setattr(cfg, name, flag)
        elif name in file_values:
            setattr(cfg, name, file_values[name])
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        return COMMANDS[args.command](cfg)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FormulaInapplicableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: run experiments, apply symbols, drive the suite.

Exit codes: 0 all assertions pass, 1 assertion failure, 2 bad flags or
unparsable inputs, 3 resource errors (budgets, ranges, frequency caps).
Output files are written atomically; the output root comes from --out, the
config file, or the TORSPEC_OUT environment variable, in that order of
precedence.
"""

from __future__ import annotations

import argparse
import inspect
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .cutoffs import CutoffProfile, make_cutoff
from .errors import (
    BadRadii,
    BudgetExceeded,
    FrequencyOutOfRange,
    RangeTooLarge,
    TorspecError,
    WindowTooLarge,
)
from .experiments import REGISTRY
from .operator import apply as op_apply
from .operator import support_rule_xi
from .serialize import load_sparse, load_symbol, save_sparse, write_json

RESOURCE_ERRORS = (BudgetExceeded, RangeTooLarge, WindowTooLarge, FrequencyOutOfRange)


@dataclass
class RunConfig:
    """Static run configuration: output root, profiles, seeds, overrides."""

    out: Path = Path("runs")
    seed: int = 0
    grid_m: int = 2**15
    emit_plots: bool = False
    parallel: bool = False
    profiles: dict[str, CutoffProfile] = field(default_factory=dict)
    overrides: dict[str, dict] = field(default_factory=dict)

    def profile(self, name: str) -> CutoffProfile:
        if name in self.profiles:
            return self.profiles[name]
        if name == "main":
            return make_cutoff(1.1, 2.0, "exp")
        if name == "alt":
            return make_cutoff(1.05, 1.9, "poly7")
        raise KeyError(f"unknown profile {name!r}")


def _parse_value(raw: str):
    raw = raw.strip()
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        pass
    if "," in raw:
        return [_parse_value(part) for part in raw.split(",")]
    return raw


def load_config(path: str | None) -> RunConfig:
    """Parse the flat dotted key-value configuration file."""
    cfg = RunConfig()
    env_out = os.environ.get("TORSPEC_OUT")
    if env_out:
        cfg.out = Path(env_out)
    if path is None:
        return cfg
    with open(path) as handle:
        for line_no, line in enumerate(handle, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected key = value")
            key, raw = (part.strip() for part in line.split("=", 1))
            value = _parse_value(raw)
            if key == "out":
                cfg.out = Path(str(value))
            elif key == "seed":
                cfg.seed = int(value)
            elif key == "grid.M":
                cfg.grid_m = int(value)
            elif key == "emit_plots":
                cfg.emit_plots = bool(value)
            elif key.startswith("profile."):
                spec = value if isinstance(value, dict) else json.loads(str(value))
                cfg.profiles[key.split(".", 1)[1]] = CutoffProfile(
                    float(spec["r"]), float(spec["R"]), str(spec.get("kind", "exp"))
                )
            elif "." in key:
                exp, param = key.split(".", 1)
                cfg.overrides.setdefault(exp, {})[param] = value
            else:
                raise ValueError(f"{path}:{line_no}: unknown key {key!r}")
    return cfg


_PLOT_TEMPLATE = """\
#!/usr/bin/env python
\"\"\"Render the CSV tables of the {name} experiment (generated, not executed).\"\"\"
import csv
import sys
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
for table in {tables!r}:
    rows = list(csv.reader((here / table).open()))
    header, data = rows[0], rows[1:]
    if not data:
        continue
    fig, ax = plt.subplots()
    xs = range(len(data))
    for col in range(1, len(header)):
        try:
            ys = [float(r[col]) for r in data]
        except ValueError:
            continue
        ax.plot(xs, ys, marker="o", label=header[col])
    ax.set_title("{name}: " + table)
    ax.set_xlabel(header[0])
    ax.legend()
    fig.savefig(here / (table.rsplit(".", 1)[0] + ".png"), dpi=120)
print("wrote plots next to the CSV tables")
"""


def _emit_plot_script(name: str, outdir: Path, artifacts: list[str]) -> str:
    tables = [Path(a).name for a in artifacts if a.endswith(".csv")]
    path = outdir / f"plot_{name}.py"
    from .serialize import atomic_write_text

    atomic_write_text(path, _PLOT_TEMPLATE.format(name=name, tables=tables))
    return str(path)


def _experiment_kwargs(name: str, cfg: RunConfig, flag_params: dict) -> dict:
    fn = REGISTRY[name]
    accepted = set(inspect.signature(fn).parameters)
    kwargs = {}
    for source in (cfg.overrides.get(name, {}), flag_params):
        for key, value in source.items():
            pkey = key.replace("-", "_")
            if pkey not in accepted:
                raise ValueError(f"experiment {name!r} has no parameter {key!r}")
            kwargs[pkey] = value
    return kwargs


def run_experiment(name: str, cfg: RunConfig, flag_params: dict) -> int:
    outdir = cfg.out / name
    outdir.mkdir(parents=True, exist_ok=True)
    kwargs = _experiment_kwargs(name, cfg, flag_params)
    report = REGISTRY[name](outdir=outdir, **kwargs)
    if cfg.emit_plots:
        report.artifacts.append(_emit_plot_script(name, outdir, report.artifacts))
    write_json(outdir / "report.json", report.to_json())
    for assertion in report.assertions:
        state = "PASS" if assertion.passed else "FAIL"
        print(f"[{state}] {name}: {assertion.id} (measured {assertion.measured:.3g},"
              f" tol {assertion.tolerance:.3g})")
    return 0 if report.passed else 1


def run_suite(cfg: RunConfig, flag_params: dict) -> int:
    started = time.time()
    summary = {"experiments": [], "pass": True}
    jobs = list(REGISTRY)
    if cfg.parallel:
        from concurrent.futures import ThreadPoolExecutor

        def job(name):
            outdir = cfg.out / name
            outdir.mkdir(parents=True, exist_ok=True)
            kwargs = _experiment_kwargs(name, cfg, {})
            return name, REGISTRY[name](outdir=outdir, **kwargs)

        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(job, jobs))
    else:
        results = []
        for name in jobs:
            outdir = cfg.out / name
            outdir.mkdir(parents=True, exist_ok=True)
            kwargs = _experiment_kwargs(name, cfg, {})
            results.append((name, REGISTRY[name](outdir=outdir, **kwargs)))
    for name, report in results:
        outdir = cfg.out / name
        if cfg.emit_plots:
            report.artifacts.append(_emit_plot_script(name, outdir, report.artifacts))
        write_json(outdir / "report.json", report.to_json())
        summary["experiments"].append(report.to_json())
        summary["pass"] = summary["pass"] and report.passed
        print(f"[{'PASS' if report.passed else 'FAIL'}] {name}")
    summary["wall_seconds"] = time.time() - started
    write_json(cfg.out / "summary.json", summary)
    print(f"suite finished in {summary['wall_seconds']:.1f}s:"
          f" {'PASS' if summary['pass'] else 'FAIL'}")
    return 0 if summary["pass"] else 1


def run_apply(args, cfg: RunConfig) -> int:
    symbol = load_symbol(args.symbol)
    field_in = load_sparse(args.field)
    if args.modulate is not None:
        profile = cfg.profile(args.profile)
        symbol_m = args.modulate
        from .symbols import symbol_full_modulate

        out = op_apply(symbol_full_modulate(symbol, symbol_m, profile), field_in)
    else:
        out = op_apply(symbol, field_in)
    xi_set = support_rule_xi(symbol, field_in, out if args.modulate is None else None)
    contained = out.spectrum() <= xi_set
    save_sparse(out, args.out_field)
    print(f"output modes: {len(out)}; support bound size: {len(xi_set)};"
          f" containment: {contained}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="flat key=value config file")
    parser.add_argument("--out", default=None, help="output directory root")
    parser.add_argument("--emit-plots", action="store_true")


_RUN_FLAGS = [
    ("--d", str),
    ("--j0", int),
    ("--J", int),
    ("--m", int),
    ("--n-samples", int),
    ("--n-list", str),
    ("--j-list", str),
    ("--theta", str),
    ("--seed", int),
    ("--trials", int),
    ("--n-modes", int),
    ("--f", str),
    ("--M", int),
    ("--K", int),
    ("--Q", int),
    ("--with-2d", str),
]


def _collect_flag_params(args) -> dict:
    params = {}
    for flag, _ in _RUN_FLAGS:
        key = flag.lstrip("-").replace("-", "_")
        value = getattr(args, key, None)
        if value is None:
            continue
        if isinstance(value, str):
            value = _parse_value(value)
        params[key] = value
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torspec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one named experiment")
    p_run.add_argument("name", help=f"one of: {', '.join(REGISTRY)}")
    _add_common(p_run)
    for flag, typ in _RUN_FLAGS:
        p_run.add_argument(flag, type=typ, default=None)

    p_suite = sub.add_parser("suite", help="run every experiment at default parameters")
    _add_common(p_suite)
    p_suite.add_argument("--parallel", action="store_true")

    p_part = sub.add_parser("partition-check", help="shortcut for `run partition-check`")
    _add_common(p_part)
    p_part.add_argument("--m", type=int, default=None)
    p_part.add_argument("--n-samples", type=int, default=None)
    p_part.add_argument("--seed", type=int, default=None)

    p_apply = sub.add_parser("apply", help="apply a serialized symbol to a field")
    _add_common(p_apply)
    p_apply.add_argument("--symbol", required=True)
    p_apply.add_argument("--field", required=True)
    p_apply.add_argument("--out-field", required=True)
    p_apply.add_argument("--modulate", type=int, default=None)
    p_apply.add_argument("--profile", default="main")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        if args.out:
            cfg.out = Path(args.out)
        if getattr(args, "emit_plots", False):
            cfg.emit_plots = True
        if getattr(args, "parallel", False):
            cfg.parallel = True
    except (OSError, ValueError, KeyError, json.JSONDecodeError, BadRadii) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "run":
            if args.name not in REGISTRY:
                print(f"unknown experiment {args.name!r}", file=sys.stderr)
                return 2
            return run_experiment(args.name, cfg, _collect_flag_params(args))
        if args.command == "partition-check":
            return run_experiment("partition-check", cfg, _collect_flag_params(args))
        if args.command == "suite":
            return run_suite(cfg, {})
        if args.command == "apply":
            try:
                return run_apply(args, cfg)
            except (OSError, KeyError, json.JSONDecodeError) as exc:
                print(f"parse error: {exc}", file=sys.stderr)
                return 2
        print(f"unknown command {args.command!r}", file=sys.stderr)
        return 2
    except RESOURCE_ERRORS as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"bad flags: {exc}", file=sys.stderr)
        return 2
    except TorspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

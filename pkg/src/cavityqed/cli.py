"""Command-line front end.

    cavityqed <subcommand> [--config PATH] [--seed N] [--out DIR]
                           [--trajectories N] [--ideal]

Subcommands: rabi, splitting, ramsey, phase-gate, field-phase, cnot, qnd,
validate.  Each run writes ``<name>.csv`` (plus ``<name>.meta.json``) into
``--out`` and finally ``manifest.json`` with SHA-256 checksums.

Exit codes: 0 success, 1 configuration/usage error, 2 numerical error or
failed validation.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import build_config, load_config
from .errors import ConfigError, NumericalError
from .experiments import EXPERIMENTS, ResultTable, jumps_table
from .hilbert import RngStream

SUBCOMMANDS = ("rabi", "splitting", "ramsey", "phase-gate", "field-phase", "cnot", "qnd", "validate")

# dimension a config scan must have for each experiment
SCAN_KIND = {
    "rabi": "time",
    "splitting": "angular_frequency",
    "ramsey": "angle",
    "phase-gate": "angle",
    "field-phase": "angle",
}

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--seed", type=_seed, help="master RNG seed (overrides config)")
    common.add_argument("--out", default="out", help="output directory (default: ./out)")
    common.add_argument("--trajectories", type=_positive_int, help="ensemble size / shots per point")
    common.add_argument("--ideal", action="store_true", help="suppress stochastic layers")

    parser = _Parser(prog="cavityqed", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
    helps = {
        "rabi": "vacuum Rabi oscillation scan",
        "splitting": "empty vs one-atom transmission spectra",
        "ramsey": "Ramsey fringes without cavity interaction",
        "phase-gate": "phase-gate fringes, 0 vs 1 photon",
        "field-phase": "conditional field phase via coherent injection",
        "cnot": "photon-controlled NOT truth table",
        "qnd": "QND tracking of thermal photon birth and death",
        "validate": "run the invariant self-checks",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def resolve_config(args):
    cfg = load_config(args.config) if args.config else build_config({})
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.trajectories is not None:
        changes["trajectories"] = args.trajectories
    if args.ideal:
        changes["ideal"] = True
    return replace(cfg, **changes) if changes else cfg


def _jsonable(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _atomic_write(path: Path, data: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _run_experiment(command: str, cfg) -> dict:
    """Returns ``{filename: text}`` for every output of one experiment."""
    if cfg.scan is not None and command in SCAN_KIND and cfg.scan.variable != SCAN_KIND[command]:
        raise ConfigError(f"{command} scans a {SCAN_KIND[command]} but the config scan is a {cfg.scan.variable}")
    table = EXPERIMENTS[command](cfg)
    stem = command.replace("-", "_")
    outputs = {f"{stem}.csv": table.to_csv(), f"{stem}.meta.json": _dumps(table.metadata)}
    if command == "qnd":
        outputs["qnd_jumps.csv"] = jumps_table(table).to_csv()
    if command == "cnot":
        _print_truth_table(table)
    else:
        _print_summary(command, table)
    return outputs


def _print_truth_table(table: ResultTable) -> None:
    print("control_in target_in -> control_out target_out")
    for row in zip(table["control_in"], table["target_in"], table["control_out"], table["target_out"]):
        print(f"|{row[0]}>        {row[1]}        -> |{row[2]}>         {row[3]}")


def _print_summary(command: str, table: ResultTable) -> None:
    meta = table.metadata
    if command == "qnd":
        s = meta["summary"]
        print(f"occupancy {s['occupancy']:.5f} +- {s['occupancy_stderr']:.5f} (expected {s['expected_occupancy']}), "
              f"dwell {s['dwell_time']:.5f} s +- {s['dwell_time_stderr']:.5f} (expected {s['expected_dwell_time']:.5f})")
    elif "shift" in meta:
        print(f"{command}: fitted fringe shift {meta['shift']:.12f} rad over {len(table)} points")
    elif command == "splitting":
        print(f"splitting: peak separation {meta['separation']:.6g} rad/s (2 g0 = {meta['expected_separation']:.6g})")
    else:
        print(f"{command}: {len(table)} rows")


def _run_validate() -> tuple:
    from .validate import run_all
    results = run_all()
    rows = {"check": [], "passed": [], "detail": []}
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        rows["check"].append(name)
        rows["passed"].append(int(ok))
        rows["detail"].append(detail)
    table = ResultTable({k: np.array(v, dtype=object) for k, v in rows.items()})
    return {"validate.csv": table.to_csv()}, all(ok for _, ok, _ in results)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    if args.command is None:
        print(parser.format_usage(), end="", file=sys.stderr)
        return EXIT_CONFIG

    started = _dt.datetime.now(_dt.timezone.utc).isoformat()
    try:
        cfg = resolve_config(args)
        if args.command == "validate":
            outputs, ok = _run_validate()
        else:
            outputs, ok = _run_experiment(args.command, cfg), True
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        files = []
        for name, text in outputs.items():
            path = out_dir / name
            _atomic_write(path, text)
            files.append({"path": name, "sha256": _sha256(path), "bytes": path.stat().st_size})
        manifest = {
            "artifact": "cavityqed",
            "version": __version__,
            "command": args.command,
            "argv": list(argv) if argv is not None else sys.argv[1:],
            "seed": cfg.seed,
            "rng": RngStream.GENERATOR,
            "config": cfg.echo(),
            "started": started,
            "finished": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "outputs": files,
        }
        _atomic_write(out_dir / "manifest.json", _dumps(manifest))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK if ok else EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

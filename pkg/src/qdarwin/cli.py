"""``qdarwin`` command line: simulate, sweep, ecc, version.

Experiment parameters come from ``--config FILE`` (``key = value`` lines, an
optional ``[experiment]`` header, keys spelled like the flags) and are
overridden by flags given on the command line.

Exit codes: 0 success, 2 invalid arguments or config, 3 internal numerical
consistency failure.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import re
import sys
import tempfile
from pathlib import Path

from . import __version__
from .classical_ecc import error_rate_experiment
from .errors import NumericalConsistencyError
from .records import (FORMATS, ExperimentSpec, curve_to_csv, fmt, record_to_json, simulate,
                      summary_to_csv)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

SWEEP_PARAMS = ("copy_angle", "scattering_rounds", "n_env")

_PI_EXPR = re.compile(r"^\s*(?:([0-9.]+)\s*\*?\s*)?pi\s*(?:/\s*([0-9.]+))?\s*$")


class UsageError(ValueError):
    pass


def parse_angle(text: str) -> float:
    """Radians as a float or as ``pi``, ``pi/2``, ``3*pi/4``."""
    m = _PI_EXPR.match(str(text).lower())
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


def parse_system_init(text):
    if text in ("plus", "zero"):
        return text
    try:
        return tuple(complex(part.strip().replace(" ", "")) for part in str(text).split(","))
    except ValueError:
        raise UsageError(f"cannot parse system init {text!r}") from None


_CONVERTERS = {
    "n_env": int,
    "copy_angle": parse_angle,
    "system_init": parse_system_init,
    "scattering_rounds": int,
    "scattering_angle": parse_angle,
    "scattering_kind": str,
    "seed": int,
    "delta": float,
    "policy_threshold": int,
    "mc_samples": int,
    "output_path": str,
    "format": str,
}


def read_config(path: str) -> dict:
    text = Path(path).read_text()
    if not re.search(r"^\s*\[", text, flags=re.M):
        text = "[experiment]\n" + text
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise UsageError(f"malformed config file {path}: {exc}") from None
    out = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            name = key.replace("-", "_")
            if name == "out":
                name = "output_path"
            if name not in _CONVERTERS:
                raise UsageError(f"unknown config key {key!r} in {path}")
            out[name] = value
    return out


def _experiment_flags(p: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    p.add_argument("--config", default=s, help="key = value file; flags override it")
    p.add_argument("--n-env", dest="n_env", default=s)
    p.add_argument("--copy-angle", dest="copy_angle", default=s, help="radians; 'pi/2' accepted")
    p.add_argument("--system-init", dest="system_init", default=s,
                   help="plus, zero, or two comma-separated complex amplitudes")
    p.add_argument("--scattering-rounds", dest="scattering_rounds", default=s)
    p.add_argument("--scattering-angle", dest="scattering_angle", default=s, help="radians")
    p.add_argument("--scattering-kind", dest="scattering_kind", default=s,
                   choices=("flip", "swap"))
    p.add_argument("--delta", default=s)
    p.add_argument("--mc-samples", dest="mc_samples", default=s)
    p.add_argument("--policy-threshold", dest="policy_threshold", default=s)
    p.add_argument("--seed", default=s)
    p.add_argument("--out", dest="output_path", default=s)
    p.add_argument("--format", default=s, choices=FORMATS)
    p.add_argument("--workers", type=int, default=1,
                   help="threads for fragment evaluation; output does not depend on it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdarwin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="one run: dynamics, MI curve, redundancy")
    _experiment_flags(p)

    p = sub.add_parser("sweep", help="repeat simulate over one parameter")
    _experiment_flags(p)
    p.add_argument("--sweep-param", required=True, choices=SWEEP_PARAMS)
    p.add_argument("--values", required=True, help="comma-separated values")

    p = sub.add_parser("ecc", help="repetition-code error-rate experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    sub.add_parser("version", help="print the tool version")
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    raw = read_config(args.config) if getattr(args, "config", None) else {}
    for name in _CONVERTERS:
        if hasattr(args, name):
            raw[name] = getattr(args, name)
    values = {}
    for name, value in raw.items():
        try:
            values[name] = _CONVERTERS[name](value)
        except ValueError:
            raise UsageError(f"invalid value for {name}: {value!r}") from None
    return ExperimentSpec(**values)


def write_atomic(files: dict[Path, str]) -> None:
    """Write every file to a temporary sibling, then rename them all into place."""
    staged = []
    try:
        for path, text in files.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(text)
            staged.append((tmp, path))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, path in staged:
        os.replace(tmp, path)


def record_files(record, base: Path, fmt_name: str) -> dict[Path, str]:
    """``csv``: curve CSV at ``base`` plus the JSON record next to it; ``json``: record only."""
    if fmt_name == "json":
        return {base: record_to_json(record)}
    return {base: curve_to_csv(record.curve), base.with_suffix(".json"): record_to_json(record)}


def cmd_simulate(args) -> int:
    spec = spec_from_args(args)
    record = simulate(spec, workers=args.workers)
    if spec.output_path is None:
        text = record_to_json(record) if spec.format == "json" else curve_to_csv(record.curve)
        sys.stdout.write(text)
    else:
        write_atomic(record_files(record, Path(spec.output_path), spec.format))
    return EXIT_OK


def _sweep_value(param: str, text: str):
    try:
        return parse_angle(text) if param == "copy_angle" else int(text)
    except ValueError:
        raise UsageError(f"invalid {param} value {text!r}") from None


def cmd_sweep(args) -> int:
    spec = spec_from_args(args)
    values = [v for v in (t.strip() for t in args.values.split(",")) if v]
    if not values:
        raise UsageError("empty sweep")
    if spec.output_path is None:
        raise UsageError("sweep needs --out DIRECTORY")
    specs = []
    for text in values:
        fields = spec.to_dict()
        value = _sweep_value(args.sweep_param, text)
        fields[args.sweep_param] = value
        specs.append((value, ExperimentSpec.from_dict(fields)))

    out_dir = Path(spec.output_path)
    ext = ".json" if spec.format == "json" else ".csv"
    files: dict[Path, str] = {}
    rows = []
    for i, (value, s) in enumerate(specs):
        record = simulate(s, workers=args.workers)
        rows.append((value, record))
        files.update(record_files(record, out_dir / f"run_{i:03d}{ext}", spec.format))
    files[out_dir / "summary.csv"] = summary_to_csv(rows)
    write_atomic(files)
    return EXIT_OK


def cmd_ecc(args) -> int:
    empirical, analytic = error_rate_experiment(args.n, args.p, args.trials, args.seed)
    text = ("n,p,trials,empirical,analytic\n"
            f"{args.n},{fmt(args.p)},{args.trials},{fmt(empirical)},{fmt(analytic)}\n")
    if args.out is None:
        sys.stdout.write(text)
    else:
        write_atomic({Path(args.out): text})
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "sweep": cmd_sweep, "ecc": cmd_ecc}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "version":
        print(f"qdarwin {__version__}")
        return EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except NumericalConsistencyError as exc:
        print(f"qdarwin: numerical consistency failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"qdarwin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

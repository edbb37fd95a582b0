"""Command-line entry point: ``wignerqfi {fig1..fig5,compute,validate} [flags]``.

Exit codes: 0 success, 1 usage or domain error, 2 numerical convergence
failure, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exceptions import ConvergenceError, ResolutionError
from .figures import FIGURE_COMMANDS, RunConfig, cmd_compute
from .series import dumps_json, series_set_to_json, series_to_csv

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_VALIDATION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> tuple:
    try:
        return tuple(float(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _tol(text: str):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected NAME=VALUE")
    return name, float(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--m", type=float, help="particle mass")
    common.add_argument("--kappa", type=float, help="wave-packet spread (inverse momentum)")
    common.add_argument("--kappa-list", type=_floats, dest="kappa_list", help="comma-separated kappa values")
    common.add_argument("--v", type=float, help="observer velocity in [0, 1]")
    common.add_argument("--v-list", type=_floats, dest="v_list", help="comma-separated velocities")
    common.add_argument("--grid-points", type=int, dest="grid_points", help="momentum grid size per axis")
    common.add_argument("--x-max", type=float, dest="x_max", help="half-width of the x1 range")
    common.add_argument("--x-points", type=int, dest="x_points", help="number of x1 samples")
    common.add_argument("--mk-points", type=int, dest="mk_points", help="points on the m*kappa axis")
    common.add_argument("--v-points", type=int, dest="v_points", help="points on the V axis")
    common.add_argument("--out", help="output file (json, compute) or directory (csv series)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--seed", type=int, help="Monte-Carlo seed")
    common.add_argument("--rel-tol", type=float, dest="rel_tol", help="quadrature relative tolerance")
    common.add_argument("--jobs", type=int, help="worker threads for parameter grids")
    common.add_argument("--config", help="JSON file whose keys mirror the flag names")

    parser = _Parser(prog="wignerqfi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in FIGURE_COMMANDS:
        sub.add_parser(name, parents=[common], help=f"data for {name}")
    comp = sub.add_parser("compute", parents=[common], help="all quantities at one (m, kappa, v)")
    comp.add_argument("--classical-fi", action="store_true", dest="classical_fi", default=argparse.SUPPRESS,
                      help="also compute the position-measurement Fisher information")
    val = sub.add_parser("validate", parents=[common], help="run the acceptance checks")
    val.add_argument("--tol", type=_tol, action="append", default=argparse.SUPPRESS,
                     help="override a check tolerance, NAME=VALUE (repeatable)")
    val.add_argument("--only", type=_floats, default=argparse.SUPPRESS, help="comma-separated check numbers")
    return parser


def _load_config(path: str) -> dict:
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a JSON object")
    out = {}
    for key, val in raw.items():
        key = key.lstrip("-").replace("-", "_")
        if key in ("v_list", "kappa_list"):
            val = tuple(float(x) for x in val)
        out[key] = val
    return out


def make_run_config(ns: argparse.Namespace) -> tuple[RunConfig, dict]:
    given = dict(vars(ns))
    command = given.pop("command")
    extra = {k: given.pop(k) for k in ("tol", "only") if k in given}
    settings = _load_config(given.pop("config")) if "config" in given else {}
    settings.update(given)  # flags win over the config file
    unknown = set(settings) - set(RunConfig.__dataclass_fields__)
    if unknown:
        raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
    if "tol" in extra:
        settings["tolerances"] = dict(extra["tol"])
    cfg = RunConfig(command, **settings).with_figure_defaults(set(settings))
    return cfg, extra


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _run_figure(cfg: RunConfig) -> int:
    series = FIGURE_COMMANDS[cfg.command](cfg)
    if cfg.format == "json":
        _emit(series_set_to_json(cfg.command, series, cfg.to_dict()), cfg.out)
    elif cfg.out is None:
        sys.stdout.write("\n".join(series_to_csv(s) for s in series))
    else:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        for s in series:
            (out / f"{s.name}.csv").write_text(series_to_csv(s))
    return EXIT_OK


def _run_validate(cfg: RunConfig, extra: dict) -> int:
    from .validation import run_all

    only = [int(i) for i in extra["only"]] if "only" in extra else None
    results = run_all(cfg.tolerances, only, cfg.seed)
    for r in results:
        print(r.line(), file=sys.stderr if cfg.out is None and cfg.format == "json" else sys.stdout)
    if cfg.format == "json":
        _emit(dumps_json({"command": "validate", "checks": [r.to_dict() for r in results],
                          "passed": all(r.passed for r in results)}), cfg.out)
    failed = [r.index for r in results if not r.passed]
    if failed:
        print(f"validation failed: checks {failed}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg, extra = make_run_config(ns)
        if cfg.command == "compute":
            _emit(dumps_json({"command": "compute", **cmd_compute(cfg)}), cfg.out)
            return EXIT_OK
        if cfg.command == "validate":
            return _run_validate(cfg, extra)
        return _run_figure(cfg)
    except ConvergenceError as exc:
        print(f"wignerqfi: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValueError, TypeError, OSError) as exc:
        hint = " (hint: raise --grid-points or lower --x-max)" if isinstance(exc, ResolutionError) else ""
        print(f"wignerqfi: error: {exc}{hint}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

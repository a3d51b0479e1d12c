"""Command-line front end.

::

    isl verify --scenario FILE [--seed N] [--points N] [--tol-alg X] [--tol-fd X]
               [--fd-step X] [--format text|json|csv] [--out PATH]
    isl list-suites
    isl list-gallery

Every ``verify`` option can also come from an environment variable named
``ISL_`` plus the option name (``ISL_SEED``, ``ISL_TOL_FD``, ...). Command-line
flags win over the environment, which wins over the scenario file.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError, ISLError
from .gallery import list_gallery
from .report import emit_report
from .scenario import SUITES, load_scenario, run_scenario

_OVERRIDES = (
    # (flag, dest, type)
    ("--seed", "seed", int),
    ("--points", "points", int),
    ("--tol-alg", "tol_alg", float),
    ("--tol-fd", "tol_fd", float),
    ("--fd-step", "fd_step", float),
    ("--format", "format", str),
    ("--out", "out", str),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isl", description="Numerical verification of induced structures "
                                     "on submanifolds of almost product and almost complex Euclidean spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run the suites of a scenario file and print a residual report")
    verify.add_argument("--scenario", required=True, help="path to a scenario JSON file")
    for flag, dest, typ in _OVERRIDES:
        kwargs = {"dest": dest, "type": typ, "default": None}
        if dest == "format":
            kwargs["choices"] = ("text", "json", "csv")
        verify.add_argument(flag, **kwargs)
    sub.add_parser("list-suites", help="list the available verification suites")
    sub.add_parser("list-gallery", help="list the worked examples usable as 'gallery' in a scenario")
    return parser


def _env_overrides(environ) -> dict:
    out = {}
    for _, dest, typ in _OVERRIDES:
        raw = environ.get("ISL_" + dest.upper())
        if raw is None or raw == "":
            continue
        try:
            out[dest] = typ(raw)
        except ValueError:
            raise ConfigError(f"environment variable ISL_{dest.upper()}={raw!r} is not a valid {typ.__name__}") from None
    return out


def main(argv=None, environ=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-suites":
        for name, text in SUITES.items():
            print(f"{name:12s} {text}")
        print(f"{'all':12s} every suite above")
        return 0
    if args.command == "list-gallery":
        for name, text in list_gallery():
            print(f"{name:5s} {text}")
        return 0

    try:
        overrides = _env_overrides(os.environ if environ is None else environ)
        overrides.update({dest: getattr(args, dest) for _, dest, _ in _OVERRIDES if getattr(args, dest) is not None})
        sc = load_scenario(args.scenario, overrides)
        report = run_scenario(sc)
        text = emit_report(report, sc.fmt, sc.out, sc.echo)
    except ConfigError as exc:
        print(f"isl: configuration error: {exc}", file=sys.stderr)
        return 2
    except (ISLError, OSError) as exc:
        print(f"isl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if sc.out is None:
        sys.stdout.write(text)
    else:
        print(f"report written to {sc.out} ({'PASS' if report.passed else 'FAIL'})", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

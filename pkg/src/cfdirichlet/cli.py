"""Command-line front end.

Subcommands: expand, diagnose, construct, dimension, verdict, jarnik, verify.
Exit codes: 0 success, 2 invalid input or domain, 3 resource budget exceeded.
Every JSON output embeds the run configuration and a schema version, and
identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from ._numeric import PrecisionError, int_to_str, to_fraction
from .construct import (
    DEFAULT_DIGIT_BUDGET,
    BudgetExceeded,
    build_schedule,
    insert,
    make_params,
    membership_report,
    seed_word,
)
from .core import expand_real, format_word, parse_word
from .diagnostics import MIN_TAU_WINDOW, dirichlet_ratio_trace, levy_to_csv, levy_trace, tau_estimate
from .dimension import dimension_formula, hausdorff_verdict, jarnik_bounds
from .logspace import LogWord

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3


class InvalidInput(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"subcommand": self.subcommand, "options": self.options, "version": __version__}


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _envelope(config: RunConfig, **payload) -> dict:
    return {"schema_version": SCHEMA_VERSION, "config": config.to_dict(), **payload}


def _emit(files: dict[str, str], output: Optional[str]) -> None:
    """Write {name: text} into the output directory, or print to stdout."""
    if output is None:
        for text in files.values():
            sys.stdout.write(text)
        return
    out = Path(output)
    for name, text in files.items():
        write_atomic(out / name, text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_expand(args) -> int:
    config = RunConfig("expand", {"value": args.value, "max_terms": args.max_terms, "precision": args.precision})
    try:
        word, trusted = expand_real(args.value, args.max_terms, args.precision)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(str(exc)) from None
    doc = _envelope(config, word=format_word(word), trusted=trusted)
    _emit({"expand.json": _dumps(doc)}, args.output)
    return EXIT_OK


def _read_word(args):
    if args.word is not None:
        text = args.word
    else:
        try:
            text = Path(args.word_file).read_text()
        except OSError as exc:
            raise InvalidInput(f"cannot read word file: {exc}") from None
    try:
        return parse_word("".join(text.split()))
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None


def cmd_diagnose(args) -> int:
    word = _read_word(args)
    source = {"word": args.word} if args.word is not None else {"word_file": args.word_file}
    config = RunConfig("diagnose", {**source, "traces": args.traces, "format": args.format})
    if args.traces == "all":
        # tau needs a window of MIN_TAU_WINDOW digits; 'all' skips it on short words
        traces = ["ratio", "levy"] + (["tau"] if len(word) >= MIN_TAU_WINDOW else [])
    else:
        traces = args.traces.split(",")
    try:
        parts = {}
        if "ratio" in traces:
            parts["ratio"] = dirichlet_ratio_trace(word)
        if "levy" in traces:
            parts["levy"] = levy_trace(word)
        if "tau" in traces:
            parts["tau"] = tau_estimate(word)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    unknown = set(traces) - {"ratio", "levy", "tau"}
    if unknown:
        raise InvalidInput(f"unknown trace(s): {', '.join(sorted(unknown))}")

    if args.format == "csv":
        files = {}
        if "ratio" in parts:
            files["ratio.csv"] = parts["ratio"].to_csv()
        if "levy" in parts:
            files["levy.csv"] = levy_to_csv(parts["levy"])
        # CSV cannot carry the config; a manifest travels with the traces
        manifest = _envelope(config, files=sorted(files))
        if "tau" in parts:
            manifest["tau"] = parts["tau"].to_dict()
        files["run.json"] = _dumps(manifest)
        _emit(files, args.output)
        return EXIT_OK

    payload = {}
    if "ratio" in parts:
        payload["ratio"] = parts["ratio"].to_rows()
    if "levy" in parts:
        payload["levy"] = [{"n": n, "levy": v} for n, v in parts["levy"]]
    if "tau" in parts:
        payload["tau"] = parts["tau"].to_dict()
    _emit({"diagnose.json": _dumps(_envelope(config, **payload))}, args.output)
    return EXIT_OK


def _word_payload(word) -> dict:
    if isinstance(word, LogWord):
        return {
            "digits": [None if d is None else int_to_str(d) for d in word.exact],
            "log_digits": list(word.log_digits),
        }
    return {"digits": format_word(word)}


def cmd_construct(args) -> int:
    options = {
        "alpha": args.alpha,
        "beta": args.beta,
        "j_max": args.j_max,
        "mode": args.mode,
        "selector": args.selector,
        "ce_selector": args.ce_selector,
        "seed": args.seed,
        "tail": args.tail,
        "digit_budget": args.digit_budget,
        "n1": args.n1,
    }
    config = RunConfig("construct", options)
    try:
        params = make_params(args.alpha, args.beta, n1=int(args.n1) if args.n1 else None)
        seed = seed_word(params, args.selector, 1, rng_seed=args.seed)
        schedule = build_schedule(params, seed, args.j_max, args.mode, args.ce_selector, args.digit_budget)
    except (ValueError, ZeroDivisionError, NotImplementedError, PrecisionError) as exc:
        raise InvalidInput(str(exc)) from None
    word = insert(seed, schedule, tail=args.tail)
    files = {
        "schedule.json": _dumps(_envelope(config, schedule=schedule.to_dict())),
        "word.json": _dumps(_envelope(config, word=_word_payload(word), fingerprint=schedule.fingerprint)),
    }
    if len(schedule) >= 2:
        report = membership_report(word, schedule, params)
        files["report.json"] = _dumps(_envelope(config, report=report.to_dict()))
    _emit(files, args.output)
    return EXIT_OK


def cmd_dimension(args) -> int:
    config = RunConfig("dimension", {"alpha": args.alpha, "beta": args.beta})
    try:
        value = dimension_formula(args.alpha, args.beta)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(str(exc)) from None
    doc = _envelope(config, value=float(value), exact=str(value) if not isinstance(value, float) else None)
    _emit({"dimension.json": _dumps(doc)}, args.output)
    return EXIT_OK


def cmd_verdict(args) -> int:
    config = RunConfig("verdict", {"gamma": args.gamma, "s": args.s})
    try:
        verdict = hausdorff_verdict(args.gamma, args.s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(str(exc)) from None
    doc = _envelope(config, gamma=args.gamma, s=args.s, verdict=verdict)
    _emit({"verdict.json": _dumps(doc)}, args.output)
    return EXIT_OK


def cmd_jarnik(args) -> int:
    config = RunConfig("jarnik", {"m": args.m})
    try:
        lower, upper = jarnik_bounds(args.m)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    doc = _envelope(config, m=args.m, lower=lower, upper=upper)
    _emit({"jarnik.json": _dumps(doc)}, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_all

    config = RunConfig("verify", {"quick": args.quick})
    results = run_all(quick=args.quick)
    doc = _envelope(config, suites=[r.to_dict() for r in results])
    _emit({"verify.json": _dumps(doc)}, args.output)
    return EXIT_OK if all(r.ok for r in results) else 1


# ---------------------------------------------------------------------------


def _decimal(text: str) -> str:
    try:
        to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational or decimal: {text!r}") from None
    return text


def _alpha(text: str) -> str:
    if text.strip().lower() in ("inf", "infinity"):
        return "inf"
    return _decimal(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfdirichlet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="continued fraction of a rational or decimal in (0,1)")
    p.add_argument("value", help="'p/q' or a decimal string")
    p.add_argument("--max-terms", type=int, default=64)
    p.add_argument("--precision", type=int, default=None, help="treat value as +-10^-k interval")
    p.add_argument("--output", "-o", default=None, help="output directory (default: stdout)")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("diagnose", help="ratio, Levy and tau traces of a word")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--word", help="comma-separated partial quotients")
    src.add_argument("--word-file", help="file with comma-separated partial quotients")
    p.add_argument(
        "--traces", default="all", help="comma list of ratio,levy,tau or 'all' (tau only for >= 100 digits)"
    )
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("construct", help="insertion schedule, constructed word and membership report")
    p.add_argument("--alpha", type=_decimal, required=True)
    p.add_argument("--beta", type=_decimal, required=True)
    p.add_argument("--j-max", type=int, default=4)
    p.add_argument("--mode", choices=("exact", "logspace"), default="exact")
    p.add_argument("--selector", choices=("min", "max", "seeded-random"), default="min")
    p.add_argument("--ce-selector", choices=("min", "max"), default="min")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tail", type=int, default=1)
    p.add_argument("--digit-budget", type=int, default=DEFAULT_DIGIT_BUDGET)
    p.add_argument("--n1", default=None, help="n_1 override (alpha = 0 size knob)")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("dimension", help="closed-form Hausdorff dimension")
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--beta", type=_decimal, required=True)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("verdict", help="zero/infinite Hausdorff measure verdict for Psi(t)=t^gamma")
    p.add_argument("--gamma", type=_decimal, required=True)
    p.add_argument("--s", type=_decimal, required=True)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_verdict)

    p = sub.add_parser("jarnik", help="Jarnik bounds for bounded partial quotients")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_jarnik)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())

"""Command-line harness: ad-hoc trust computations, experiments, sweeps,
and the feedback-prediction pipeline.

Subcommands
-----------
certainty R S                 print the certainty of evidence ⟨R, S⟩
accuracy  --method M ...      print an accuracy measure q
update    --method M ...      print the updated trust as JSON
simulate  --experiment E ...  write one experiment's per-step series
sweep     --beta-grid ...     write an error-vs-beta table
amazon    --input FILE ...    write the per-seller feedback-prediction table

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 numeric
non-convergence.  All data output is a deterministic function of the flags
(fixed column orders, repr-formatted floats, no timestamps), so repeated
runs with the same seed produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import List, Optional, Sequence

from .amazon import (
    AmazonConfig,
    AmazonMode,
    load_feedback_csv,
    parse_feedback_csv,
    run_amazon_experiment,
)
from .core import Evidence, certainty, expected_quality
from .errors import ConvergenceError, FeedbackFormatError
from .numerics import Tolerance
from .simulation import (
    Damping,
    ExperimentConfig,
    GoodThenCorrupted,
    HistoryMode,
    Honest,
    Momentum,
    Periodic,
    Probability,
    Random,
    RandomWalk,
    Rumor,
    Truthful,
    prediction_error,
    records_to_csv,
    records_to_json,
    run_combination_experiment,
    run_history_experiment,
    run_referrer_experiment,
)
from .updates import (
    UpdateConfig,
    UpdateMethod,
    accuracy_average,
    accuracy_linear,
    accuracy_max_certainty,
    accuracy_sensitivity,
    update_referrer,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise _UsageError(message)


_BEHAVIOR_PROFILES = ("probability", "periodic", "damping", "random", "randomwalk", "momentum")
_REFERRER_PROFILES = ("truthful", "honest", "rumor", "corrupted")

_UPDATE_METHODS = {m.value.lower(): m for m in UpdateMethod}
_HISTORY_MODES = {m.value.lower(): m for m in HistoryMode}
_ACCURACY_NAMES = {
    "linear": "linear",
    "maxcertainty": "maxcertainty",
    "max-certainty": "maxcertainty",
    "sensitivity": "sensitivity",
    "average": "average",
}


class _EvidencePair:
    """Lazily validated ⟨r, s⟩ flag value.

    Syntax problems are usage errors, but domain violations (negative
    counts) are data errors, so Evidence construction is deferred to
    command execution.
    """

    def __init__(self, r: float, s: float):
        self.r, self.s = r, s

    def build(self) -> Evidence:
        return Evidence(self.r, self.s)


def _parse_evidence(text: str) -> _EvidencePair:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'r,s', got {text!r}")
    try:
        r, s = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers 'r,s', got {text!r}")
    return _EvidencePair(r, s)


def _parse_grid(text: str) -> List[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'lo:hi:step', got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid bounds must be numbers, got {text!r}")
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"need lo <= hi and step > 0, got {text!r}")
    values = []
    k = 0
    while True:
        v = lo + k * step
        if v > hi + 1e-12:
            break
        values.append(round(v, 10))
        k += 1
    return values


def parse_profile(text: str):
    """Parse a profile spec like 'probability:0.9', 'momentum:0.1,0.5',
    'rumor:50,10', or 'corrupted:50'."""
    name, _, argtext = text.strip().lower().partition(":")
    args = [a for a in argtext.split(",") if a] if argtext else []
    try:
        if name == "probability":
            return Probability(float(args[0])) if args else Probability()
        if name == "periodic":
            return Periodic()
        if name == "damping":
            return Damping(int(args[0])) if args else Damping()
        if name == "random":
            return Random()
        if name in ("randomwalk", "walk"):
            return RandomWalk(float(args[0])) if args else RandomWalk()
        if name == "momentum":
            if len(args) >= 2:
                return Momentum(float(args[0]), float(args[1]))
            return Momentum(float(args[0])) if args else Momentum()
        if name == "truthful":
            return Truthful()
        if name == "honest":
            return Honest()
        if name == "rumor":
            if len(args) >= 2:
                return Rumor(int(args[0]), float(args[1]))
            return Rumor(int(args[0])) if args else Rumor()
        if name == "corrupted":
            return GoodThenCorrupted(int(args[0])) if args else GoodThenCorrupted()
    except (ValueError, IndexError) as exc:
        raise argparse.ArgumentTypeError(f"bad profile arguments in {text!r}: {exc}")
    raise argparse.ArgumentTypeError(
        f"unknown profile {text!r}; expected one of "
        f"{', '.join(_BEHAVIOR_PROFILES + _REFERRER_PROFILES)}"
    )


def _parse_update_method(text: str) -> UpdateMethod:
    key = text.strip().lower()
    if key not in _UPDATE_METHODS:
        raise argparse.ArgumentTypeError(
            f"unknown method {text!r}; expected one of {', '.join(m.value for m in UpdateMethod)}"
        )
    return _UPDATE_METHODS[key]


def _parse_history_mode(text: str) -> HistoryMode:
    key = text.strip().lower()
    if key == "averagealpha":
        return HistoryMode.TRUST_IN_HISTORY
    if key not in _HISTORY_MODES:
        raise argparse.ArgumentTypeError(
            f"unknown mode {text!r}; expected one of {', '.join(m.value for m in HistoryMode)}"
        )
    return _HISTORY_MODES[key]


def _fmt(v: float) -> str:
    return repr(float(v))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header: Sequence[str], rows: Sequence[Sequence[str]], fmt: str) -> str:
    if fmt == "json":
        objs = []
        for row in rows:
            obj = {}
            for name, cell in zip(header, row):
                if cell == "":
                    obj[name] = None
                else:
                    try:
                        obj[name] = float(cell)
                    except ValueError:
                        obj[name] = cell
            objs.append(obj)
        return json.dumps(objs, indent=2) + "\n"
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format for tabular data (default csv)")
    common.add_argument("--tol", type=float, default=1e-9,
                        help="absolute tolerance for numeric routines (default 1e-9)")
    common.add_argument("--out", metavar="FILE", default=None,
                        help="write output to FILE instead of stdout")

    parser = _Parser(prog="evitrust", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("certainty", parents=[common], help="certainty of evidence ⟨r, s⟩")
    p.add_argument("r", type=float)
    p.add_argument("s", type=float)

    p = sub.add_parser("accuracy", parents=[common], help="accuracy q of a report vs. an observation")
    p.add_argument("--method", required=True,
                   help="linear | max-certainty | sensitivity | average")
    p.add_argument("--observed", required=True, type=_parse_evidence, metavar="R,S")
    p.add_argument("--report", required=True, type=_parse_evidence, metavar="R,S")

    p = sub.add_parser("update", parents=[common], help="one trust update of a report's source")
    p.add_argument("--method", required=True, type=_parse_update_method,
                   help=" | ".join(m.value for m in UpdateMethod if m is not UpdateMethod.AVERAGE_ALPHA))
    p.add_argument("--beta", type=float, default=0.2, help="forgetting rate (default 0.2)")
    p.add_argument("--observed", required=True, type=_parse_evidence, metavar="R,S")
    p.add_argument("--report", required=True, type=_parse_evidence, metavar="R,S")
    p.add_argument("--prior", type=_parse_evidence, default=_EvidencePair(1.0, 1.0), metavar="R,S",
                   help="prior trust in the source (default 1,1)")

    p = sub.add_parser("simulate", parents=[common], help="run one experiment, write the series")
    p.add_argument("--experiment", required=True, choices=("referrer", "combine", "history"))
    p.add_argument("--profile", type=parse_profile, default=None,
                   help="provider/referrer profile, e.g. probability:0.9, periodic, rumor:50,10")
    p.add_argument("--method", type=_parse_update_method, default=UpdateMethod.AVERAGE_BETA)
    p.add_argument("--mode", type=_parse_history_mode, default=HistoryMode.TRUST_IN_HISTORY,
                   help="history experiment mode: Amazon | FixedBeta | TrustInHistory")
    p.add_argument("--beta", type=float, default=0.2)
    p.add_argument("--timesteps", type=int, default=100)
    p.add_argument("--tx", type=int, default=50, help="transactions per step (default 50)")
    p.add_argument("--switch", type=int, default=50,
                   help="corruption step for the combine experiment (default 50)")

    p = sub.add_parser("sweep", parents=[common], help="error vs. beta over a grid")
    p.add_argument("--experiment", choices=("referrer", "history"), default="history")
    p.add_argument("--profiles", required=True,
                   help="comma-separated profile specs, e.g. probability:0.9,periodic")
    p.add_argument("--beta-grid", required=True, type=_parse_grid, metavar="LO:HI:STEP")
    p.add_argument("--method", type=_parse_update_method, default=UpdateMethod.AVERAGE_BETA,
                   help="update method for referrer sweeps")
    p.add_argument("--mode", type=_parse_history_mode, default=HistoryMode.FIXED_BETA,
                   help="history mode for history sweeps (default FixedBeta)")
    p.add_argument("--seeds", type=int, default=5, help="seeds averaged per grid point (default 5)")
    p.add_argument("--timesteps", type=int, default=100)
    p.add_argument("--tx", type=int, default=50)

    p = sub.add_parser("amazon", parents=[common], help="feedback-prediction error table")
    p.add_argument("--input", default=None, metavar="FILE",
                   help="feedback CSV (seller_id,t,rating); default: bundled sample")
    p.add_argument("--lambda-grid", type=_parse_grid, default=None, metavar="LO:HI:STEP",
                   help="geometric-weight retention grid (default 0:1:0.1)")

    return parser


def _split_profiles(text: str) -> List:
    """Split a profile list on commas that start a new profile name.

    Profile arguments may themselves contain commas (momentum:0.1,0.5), so a
    comma only separates profiles when followed by a known profile name.
    """
    out, buf = [], []
    for piece in text.split(","):
        head = piece.strip().lower().partition(":")[0]
        if buf and head in _BEHAVIOR_PROFILES + _REFERRER_PROFILES + ("walk",):
            out.append(",".join(buf))
            buf = [piece]
        else:
            buf.append(piece)
    if buf:
        out.append(",".join(buf))
    return [parse_profile(p) for p in out]


def _cmd_certainty(args) -> int:
    value = certainty(Evidence(args.r, args.s), Tolerance(abs_tol=args.tol))
    _emit(f"{value:.10g}\n", args.out)
    return EXIT_OK


def _cmd_accuracy(args) -> int:
    key = args.method.strip().lower()
    if key not in _ACCURACY_NAMES:
        raise _UsageError(f"unknown accuracy method {args.method!r}")
    kind = _ACCURACY_NAMES[key]
    observed, report = args.observed.build(), args.report.build()
    if kind == "linear":
        q = accuracy_linear(expected_quality(observed), expected_quality(report))
    elif kind == "maxcertainty":
        q = accuracy_max_certainty(observed, expected_quality(report))
    elif kind == "sensitivity":
        q = accuracy_sensitivity(expected_quality(observed), report)
    else:
        q = accuracy_average(expected_quality(observed), report)
    _emit(f"{q:.10g}\n", args.out)
    return EXIT_OK


def _cmd_update(args) -> int:
    if args.method is UpdateMethod.AVERAGE_ALPHA:
        raise _UsageError("AverageAlpha drives the history experiment; use "
                          "'simulate --experiment history --mode TrustInHistory'")
    cfg = UpdateConfig(method=args.method, beta=args.beta)
    updated = update_referrer(cfg, args.observed.build(), args.report.build(),
                              args.prior.build(), Tolerance(abs_tol=args.tol))
    _emit(json.dumps(updated.to_dict()) + "\n", args.out)
    return EXIT_OK


def _experiment_config(args, **overrides) -> ExperimentConfig:
    base = dict(
        timesteps=args.timesteps,
        tx_per_step=args.tx,
        seed=args.seed,
        method=getattr(args, "method", UpdateMethod.AVERAGE_BETA),
        beta=getattr(args, "beta", 0.2),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def _cmd_simulate(args) -> int:
    if args.experiment != "history" and args.method is UpdateMethod.AVERAGE_ALPHA:
        raise _UsageError("AverageAlpha applies to '--experiment history' "
                          "(as '--mode TrustInHistory'), not to referrer updates")
    cfg = _experiment_config(args)
    if args.experiment == "referrer":
        profile = args.profile if args.profile is not None else Truthful()
        records = run_referrer_experiment(cfg, profile)
    elif args.experiment == "combine":
        records = run_combination_experiment(cfg, switch_step=args.switch).records
    else:
        profile = args.profile if args.profile is not None else Probability()
        if isinstance(profile, (Truthful, Honest, Rumor, GoodThenCorrupted)):
            raise _UsageError("history experiment needs a behavior profile, not a referrer profile")
        records = run_history_experiment(cfg, profile, args.mode)
    text = records_to_json(records) if args.format == "json" else records_to_csv(records)
    _emit(text, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    profiles = _split_profiles(args.profiles)
    header = ["profile", "method", "beta", "error"]
    rows = []
    for profile in profiles:
        pname = type(profile).__name__
        for beta in args.beta_grid:
            errs = []
            for k in range(args.seeds):
                cfg = _experiment_config(args, seed=args.seed + k, beta=beta)
                if args.experiment == "history":
                    records = run_history_experiment(cfg, profile, args.mode)
                    label = args.mode.value
                else:
                    records = run_referrer_experiment(cfg, profile)
                    label = args.method.value
                errs.append(prediction_error(records))
            rows.append([pname, label, _fmt(beta), _fmt(sum(errs) / len(errs))])
    _emit(_table(header, rows, args.format), args.out)
    return EXIT_OK


def _bundled_sample_text() -> str:
    return resources.files("evitrust").joinpath("data/amazon_sample.csv").read_text("utf-8")


def _cmd_amazon(args) -> int:
    if args.input:
        records = load_feedback_csv(args.input)
    else:
        records = parse_feedback_csv(_bundled_sample_text())
    grid = args.lambda_grid if args.lambda_grid is not None else _parse_grid("0:1:0.1")
    configs = [AmazonConfig(mode=AmazonMode.UNWEIGHTED)]
    configs += [AmazonConfig(mode=AmazonMode.GEOMETRIC, lambda_=lam) for lam in grid]
    configs.append(AmazonConfig(mode=AmazonMode.TRUST_IN_HISTORY))
    results = run_amazon_experiment(records, configs)
    header = ["seller_id", "mode", "lambda", "error", "error_1to5"]
    rows = [
        [r.seller_id, r.mode.value, "" if r.lambda_ is None else _fmt(r.lambda_),
         _fmt(r.error), _fmt(r.error_scale5)]
        for r in results
    ]
    _emit(_table(header, rows, args.format), args.out)
    return EXIT_OK


_COMMANDS = {
    "certainty": _cmd_certainty,
    "accuracy": _cmd_accuracy,
    "update": _cmd_update,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "amazon": _cmd_amazon,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit status instead of raising."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FeedbackFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()

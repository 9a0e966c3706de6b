"""Command line: verify-paper, partition, simulate, search.

Exit codes: 0 success, 1 verification mismatch or theorem violation,
2 invalid domain input, 3 resource cap, 64 usage error.
"""

from __future__ import annotations

import argparse
import re
import sys
from collections import Counter
from dataclasses import dataclass

from . import report
from .algebra import DECISION_TOL, REPRODUCTION_TOL
from .errors import InadmissibleEncoding, PromiseViolation, ResourceCapError
from .oracle import DitFunction, Encoding, enumerate_functions, roots_of_unity_encoding
from .partition import decompose_bases, partition_rays, verify_mub
from .reproduce import verify_scheme
from .search import conjecture_probe, lower_bound_scan
from .simulator import (
    Oracle,
    PromiseProblem,
    identify_class,
    measure,
    prepare_state,
    run_protocol,
    trial_rng,
)

EXIT_OK, EXIT_MISMATCH, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 3, 64

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^\s*({_NUM})\s*([+-]\s*(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*i\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    d: int = 3
    tol: float | None = None
    samples: int = 100_000
    seed: int = 42
    trials: int = 100
    format: str = "text"
    output: str | None = None
    encoding: str | None = None
    function: str | None = None
    column: int = 1
    probe: bool = False

    @property
    def decision_tol(self) -> float:
        return DECISION_TOL if self.tol is None else self.tol


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` with decimal reals, e.g. ``1+0i`` or ``-0.5-0.866i``."""
    m = _COMPLEX.match(text)
    if not m:
        raise UsageError(f"bad complex literal {text!r}; expected a+bi")
    return complex(float(m.group(1)), float(m.group(2).replace(" ", "")))


def parse_encoding(text: str, d: int) -> Encoding:
    values = [parse_complex(tok) for tok in text.split(",")]
    if len(values) != d:
        raise UsageError(f"encoding has {len(values)} values, expected {d}")
    return Encoding(values)


def _positive_tol(text: str) -> float:
    try:
        tol = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < tol < 1e-3:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1e-3)")
    return tol


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=3, help="alphabet size (default 3)")
    common.add_argument("--tol", type=_positive_tol, default=None,
                        help="tolerance (default 1e-9; verify-paper uses 1e-12)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", default=None, help="write here instead of stdout")

    parser = _Parser(prog="tritstate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("verify-paper", parents=[common],
                   help="rebuild the d=3 scheme table and check every claim")

    p = sub.add_parser("partition", parents=[common], help="group rays and split them into bases")
    p.add_argument("--encoding", help='comma-separated "a+bi" values, one per letter')

    p = sub.add_parser("simulate", parents=[common], help="single-query identification")
    p.add_argument("--encoding")
    p.add_argument("--function", help='literal such as "--0" (d=3) or "0,1"')
    p.add_argument("--column", type=int, default=1, help="basis to measure in, 1-based")
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("search", parents=[common], help="scan encodings for fewer bases")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--probe", action="store_true", help="add the roots-of-unity summary at d")
    return parser


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(cfg: RunConfig, doc: dict, text_fn, csv_fn) -> str:
    if cfg.format == "json":
        return report.dumps_json(doc)
    if cfg.format == "csv":
        return csv_fn(doc)
    return text_fn(doc)


def _encoding(cfg: RunConfig) -> Encoding:
    if cfg.encoding:
        return parse_encoding(cfg.encoding, cfg.d)
    return roots_of_unity_encoding(cfg.d)


def cmd_verify_paper(cfg: RunConfig) -> int:
    if cfg.d != 3:
        raise UsageError("verify-paper only applies to d=3")
    tol = REPRODUCTION_TOL if cfg.tol is None else cfg.tol
    v = verify_scheme(tol)
    doc = report.verification_doc(v)
    _emit(cfg, _render(cfg, doc, lambda _: report.verification_text(v), report.verification_csv))
    return EXIT_OK if v.passed else EXIT_MISMATCH


def _decompose(cfg: RunConfig):
    enc = _encoding(cfg)
    tol = cfg.decision_tol
    table = partition_rays(enumerate_functions(cfg.d), enc, tol)
    decomp = decompose_bases(table, tol)
    mub = verify_mub(table, decomp, tol) if decomp.feasible else None
    return enc, table, decomp, mub


def cmd_partition(cfg: RunConfig) -> int:
    _, table, decomp, mub = _decompose(cfg)
    doc = report.partition_doc(table, decomp, mub)
    _emit(cfg, _render(cfg, doc, report.partition_text, report.partition_csv))
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    if cfg.trials < 1:
        raise UsageError("--trials must be at least 1")
    f = None
    if cfg.function is not None:
        try:
            f = DitFunction.from_literal(cfg.function, cfg.d)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    enc, table, decomp, _ = _decompose(cfg)
    if not decomp.feasible:
        print("rays do not split into orthogonal bases; nothing to measure", file=sys.stderr)
        return EXIT_DOMAIN
    if not 1 <= cfg.column <= decomp.k:
        raise UsageError(f"--column must lie in 1..{decomp.k}")
    problem = PromiseProblem.from_decomposition(table, decomp, cfg.column - 1)
    doc = {
        "d": cfg.d,
        "encoding": [report.pair(z) for z in enc.g],
        "k": decomp.k,
        "column": cfg.column,
        "basis": [
            f"{lab} {report.format_vector(r.scaled())}" for lab, r in zip(problem.labels, problem.basis)
        ],
        "labels": list(problem.labels),
        "promise_set": [report.literal(fid, cfg.d) for fid in sorted(problem.promise_set)],
        "trials": cfg.trials,
        "seed": cfg.seed,
        "function": None,
    }
    status = EXIT_OK
    if f is not None:
        state = prepare_state(f, enc, cfg.decision_tol)
        dist = measure(state, problem.basis, cfg.seed)
        tallies = Counter(
            problem.labels[measure(state, problem.basis, trial_rng(cfg.seed, t)).sampled_outcome]
            for t in range(cfg.trials)
        )
        doc.update(
            function=f.literal(),
            distribution=report.distribution_doc(dist),
            outcome_tallies={lab: tallies[lab] for lab in problem.labels},
            identified=None,
            accuracy=None,
            queries=0,
            error=None,
        )
        try:
            truth = problem.labels[problem.expected[f.id]] if f.id in problem.expected else None
            hits, queries, last = 0, 0, None
            for t in range(cfg.trials):
                oracle = Oracle(f, enc)
                last = identify_class(f, problem, enc, trial_rng(cfg.seed, t), oracle)
                queries += oracle.calls
                hits += last == truth
            doc.update(identified=last, accuracy=hits / cfg.trials, queries=queries)
        except PromiseViolation as exc:
            doc["error"] = f"PromiseViolation: {exc}"
            status = EXIT_DOMAIN
    else:
        doc["protocol"] = report.protocol_doc(run_protocol(problem, enc, cfg.trials, cfg.seed), cfg.d)
    _emit(cfg, _render(cfg, doc, report.simulate_text, report.simulate_csv))
    return status


def cmd_search(cfg: RunConfig) -> int:
    if cfg.samples < 1:
        raise UsageError("--samples must be at least 1")
    tol = cfg.decision_tol
    if cfg.probe:
        rep = conjecture_probe(cfg.d, cfg.samples, cfg.seed, tol)
    else:
        rep = lower_bound_scan(cfg.d, cfg.samples, cfg.seed, tol)
    doc = report.search_doc(rep)
    _emit(cfg, _render(cfg, doc, report.search_text, report.search_csv))
    return EXIT_OK if not rep.violations else EXIT_MISMATCH


COMMANDS = {
    "verify-paper": cmd_verify_paper,
    "partition": cmd_partition,
    "simulate": cmd_simulate,
    "search": cmd_search,
}


def _join_function_literal(argv: list[str]) -> list[str]:
    # literals like "--0" would otherwise be read as an option
    out = list(argv)
    for i, tok in enumerate(out[:-1]):
        if tok == "--function":
            out[i:i + 2] = [f"--function={out[i + 1]}"]
            break
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_join_function_literal(argv))
    cfg = RunConfig(**{k.replace("-", "_"): v for k, v in vars(args).items()})
    try:
        if cfg.d < 2:
            raise UsageError("--d must be at least 2")
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"tritstate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InadmissibleEncoding as exc:
        print(f"tritstate: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceCapError as exc:
        print(f"tritstate: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())

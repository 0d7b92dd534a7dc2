#!/usr/bin/env python3
"""
Command-line interface for torsionlab.

Every subcommand writes JSON documents (one per line) or a pandas table to
stdout or --output; logging goes to stderr.
"""

import sys
import logging
import argparse
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import pandas as pd

from torsionlab.algebra.poly import operator_word_value
from torsionlab.certificates.construct import (
    OperatorData,
    build_expression,
    certify,
    defect_zero_subexpression,
    layout_of,
    normalize,
)
from torsionlab.core import settings
from torsionlab.core.errors import IntegrityError, InvalidInputError, TorsionLabError
from torsionlab.core.serialization import dumps, envelope, int_to_json, load_json_argument
from torsionlab.search.families import fibonacci_data, fibonacci_value, ulu_entry_sign, ulu_matrix, ulu_word_data
from torsionlab.search.operators import OPERATOR_SETS, get_operator_set, parse_seed
from torsionlab.search.searcher import SearchConfig, TorsionSearcher
from torsionlab.zaremba.enumerate import density, growth_witness, prime_records, representable_set, torsion_bridge


logger = logging.getLogger(__name__)


def configure_logging(verbose=False):
    """Root logger on stderr; stdout carries the JSON output."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.LOG_LEVEL,
        format=settings.LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


@dataclass
class RunConfig:
    """Everything a run depends on."""

    command: str
    options: Dict = field(default_factory=dict)
    rng_seed: int = 0
    workers: int = field(default_factory=lambda: settings.DEFAULT_WORKERS)
    output_format: str = "json"
    output: Optional[str] = None
    nilhecke_max_rank: int = field(default_factory=lambda: settings.NILHECKE_MAX_RANK)
    factor_full_bits: int = field(default_factory=lambda: settings.FACTOR_FULL_BITS)
    verbose: bool = False

    @classmethod
    def from_args(cls, args):
        common = {"command", "zaremba_command", "rng_seed", "workers", "format", "output", "nilhecke_max_rank",
                  "factor_full_bits", "verbose", "handler"}
        command = args.command
        if command == "zaremba":
            command = f"zaremba {args.zaremba_command}"
        return cls(
            command=command,
            options={k: v for k, v in vars(args).items() if k not in common},
            rng_seed=args.rng_seed,
            workers=args.workers,
            output_format=args.format,
            output=args.output,
            nilhecke_max_rank=args.nilhecke_max_rank,
            factor_full_bits=args.factor_full_bits,
            verbose=args.verbose,
        )


@dataclass
class CommandResult:
    kind: str
    documents: List[Dict]
    rows: List[Dict] = field(default_factory=list)


def _load_data(config: RunConfig) -> OperatorData:
    return OperatorData.from_json(load_json_argument(config.options["data"]))


def cmd_eval_word(config: RunConfig) -> CommandResult:
    data = _load_data(config)
    value = operator_word_value(data.n, data.items)
    doc = {"n": data.n, "N": data.N, "a": data.a, "b": data.b, "value": int_to_json(value)}
    return CommandResult("operator_word_value", [doc], [dict(doc, value=value)])


def cmd_build(config: RunConfig) -> CommandResult:
    data = normalize(_load_data(config), split=config.options.get("split", False))
    word = build_expression(data)
    sub = defect_zero_subexpression(data, word)
    lay = layout_of(data)
    doc = {
        "data": data.to_json(),
        "N": lay.N,
        "word": word.to_json(),
        "word_length": len(word),
        "x": lay.w_I().to_json(),
        "subexpression": sub.to_json(),
    }
    return CommandResult("expression", [doc], [{"N": lay.N, "word_length": len(word), "defect": sub.defect}])


def _nilhecke_flag(choice):
    return {"auto": None, "on": True, "off": False}[choice]


def cmd_certify(config: RunConfig) -> CommandResult:
    cert = certify(
        _load_data(config),
        check_nilhecke=_nilhecke_flag(config.options.get("nilhecke", "auto")),
        split=config.options.get("split", False),
    )
    row = {"N": cert.N, "word_length": len(cert.word), "value": cert.value, "primes": " ".join(map(str, cert.primes))}
    return CommandResult("certificate", [cert.to_json()], [row])


def cmd_fib(config: RunConfig) -> CommandResult:
    documents, rows = [], []
    for i in range(1, config.options["max_i"] + 1):
        data = fibonacci_data(i)
        value = data.value()
        expected = fibonacci_value(i)
        if value != expected:
            raise IntegrityError(f"d_1(F^{i}(x_1)) = {value}, expected F_{i + 1} = {expected}")
        doc = {"i": i, "N": data.N, "value": int_to_json(value)}
        if config.options.get("emit_data"):
            doc["data"] = data.to_json()
        documents.append(doc)
        rows.append({"i": i, "N": data.N, "value": value})
    logger.info(f"Fibonacci identity holds for 1 <= i <= {config.options['max_i']}")
    return CommandResult("fibonacci", documents, rows)


def cmd_ulu(config: RunConfig) -> CommandResult:
    word = config.options["word"]
    matrix = ulu_matrix(word)
    documents, rows = [], []
    for r in range(2):
        for c in range(2):
            data = ulu_word_data(word, r, c)
            value = data.value()
            expected = ulu_entry_sign(c) * matrix[r][c]
            if value != expected:
                raise IntegrityError(f"Entry ({r}, {c}) of {word}: value {value} != {expected}")
            doc = {"word": word, "row": r, "column": c, "N": data.N, "value": int_to_json(value),
                   "entry": int_to_json(matrix[r][c])}
            if config.options.get("certify") and value:
                doc["certificate"] = certify(data, check_nilhecke=False).to_json()
            documents.append(doc)
            rows.append({"row": r, "column": c, "N": data.N, "entry": matrix[r][c], "value": value})
    return CommandResult("ulu_entry", documents, rows)


def cmd_search(config: RunConfig) -> CommandResult:
    opts = config.options
    ops = get_operator_set(opts["ops"], opts["n"])
    texts = opts["seeds"].split(",") if opts["seeds"] else ops.seeds
    seeds = [parse_seed(text, ops.n) for text in texts if text.strip()]
    search_config = SearchConfig(
        ops=ops,
        seeds=seeds,
        max_len=opts["max_len"],
        iterations=opts["iters"],
        rng_seed=config.rng_seed,
        workers=config.workers,
        mode=opts["mode"],
        max_rank=opts["max_rank"],
        beam_width=opts["beam_width"] or settings.BEAM_WIDTH,
        generation_size=opts["generation_size"] or settings.SEARCH_GENERATION_SIZE,
    )
    records = TorsionSearcher(search_config).run()
    rows = [{"N": r.N, "p": r.p, "seed": r.seed, "trace": " ".join(r.trace)} for r in records]
    return CommandResult("search_record", [r.to_json() for r in records], rows)


def cmd_zaremba_density(config: RunConfig) -> CommandResult:
    A, N = config.options["A"], config.options["N"]
    value = density(A, N, config.workers)
    doc = {"A": A, "N": int_to_json(N), "count": value.numerator * N // value.denominator, "density": str(value)}
    return CommandResult("zaremba_density", [doc], [{"A": A, "N": N, "count": doc["count"], "density": float(value)}])


def cmd_zaremba_primes(config: RunConfig) -> CommandResult:
    report = prime_records(config.options["A"], config.options["theta"], config.options["N"], config.workers)
    row = {"A": report.A, "theta": str(report.theta), "N": report.N, "count": report.count}
    return CommandResult("zaremba_primes", [report.to_json()], [row])


def cmd_zaremba_growth(config: RunConfig) -> CommandResult:
    witness = growth_witness(config.options["L"], config.options["A"], config.options["theta"])
    row = {"L": witness.parameters.L, "p": witness.p, "length": witness.length, "torsion_rank": witness.torsion_rank}
    return CommandResult("zaremba_growth", [witness.to_json()], [row])


def cmd_zaremba_bridge(config: RunConfig) -> CommandResult:
    report = torsion_bridge(config.options["word"], check_nilhecke=_nilhecke_flag(config.options["nilhecke"]))
    rows = [
        {"row": r, "column": c, "entry": report.matrix.entry(r, c), "N": cert.N, "value": cert.value}
        for (r, c), cert in sorted(report.certificates.items())
    ]
    return CommandResult("zaremba_bridge", [report.to_json()], rows)


def cmd_selftest(config: RunConfig) -> CommandResult:
    import pytest

    pytest_args = [str(settings.TESTS_DIR), "-q"]
    if not config.options.get("slow"):
        pytest_args += ["-m", "not slow"]
    status = pytest.main(pytest_args)
    if status != 0:
        raise IntegrityError(f"Self-test failed with pytest status {int(status)}")
    return CommandResult("selftest", [{"status": "passed"}], [{"status": "passed"}])


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "eval-word": cmd_eval_word,
    "build": cmd_build,
    "certify": cmd_certify,
    "fib": cmd_fib,
    "ulu": cmd_ulu,
    "search": cmd_search,
    "zaremba density": cmd_zaremba_density,
    "zaremba primes": cmd_zaremba_primes,
    "zaremba growth": cmd_zaremba_growth,
    "zaremba bridge": cmd_zaremba_bridge,
    "selftest": cmd_selftest,
}


def render(result: CommandResult, output_format: str) -> str:
    if output_format == "table":
        if not result.rows:
            return ""
        return pd.DataFrame(result.rows).to_string(index=False) + "\n"
    return "".join(dumps(envelope(result.kind, doc)) + "\n" for doc in result.documents)


def apply_caps(config: RunConfig):
    settings.NILHECKE_MAX_RANK = config.nilhecke_max_rank
    settings.FACTOR_FULL_BITS = config.factor_full_bits


def run(config: RunConfig, stream=None) -> int:
    """Dispatch one command; returns the exit status."""
    handler = COMMANDS.get(config.command)
    if handler is None:
        logger.error(f"Unknown command {config.command!r}")
        return InvalidInputError.exit_code
    apply_caps(config)
    try:
        result = handler(config)
    except TorsionLabError as e:
        logger.error(f"{config.command} failed: {e}")
        return e.exit_code
    text = render(result, config.output_format)
    if config.output:
        try:
            with open(config.output, "w") as f:
                f.write(text)
        except OSError as e:
            logger.error(f"Failed to write {config.output}: {e}")
            return InvalidInputError.exit_code
        logger.info(f"Saved {len(result.documents)} {result.kind} documents to {config.output}")
    else:
        (stream or sys.stdout).write(text)
    return 0


def setup_args(argv=None):
    """Set up command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['json', 'table'], default='json',
                        help='Output format (default: json lines)')
    common.add_argument('--output', type=str, default=None,
                        help='Write output to this file instead of stdout')
    common.add_argument('--rng-seed', type=int, default=0,
                        help='Seed for every random choice (default: 0)')
    common.add_argument('--workers', type=int, default=settings.DEFAULT_WORKERS,
                        help=f'Worker processes (default: TORSIONLAB_WORKERS or {settings.DEFAULT_WORKERS})')
    common.add_argument('--nilhecke-max-rank', type=int, default=settings.NILHECKE_MAX_RANK,
                        help='Largest rank N for the unpruned nil Hecke evaluator')
    common.add_argument('--factor-full-bits', type=int, default=settings.FACTOR_FULL_BITS,
                        help='Values below this many bits are factored completely')
    common.add_argument('--verbose', '-v', action='store_true',
                        help='Enable verbose logging')

    parser = argparse.ArgumentParser(description="Torsion certificates, operator searches and Zaremba semigroups")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('eval-word', parents=[common], help='Evaluate operator word data to its integer value')
    p.add_argument('--data', required=True, help='OperatorData JSON, inline or a file path')

    p = sub.add_parser('build', parents=[common], help='Build the reduced expression and its defect-zero subexpression')
    p.add_argument('--data', required=True, help='OperatorData JSON, inline or a file path')
    p.add_argument('--split', action='store_true', help='Split items with both a and b positive')

    p = sub.add_parser('certify', parents=[common], help='Produce a torsion certificate')
    p.add_argument('--data', required=True, help='OperatorData JSON, inline or a file path')
    p.add_argument('--split', action='store_true', help='Split items with both a and b positive')
    p.add_argument('--nilhecke', choices=['auto', 'on', 'off'], default='auto',
                   help='Run the literal nil Hecke evaluator (default: auto, within the rank cap)')

    p = sub.add_parser('fib', parents=[common], help='Check d_1(F^i(x_1)) = F_{i+1}')
    p.add_argument('--max-i', type=int, default=20, help='Largest i (default: 20)')
    p.add_argument('--emit-data', action='store_true', help='Include the operator data of each i')

    p = sub.add_parser('ulu', parents=[common], help='Operator values of a word in U_l (L) and U_u (U)')
    p.add_argument('--word', required=True, help='Word over L and U, e.g. LULU')
    p.add_argument('--certify', action='store_true', help='Certify every nonzero entry')

    p = sub.add_parser('search', parents=[common], help='Search for torsion primes with degree-zero operators')
    p.add_argument('--n', type=int, default=None, help='Inner rank n (default: the rank of the operator set)')
    p.add_argument('--ops', default='paper8', choices=list(OPERATOR_SETS.keys()), help='Operator set')
    p.add_argument('--seeds', default=None, help='Comma separated seed monomials (default: those of the operator set)')
    p.add_argument('--max-len', type=int, default=12, help='Longest random walk (default: 12)')
    p.add_argument('--iters', type=int, default=1000, help='Number of random walks (default: 1000)')
    p.add_argument('--mode', choices=['random', 'beam'], default='random', help='Search strategy')
    p.add_argument('--max-rank', type=int, default=None, help='Largest rank N (required in beam mode)')
    p.add_argument('--beam-width', type=int, default=None, help='Beam width (default: TORSIONLAB_BEAM_WIDTH)')
    p.add_argument('--generation-size', type=int, default=None,
                   help='Random walks per generation (default: TORSIONLAB_SEARCH_GENERATION_SIZE)')

    zaremba = sub.add_parser('zaremba', help='Gamma_A enumeration, growth witnesses and the torsion bridge')
    zsub = zaremba.add_subparsers(dest='zaremba_command', required=True)

    p = zsub.add_parser('density', parents=[common], help='|representable set| / N')
    p.add_argument('--A', type=int, default=settings.ZAREMBA_A)
    p.add_argument('--N', type=int, required=True)

    p = zsub.add_parser('primes', parents=[common], help='Representable primes in (theta N, N]')
    p.add_argument('--A', type=int, default=settings.ZAREMBA_A)
    p.add_argument('--theta', default=settings.ZAREMBA_THETA)
    p.add_argument('--N', type=int, required=True)

    p = zsub.add_parser('growth', parents=[common], help='Prime top-left entry above theta N within wordlength L')
    p.add_argument('--L', type=int, required=True)
    p.add_argument('--A', type=int, default=settings.ZAREMBA_A)
    p.add_argument('--theta', default=settings.ZAREMBA_THETA)

    p = zsub.add_parser('bridge', parents=[common], help='Certify every entry of an L/R word')
    p.add_argument('--word', required=True, help='Word over L and R')
    p.add_argument('--nilhecke', choices=['auto', 'on', 'off'], default='off')

    p = sub.add_parser('selftest', parents=[common], help='Run the test suite')
    p.add_argument('--slow', action='store_true', help='Include the slow exhaustive suites')

    return parser.parse_args(argv)


def main(argv=None):
    """Main entry point for the torsionlab CLI."""
    args = setup_args(argv)
    configure_logging(args.verbose)
    config = RunConfig.from_args(args)
    logger.debug(f"Running {config}")
    return run(config)


if __name__ == "__main__":
    sys.exit(main())

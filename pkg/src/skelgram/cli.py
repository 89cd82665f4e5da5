"""Command-line front end.

Subcommands: learn (drive the query learner against a simulated teacher),
eval (weigh structured strings under a grammar or automaton), convert
(automaton/grammar transformations), trees (gene-string parsing and
distances).  Exit codes: 0 success, 2 input error, 3 iteration cap,
4 precondition violation.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .geneclusters import (SubstringFrequencyWeight, duplication_distance,
                           parse_gene_string, swap_distance)
from .grammar import (GrammarError, WCFG, format_wcfg, load_wcfg, pmta_to_wcfg,
                      wcfg_to_pcfg, wcfg_to_pmta)
from .learner import learn
from .mta import MTA, format_mta, parse_mta
from .scalars import parse_scalar
from .table import CapExceeded
from .teacher import (AllTreesStrategy, CorpusOracle, DuplicationsStrategy,
                      ExhaustiveStrategy, SamplingStrategy, SimulatedTeacher,
                      load_corpus)
from .trees import (RankedAlphabet, TreeSyntaxError, parse_structured_string,
                    tree_yield)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_PRECONDITION = 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _load_target(path_text: str, exact: bool):
    path = Path(path_text)
    if not path.exists():
        raise CliError(f"no such file: {path}", EXIT_INPUT)
    head = path.read_text(encoding="utf-8").lstrip()
    try:
        if head.startswith("mta "):
            return parse_mta(path.read_text(encoding="utf-8"), exact)
        return load_wcfg(path, exact)
    except (GrammarError, ValueError) as exc:
        raise CliError(f"cannot parse {path}: {exc}", EXIT_INPUT)


def _build_strategy(args, alphabet, weight):
    if args.seq == "exhaustive":
        return ExhaustiveStrategy(alphabet, args.max_len, weight)
    if args.seq == "sampling":
        return SamplingStrategy(alphabet, args.count, args.max_len, args.seed, weight)
    if args.seq == "trees":
        return AllTreesStrategy(alphabet, args.max_leaves)
    if args.seq == "duplications":
        if not args.base_trees:
            raise CliError("--seq duplications requires --base-trees", EXIT_INPUT)
        trees = []
        for line in Path(args.base_trees).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line:
                trees.append(parse_structured_string(line, alphabet))
        return DuplicationsStrategy(trees, args.max_dup)
    raise CliError(f"unknown strategy {args.seq!r}", EXIT_INPUT)


def cmd_learn(args) -> int:
    exact = not args.float
    corpus_mode = args.distance is not None
    if corpus_mode:
        try:
            entries, alphabet = load_corpus(args.target, exact=exact,
                                            max_rank=args.max_rank)
            q = parse_scalar(args.q, exact)
            target = CorpusOracle(entries, q, args.distance)
        except (ValueError, OSError) as exc:
            raise CliError(f"cannot load corpus: {exc}", EXIT_INPUT)
        epsilon = 0 if exact else 1e-6
        weight = SubstringFrequencyWeight(
            [tree_yield(entry) for entry, _ in entries])
    else:
        target = _load_target(args.target, exact)
        if isinstance(target, MTA):
            alphabet = target.alphabet
        else:
            alphabet = target.alphabet(args.max_rank)
        epsilon = 0 if exact else 1e-6
        weight = None
    if args.epsilon is not None:
        epsilon = parse_scalar(args.epsilon, exact=False)

    strategy = _build_strategy(args, alphabet, weight)
    teacher = SimulatedTeacher(target, strategy, epsilon)
    final_table = {}

    def observer(table, hypothesis):
        final_table["table"] = table

    started = time.monotonic()
    try:
        report = learn(teacher, alphabet, exact=exact,
                       max_iterations=args.max_iterations, observer=observer)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    wall_ms = int((time.monotonic() - started) * 1000)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    hypothesis = report.hypothesis
    (out / "hypothesis.mta").write_text(format_mta(hypothesis), encoding="utf-8")
    wcfg = pmta_to_wcfg(hypothesis)
    (out / "hypothesis.wcfg").write_text(format_wcfg(wcfg), encoding="utf-8")
    try:
        pcfg = wcfg_to_pcfg(wcfg)
        (out / "hypothesis.pcfg").write_text(format_wcfg(pcfg), encoding="utf-8")
    except GrammarError as exc:
        print(f"warning: PCFG normalization failed: {exc}", file=sys.stderr)
    payload = {
        "seq_count": report.seq_count,
        "smq_count": report.smq_count,
        "basis_size": report.basis_size,
        "wall_time_ms": wall_ms,
        "max_counterexample_size": report.max_counterexample_size,
    }
    (out / "report.json").write_text(json.dumps(payload, indent=2) + "\n",
                                     encoding="utf-8")
    if args.dump_table and "table" in final_table:
        (out / "table.tsv").write_text(final_table["table"].dump_tsv(),
                                       encoding="utf-8")
    print(json.dumps(payload))
    return EXIT_OK


def cmd_eval(args) -> int:
    target = _load_target(args.model, not args.float)
    if isinstance(target, MTA):
        alphabet = target.alphabet
        evaluate = target.eval
    else:
        alphabet = target.alphabet(args.max_rank)
        evaluate = target.skeletal_weight
    if args.trees:
        try:
            lines = Path(args.trees).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise CliError(str(exc), EXIT_INPUT)
    else:
        lines = sys.stdin.read().splitlines()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            tree = parse_structured_string(line, alphabet)
        except TreeSyntaxError as exc:
            print(f"error: line {lineno}: {exc}", file=sys.stderr)
            return EXIT_INPUT
        value = evaluate(tree)
        print(f"{_fmt_value(value)}\t{tree.text}")
    return EXIT_OK


def _fmt_value(value):
    from fractions import Fraction
    if isinstance(value, Fraction):
        return f"{float(value):.12g}" if value.denominator != 1 else str(value.numerator)
    return f"{value:.12g}"


def cmd_convert(args) -> int:
    modes = [m for m in ("pmta_to_wcfg", "wcfg_to_pmta", "wcfg_to_pcfg")
             if getattr(args, m)]
    if len(modes) != 1:
        raise CliError("choose exactly one conversion mode", EXIT_INPUT)
    mode = modes[0]
    exact = not args.float
    try:
        if mode == "pmta_to_wcfg":
            automaton = _load_target(args.input, exact)
            if not isinstance(automaton, MTA):
                raise CliError("input is not an automaton file", EXIT_INPUT)
            try:
                result = format_wcfg(pmta_to_wcfg(automaton))
            except GrammarError as exc:
                raise CliError(str(exc), EXIT_PRECONDITION)
        else:
            grammar = _load_target(args.input, exact)
            if not isinstance(grammar, WCFG):
                raise CliError("input is not a grammar file", EXIT_INPUT)
            try:
                if mode == "wcfg_to_pmta":
                    result = format_mta(wcfg_to_pmta(grammar))
                else:
                    result = format_wcfg(wcfg_to_pcfg(grammar))
            except GrammarError as exc:
                raise CliError(str(exc), EXIT_PRECONDITION)
    except CliError:
        raise
    if args.output:
        Path(args.output).write_text(result, encoding="utf-8")
    else:
        sys.stdout.write(result)
    return EXIT_OK


def cmd_trees(args) -> int:
    try:
        raw_lines = Path(args.strings).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CliError(str(exc), EXIT_INPUT)
    corpus = []
    for line in raw_lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            _, line = line.split("\t", 1)
        corpus.append(tuple(line.split()))
    weight = SubstringFrequencyWeight(corpus)

    if args.against:
        tokens = sorted({tok for s in corpus for tok in s})
        if not tokens:
            return EXIT_OK
        alphabet = RankedAlphabet(tokens, 2)
        try:
            reference = parse_structured_string(args.against, alphabet)
        except TreeSyntaxError as exc:
            raise CliError(f"--against: {exc}", EXIT_INPUT)
        dist = swap_distance if args.distance == "swap" else duplication_distance
        for string in corpus:
            tree, _ = parse_gene_string(string, weight)
            print(f"{dist(tree, reference)}\t{tree.text}")
        return EXIT_OK

    for string in corpus:
        tree, score = parse_gene_string(string, weight)
        print(f"{score}\t{tree.text}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skelgram",
        description="learn, evaluate, and convert skeletal-tree grammars")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a grammar from a simulated teacher")
    p.add_argument("--target", required=True,
                   help="grammar/automaton file, or corpus TSV with --distance")
    p.add_argument("--seq", default="trees",
                   choices=["exhaustive", "sampling", "duplications", "trees"])
    p.add_argument("--max-len", type=int, default=4,
                   help="string length bound for exhaustive/sampling")
    p.add_argument("--max-leaves", type=int, default=5,
                   help="leaf bound for the trees strategy")
    p.add_argument("--count", type=int, default=100, help="sampling draw count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-dup", type=int, default=2)
    p.add_argument("--base-trees", help="file of structured strings for duplications")
    p.add_argument("--distance", choices=["swap", "duplication"],
                   help="treat --target as a corpus TSV with this edit distance")
    p.add_argument("--q", default="0.2", help="corpus decay factor")
    p.add_argument("--epsilon", help="teacher comparison margin")
    p.add_argument("--max-rank", type=int, default=2)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--exact", action="store_true", default=True)
    p.add_argument("--float", action="store_true")
    p.add_argument("--dump-table", action="store_true")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("eval", help="evaluate structured strings under a model")
    p.add_argument("model", help="grammar or automaton file")
    p.add_argument("--trees", help="file of structured strings (default stdin)")
    p.add_argument("--max-rank", type=int, default=2)
    p.add_argument("--float", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("convert", help="convert between model formats")
    p.add_argument("input")
    p.add_argument("--output")
    p.add_argument("--pmta-to-wcfg", action="store_true")
    p.add_argument("--wcfg-to-pmta", action="store_true")
    p.add_argument("--wcfg-to-pcfg", action="store_true")
    p.add_argument("--float", action="store_true")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("trees", help="parse gene strings into trees")
    p.add_argument("strings", help="one space-separated token string per line")
    p.add_argument("--distance", choices=["swap", "duplication"],
                   default="duplication")
    p.add_argument("--against", help="structured string to measure distances against")
    p.set_defaults(func=cmd_trees)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (TreeSyntaxError, GrammarError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

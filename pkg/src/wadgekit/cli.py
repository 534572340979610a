#!/usr/bin/env python3
"""
wadgekit command-line tool
Decides Wadge reducibility between Muller k-acceptors
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .automaton import UltimatelyPeriodicWord, format_automaton, parse_automaton, run_eval
from .config import Config
from .cycles import Cycle, all_cycles, cycle_count_bound
from .errors import WadgeKitError
from .harness import (
    FAMILIES,
    GenConfig,
    gen_acceptor,
    gen_automaton,
    gen_forest,
    gen_poset,
    scaling_run,
    timing_csv,
)
from .poset import format_poset, parse_poset, preceq, unfold
from .wadge import MullerKAcceptor, build_invariant, classify, decide_wadge_leq, format_acceptor, load_acceptor

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

logger = logging.getLogger(__name__)


class InputError(WadgeKitError):
    """Unreadable input file"""


def read_file_content(file_path: str) -> str:
    """Read content from a file, turning I/O failures into input errors"""
    try:
        return Path(file_path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"File not found: {file_path}") from None
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"Error reading file {file_path}: {e}") from None


def _load_acceptor(path: str, strict_subsets: bool) -> MullerKAcceptor:
    return load_acceptor(read_file_content(path), strict_subsets=strict_subsets)


def cmd_decide(args, config: Config) -> int:
    """Decide L(A) <=_W L(B), or classify the pair with --both"""
    m1 = _load_acceptor(args.file_a, args.strict_subsets)
    m2 = _load_acceptor(args.file_b, args.strict_subsets)
    if args.both:
        print(classify(m1, m2))
        return EXIT_OK
    holds = decide_wadge_leq(m1, m2)
    print("LE" if holds else "NOT-LE")
    return EXIT_OK if holds else EXIT_NEGATIVE


def cmd_invariant(args, config: Config) -> int:
    """Print the iterated-poset invariant of an acceptor"""
    invariant = build_invariant(_load_acceptor(args.file, args.strict_subsets))
    sys.stdout.write(format_poset(invariant.poset))
    return EXIT_OK


def cmd_cycles(args, config: Config) -> int:
    """List cycles, count them, or print the counting bound"""
    parsed = parse_automaton(read_file_content(args.file))
    automaton = parsed.automaton
    if args.count or args.bound:
        if args.count:
            print(len(all_cycles(automaton)))
        if args.bound:
            print(f"{cycle_count_bound(automaton.n_states, len(automaton.alphabet)):.6g}")
        return EXIT_OK

    labels = {}
    cycles = all_cycles(automaton)
    if parsed.labeling is not None:
        labels = dict(MullerKAcceptor.from_file(parsed, strict_subsets=args.strict_subsets).labeling)
    for cycle in cycles:
        if args.format == "subsets":
            line = f"subset: {cycle.bits(automaton.n_states)}"
        else:
            line = f"cycle: {' '.join(map(str, cycle.states))}"
        if cycle in labels:
            line += f" -> {labels[cycle]}"
        print(line)
    return EXIT_OK


def cmd_compare_posets(args, config: Config) -> int:
    """Decide P <= R in the unfolding preorder"""
    p = parse_poset(read_file_content(args.file_p))
    r = parse_poset(read_file_content(args.file_r))
    holds = preceq(p, r)
    print("LE" if holds else "NOT-LE")
    return EXIT_OK if holds else EXIT_NEGATIVE


def cmd_unfold(args, config: Config) -> int:
    """Print the bottom-up unfolding of a poset"""
    p = parse_poset(read_file_content(args.file))
    limit = args.limit if args.limit is not None else config.unfold_limit
    sys.stdout.write(format_poset(unfold(p, limit=limit)))
    return EXIT_OK


def cmd_eval(args, config: Config) -> int:
    """Print the infinity set of a run, and its label when the file has one"""
    parsed = parse_automaton(read_file_content(args.file))
    automaton = parsed.automaton
    word = UltimatelyPeriodicWord.from_text(args.prefix, args.period, automaton.alphabet)
    states = Cycle.of(run_eval(automaton, word))
    if parsed.labeling is None:
        print(states)
    else:
        acceptor = MullerKAcceptor.from_file(parsed, strict_subsets=args.strict_subsets)
        print(f"{states} -> {acceptor.label(states)}")
    return EXIT_OK


def cmd_gen(args, config: Config) -> int:
    """Print a seeded random automaton, acceptor, poset or forest"""
    cfg = GenConfig(
        seed=args.seed,
        n_states=(args.states, args.states),
        n_nodes=(args.nodes, args.nodes),
        alphabet_size=args.alphabet,
        k=args.k,
        depth=args.depth,
    )
    if args.kind == "automaton":
        sys.stdout.write(format_automaton(gen_automaton(cfg)))
    elif args.kind == "acceptor":
        sys.stdout.write(format_acceptor(gen_acceptor(cfg), kind=args.format))
    elif args.kind == "poset":
        sys.stdout.write(format_poset(gen_poset(cfg)))
    else:
        sys.stdout.write(format_poset(gen_forest(cfg)))
    return EXIT_OK


def cmd_bench(args, config: Config) -> int:
    """Time preceq on growing poset families and print a CSV table"""
    repetitions = args.repetitions if args.repetitions is not None else config.bench_repetitions
    rows = []
    for family in args.family:
        rows.extend(scaling_run(family, sorted(args.sizes), repetitions=repetitions, seed=args.seed))
    sys.stdout.write(timing_csv(rows))
    return EXIT_OK


COMMANDS = {
    "decide": cmd_decide,
    "invariant": cmd_invariant,
    "cycles": cmd_cycles,
    "compare-posets": cmd_compare_posets,
    "unfold": cmd_unfold,
    "eval": cmd_eval,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wadgekit",
        description="wadgekit - decide Wadge reducibility of omega-regular k-partitions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Does the partition of A reduce to the partition of B?
  wadgekit decide a.acc b.acc

  # Classify the pair as LT, GT, EQ or INCOMPARABLE
  wadgekit decide --both a.acc b.acc

  # Print the invariant, then compare two posets
  wadgekit invariant a.acc > a.poset
  wadgekit compare-posets a.poset b.poset

  # Count cycles and print the counting bound
  wadgekit cycles --count --bound a.acc

Exit codes: 0 relation holds / success, 1 relation fails, 2 input or usage error.
        """,
    )
    parser.add_argument("--version", action="version", version=f"wadgekit {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug details to stderr")
    parser.add_argument("--config-dir", type=Path, help="Directory holding config.json (default: ~/.wadgekit)")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    decide = subparsers.add_parser("decide", help="Decide Wadge reducibility between two acceptors")
    decide.add_argument("file_a", help="Acceptor file A")
    decide.add_argument("file_b", help="Acceptor file B")
    mode = decide.add_mutually_exclusive_group()
    mode.add_argument("--relation", action="store_true", help="Print LE / NOT-LE for A <= B (default)")
    mode.add_argument("--both", action="store_true", help="Print LT, GT, EQ or INCOMPARABLE")

    invariant = subparsers.add_parser("invariant", help="Print the invariant of an acceptor")
    invariant.add_argument("file", help="Acceptor file")

    cycles = subparsers.add_parser("cycles", help="List the cycles of an automaton")
    cycles.add_argument("file", help="Automaton or acceptor file")
    cycles.add_argument("--format", choices=("list", "subsets"), default="list",
                        help="Print id lists or subset bit strings (default: list)")
    cycles.add_argument("--count", action="store_true", help="Print the number of cycles")
    cycles.add_argument("--bound", action="store_true", help="Print the cycle-count bound for n and d")

    for sub in (decide, invariant, cycles):
        sub.add_argument("--strict-subsets", action="store_true",
                         help="Require all 2^n entries in a subset table")

    compare = subparsers.add_parser("compare-posets", help="Decide P <= R on labeled posets")
    compare.add_argument("file_p", help="Poset file P")
    compare.add_argument("file_r", help="Poset file R")

    unfold_parser = subparsers.add_parser("unfold", help="Print the unfolding of a poset")
    unfold_parser.add_argument("file", help="Poset file")
    unfold_parser.add_argument("--limit", type=int,
                               help="Node limit (default: WADGEKIT_UNFOLD_LIMIT or config, 1000000)")

    eval_parser = subparsers.add_parser("eval", help="Evaluate a run on an ultimately periodic word")
    eval_parser.add_argument("file", help="Automaton or acceptor file")
    eval_parser.add_argument("--prefix", default="", help="Finite prefix (empty by default)")
    eval_parser.add_argument("--period", required=True, help="Nonempty period")
    eval_parser.add_argument("--strict-subsets", action="store_true",
                             help="Require all 2^n entries in a subset table")

    gen = subparsers.add_parser("gen", help="Generate a seeded random fixture")
    gen.add_argument("kind", choices=("automaton", "acceptor", "poset", "forest"))
    gen.add_argument("--seed", type=int, default=0, help="Generator seed (default: 0)")
    gen.add_argument("--states", type=int, default=4, help="Number of states (default: 4)")
    gen.add_argument("--alphabet", type=int, default=2, help="Alphabet size (default: 2)")
    gen.add_argument("--k", type=int, default=2, help="Number of labels (default: 2)")
    gen.add_argument("--nodes", type=int, default=5, help="Number of poset nodes (default: 5)")
    gen.add_argument("--depth", type=int, default=0, choices=(0, 1, 2), help="Label nesting depth")
    gen.add_argument("--format", choices=("cycle", "subset"), default="cycle",
                     help="Acceptor labeling section (default: cycle)")

    bench = subparsers.add_parser("bench", help="Time preceq on poset families (CSV)")
    bench.add_argument("--family", choices=FAMILIES, action="append",
                       help="Family to time; repeatable (default: chain and antichain)")
    bench.add_argument("--sizes", type=int, nargs="+", default=[500, 1000], help="Sizes (default: 500 1000)")
    bench.add_argument("--repetitions", type=int, help="Repetitions per size (default: config, 5)")
    bench.add_argument("--seed", type=int, default=0, help="Generator seed (default: 0)")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_ERROR
    if args.command == "bench" and not args.family:
        args.family = ["chain", "antichain"]

    try:
        config = Config(args.config_dir)
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG if args.verbose else config.log_level,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return COMMANDS[args.command](args, config)
    except WadgeKitError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_ERROR


def cli_main():
    """Entry point for console script"""
    sys.exit(main())


if __name__ == "__main__":
    cli_main()

"""
wadgekit
Decides Wadge reducibility between omega-regular k-partitions given by Muller k-acceptors
"""

__version__ = "0.1.0"
__author__ = "wadgekit developers"

from .automaton import Alphabet, Automaton, UltimatelyPeriodicWord, parse_automaton, run_eval
from .cycles import Cycle, CycleSet, all_cycles, all_cycles_bruteforce, cycle_count_bound
from .errors import LabelingError, ParseError, SizeLimitError, ValidationError, WadgeKitError
from .poset import Base, LabeledPoset, Nested, PointedPoset, parse_poset, preceq, unfold
from .wadge import MullerKAcceptor, WadgeRelation, build_invariant, classify, decide_wadge_leq
from .cli import main

__all__ = [
    "Alphabet",
    "Automaton",
    "UltimatelyPeriodicWord",
    "parse_automaton",
    "run_eval",
    "Cycle",
    "CycleSet",
    "all_cycles",
    "all_cycles_bruteforce",
    "cycle_count_bound",
    "WadgeKitError",
    "ParseError",
    "ValidationError",
    "LabelingError",
    "SizeLimitError",
    "Base",
    "Nested",
    "LabeledPoset",
    "PointedPoset",
    "parse_poset",
    "preceq",
    "unfold",
    "MullerKAcceptor",
    "WadgeRelation",
    "build_invariant",
    "classify",
    "decide_wadge_leq",
    "main",
]

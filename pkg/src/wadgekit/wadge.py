"""
Wadge reducibility between Muller k-acceptors

The invariant of an acceptor is a poset of its cycle-bearing SCCs, ordered
by reachability, where each node is labeled by the pointed poset of the
cycles inside that SCC ordered by reverse inclusion. One acceptor's
partition Wadge-reduces to another's iff the invariants compare under
``preceq``.
"""

import enum
import logging
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Tuple

from .automaton import (
    Automaton,
    AutomatonFile,
    Reachability,
    UltimatelyPeriodicWord,
    format_automaton,
    parse_automaton,
    product_with_pairs,
    reachability_matrix,
    run_eval,
    tarjan_scc,
)
from .cycles import Cycle, CycleSet, all_cycles, cycle_list_to_cycles, subset_table_to_cycles
from .errors import LabelingError, ValidationError
from .poset import Base, LabeledPoset, Nested, PointedPoset, normalize, preceq

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MullerKAcceptor:
    """Automaton plus a total labeling of its cycles by ``0..k-1``"""

    automaton: Automaton
    k: int
    labeling: Mapping[Cycle, int] = field(repr=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"k must be at least 1, got {self.k}")
        labeling = dict(self.labeling)
        for cycle in self.cycles:
            if cycle not in labeling:
                raise LabelingError(f"unlabeled cycle {cycle}")
        extra = [c for c in labeling if c not in self.cycles]
        if extra:
            raise LabelingError(f"labeled state set {sorted(extra)[0]} is not a cycle")
        for cycle, label in labeling.items():
            if not isinstance(label, int) or not 0 <= label < self.k:
                raise LabelingError(f"label {label!r} of cycle {cycle} out of range for k={self.k}")
        ordered = {cycle: labeling[cycle] for cycle in self.cycles}
        object.__setattr__(self, "labeling", MappingProxyType(ordered))

    @cached_property
    def cycles(self) -> CycleSet:
        return all_cycles(self.automaton)

    def label(self, cycle: Cycle) -> int:
        try:
            return self.labeling[cycle]
        except KeyError:
            raise LabelingError(f"{cycle} is not a cycle of this acceptor") from None

    def evaluate(self, word: UltimatelyPeriodicWord) -> int:
        """Value of the recognized k-partition on ``word``"""
        return self.label(Cycle.of(run_eval(self.automaton, word)))

    @classmethod
    def constant(cls, automaton: Automaton, k: int = 1, value: int = 0) -> "MullerKAcceptor":
        return cls(automaton, k, {c: value for c in all_cycles(automaton)})

    @classmethod
    def from_accepting_family(cls, automaton: Automaton, accepting: Iterable[Cycle]) -> "MullerKAcceptor":
        """
        Equivalent 2-acceptor of the Muller acceptor ``(automaton, accepting)``

        Accepting cycles get label 1 and all other cycles label 0.
        """
        cycles = all_cycles(automaton)
        accepting = set(accepting)
        for cycle in accepting:
            if cycle not in cycles:
                raise LabelingError(f"accepting set {cycle} is not a cycle")
        return cls(automaton, 2, {c: int(c in accepting) for c in cycles})

    @classmethod
    def from_file(cls, parsed: AutomatonFile, strict_subsets: bool = False) -> "MullerKAcceptor":
        """Build an acceptor from a parsed file carrying either labeling section"""
        automaton, section = parsed
        if section is None:
            raise LabelingError("file has no acceptor section ('k:' with cycle or subset lines)")
        cycles = all_cycles(automaton)
        if section.kind == "subset":
            table = {bits: label for bits, label, _ in section.entries}
            labeling = subset_table_to_cycles(automaton, table, strict=strict_subsets, cycles=cycles)
        else:
            entries = {ids: label for ids, label, _ in section.entries}
            labeling = cycle_list_to_cycles(automaton, entries, cycles=cycles)
        return cls(automaton, section.k, labeling)


def load_acceptor(text: str, strict_subsets: bool = False) -> MullerKAcceptor:
    return MullerKAcceptor.from_file(parse_automaton(text), strict_subsets=strict_subsets)


def format_acceptor(m: MullerKAcceptor, kind: str = "cycle") -> str:
    """Automaton file text followed by a cycle-list or subset-table section"""
    lines = [format_automaton(m.automaton).rstrip("\n"), f"k: {m.k}"]
    for cycle, label in m.labeling.items():
        if kind == "subset":
            lines.append(f"subset: {cycle.bits(m.automaton.n_states)} -> {label}")
        else:
            lines.append(f"cycle: {' '.join(map(str, cycle.states))} -> {label}")
    return "\n".join(lines) + "\n"


def product_acceptor(m: MullerKAcceptor, a: Automaton) -> MullerKAcceptor:
    """Acceptor over ``product(m.automaton, a)`` recognizing the same partition as ``m``"""
    prod, pairs = product_with_pairs(m.automaton, a)
    labeling = {c: m.label(Cycle.of(pairs[q][0] for q in c)) for c in all_cycles(prod)}
    return MullerKAcceptor(prod, m.k, labeling)


class WadgeRelation(enum.Enum):
    LT = "LT"
    GT = "GT"
    EQ = "EQ"
    INCOMPARABLE = "INCOMPARABLE"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Invariant:
    """
    Iterated poset of an acceptor

    Node ``i`` of ``poset`` stands for the SCC ``components[i]``; its nested
    label orders ``members[i]`` (the SCC itself first) by reverse inclusion.
    """

    poset: LabeledPoset
    components: Tuple[Cycle, ...]
    members: Tuple[Tuple[Cycle, ...], ...]


def leq0(c: Cycle, d: Cycle, reach: Reachability) -> bool:
    """Whether the states of ``d`` are reachable from those of ``c``"""
    return any(q in reach[c.states[0]] for q in d.states)


def leq1(c: Cycle, d: Cycle) -> bool:
    """Whether ``c`` includes ``d``"""
    return c.issuperset(d)


def _pointed_cycles(m: MullerKAcceptor, members: List[Cycle]) -> PointedPoset:
    relation = [
        (i, j)
        for i, c in enumerate(members)
        for j, d in enumerate(members)
        if i != j and leq1(c, d)
    ]
    return normalize([Base(m.label(c)) for c in members], relation, pointed=True)


def build_invariant(m: MullerKAcceptor) -> Invariant:
    """Poset of cycle-bearing SCCs with pointed posets of their cycles as labels"""
    scc = tarjan_scc(m.automaton)
    reach = reachability_matrix(m.automaton)
    grouped: Dict[int, List[Cycle]] = {}
    for cycle in m.cycles:
        grouped.setdefault(scc.component_of(cycle.states[0]), []).append(cycle)

    components: List[Cycle] = []
    members: List[Tuple[Cycle, ...]] = []
    labels = []
    for i, states in enumerate(scc.components):
        top = Cycle(states)
        if top not in m.cycles:
            continue
        inside = [top] + sorted(c for c in grouped[i] if c != top)
        components.append(top)
        members.append(tuple(inside))
        labels.append(Nested(_pointed_cycles(m, inside)))

    relation = [
        (i, j)
        for i, c in enumerate(components)
        for j, d in enumerate(components)
        if i != j and leq0(c, d, reach)
    ]
    poset = normalize(labels, relation)
    logger.debug("invariant has %d nodes over %d cycles", len(poset), len(m.cycles))
    return Invariant(poset, tuple(components), tuple(members))


def decide_wadge_leq(m1: MullerKAcceptor, m2: MullerKAcceptor) -> bool:
    """Whether the partition of ``m1`` Wadge-reduces to the partition of ``m2``"""
    return preceq(build_invariant(m1).poset, build_invariant(m2).poset)


def classify(m1: MullerKAcceptor, m2: MullerKAcceptor) -> WadgeRelation:
    p1 = build_invariant(m1).poset
    p2 = build_invariant(m2).poset
    forward, backward = preceq(p1, p2), preceq(p2, p1)
    if forward and backward:
        return WadgeRelation.EQ
    if forward:
        return WadgeRelation.LT
    if backward:
        return WadgeRelation.GT
    return WadgeRelation.INCOMPARABLE

"""
Cycle sets of automata

A cycle is a set of states that some run from the initial state visits
infinitely often. ``all_cycles`` builds them by merging elementary cycles
that share a state; ``all_cycles_bruteforce`` checks every subset directly.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple

import networkx as nx

from .automaton import Automaton, State
from .config import Config
from .errors import LabelingError, SizeLimitError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Cycle:
    """Nonempty state set, stored as a strictly increasing id tuple"""

    states: Tuple[State, ...]

    def __post_init__(self):
        if not self.states:
            raise ValidationError("a cycle must contain at least one state")
        if any(b <= a for a, b in zip(self.states, self.states[1:])):
            raise ValidationError(f"cycle states must be strictly increasing: {self.states}")

    @classmethod
    def of(cls, states: Iterable[State]) -> "Cycle":
        return cls(tuple(sorted(set(states))))

    @classmethod
    def from_mask(cls, mask: int) -> "Cycle":
        return cls(tuple(q for q in range(mask.bit_length()) if mask >> q & 1))

    @classmethod
    def from_bits(cls, bits: str) -> "Cycle":
        """Decode a subset-table bit string (leftmost character is state 0)"""
        return cls(tuple(q for q, bit in enumerate(bits) if bit == "1"))

    @cached_property
    def mask(self) -> int:
        return sum(1 << q for q in self.states)

    def bits(self, n_states: int) -> str:
        return "".join("1" if self.mask >> q & 1 else "0" for q in range(n_states))

    def issuperset(self, other: "Cycle") -> bool:
        return other.mask & ~self.mask == 0

    def __contains__(self, state: object) -> bool:
        return isinstance(state, int) and bool(self.mask >> state & 1)

    def __iter__(self) -> Iterator[State]:
        return iter(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.states)) + "}"


@dataclass(frozen=True)
class CycleSet:
    """Deduplicated cycles in canonical (lexicographic id tuple) order"""

    cycles: Tuple[Cycle, ...]

    def __post_init__(self):
        if list(self.cycles) != sorted(set(self.cycles)):
            raise ValidationError("cycle set must be sorted and free of duplicates")

    @classmethod
    def of(cls, cycles: Iterable[Cycle]) -> "CycleSet":
        return cls(tuple(sorted(set(cycles))))

    @cached_property
    def _members(self) -> FrozenSet[Cycle]:
        return frozenset(self.cycles)

    def __contains__(self, cycle: object) -> bool:
        return cycle in self._members

    def __iter__(self) -> Iterator[Cycle]:
        return iter(self.cycles)

    def __len__(self) -> int:
        return len(self.cycles)


@dataclass(frozen=True)
class ElementaryCycle:
    """Closed walk through distinct states, rotated so the smallest id comes first"""

    vertices: Tuple[State, ...]

    def __post_init__(self):
        if not self.vertices or len(set(self.vertices)) != len(self.vertices):
            raise ValidationError(f"elementary cycle needs distinct vertices: {self.vertices}")

    @classmethod
    def canonical(cls, vertices: Iterable[State]) -> "ElementaryCycle":
        vertices = list(vertices)
        start = vertices.index(min(vertices))
        return cls(tuple(vertices[start:] + vertices[:start]))

    @cached_property
    def mask(self) -> int:
        return sum(1 << q for q in self.vertices)


@dataclass(frozen=True)
class IntersectionGraph:
    """
    Undirected graph on elementary cycles, joining cycles that share a state

    ``neighbours[i]`` is a bitmask over cycle indices; it never contains i.
    """

    cycles: Tuple[ElementaryCycle, ...]
    neighbours: Tuple[int, ...]

    @classmethod
    def build(cls, cycles: Iterable[ElementaryCycle]) -> "IntersectionGraph":
        cycles = tuple(cycles)
        neighbours = [0] * len(cycles)
        for i, j in itertools.combinations(range(len(cycles)), 2):
            if cycles[i].mask & cycles[j].mask:
                neighbours[i] |= 1 << j
                neighbours[j] |= 1 << i
        return cls(cycles, tuple(neighbours))

    def edges(self) -> Iterator[Tuple[int, int]]:
        for i, mask in enumerate(self.neighbours):
            for j in _bits(mask):
                if i < j:
                    yield i, j


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def is_cycle(a: Automaton, states: Iterable[State]) -> bool:
    """Whether ``states`` is a reachable, strongly connected set carrying a loop"""
    states = set(states)
    if not states or not states <= a.reachable:
        return False
    sub = a.graph.subgraph(states)
    if len(states) == 1:
        (q,) = states
        return sub.has_edge(q, q)
    return nx.is_strongly_connected(sub)


def elementary_cycles(a: Automaton) -> List[ElementaryCycle]:
    """Every elementary cycle of the reachable state digraph, once up to rotation"""
    found = sorted(
        (ElementaryCycle.canonical(c) for c in nx.simple_cycles(a.reachable_graph)),
        key=lambda c: (len(c.vertices), c.vertices),
    )
    logger.debug("found %d elementary cycles", len(found))
    return found


def all_cycles(a: Automaton) -> CycleSet:
    """
    The set of cycles of ``a``

    Each queue item is a connected set of elementary cycles, carried as
    (union of states, member bitmask, neighbour bitmask). A neighbour is
    merged in only when the union it produces has not been seen yet, so
    every cycle is expanded exactly once.
    """
    elementary = elementary_cycles(a)
    graph = IntersectionGraph.build(elementary)
    masks = [c.mask for c in elementary]

    found: Dict[int, None] = {}
    queue = deque()
    for i, mask in enumerate(masks):
        if mask not in found:
            found[mask] = None
            queue.append((mask, 1 << i, graph.neighbours[i]))

    while queue:
        states, members, neighbours = queue.popleft()
        for j in _bits(neighbours & ~members):
            union = states | masks[j]
            if union in found:
                continue
            found[union] = None
            queue.append((union, members | 1 << j, neighbours | graph.neighbours[j]))

    logger.debug("%d elementary cycles merge into %d cycles", len(elementary), len(found))
    return CycleSet.of(Cycle.from_mask(mask) for mask in found)


def all_cycles_bruteforce(a: Automaton, limit: Optional[int] = None) -> CycleSet:
    """Cycle set by testing every subset of reachable states"""
    limit = Config().bruteforce_state_limit if limit is None else limit
    if a.n_states > limit:
        raise SizeLimitError(f"brute-force cycle search limited to {limit} states, got {a.n_states}")
    reachable = sorted(a.reachable)
    found = [
        Cycle(subset)
        for size in range(1, len(reachable) + 1)
        for subset in itertools.combinations(reachable, size)
        if is_cycle(a, subset)
    ]
    return CycleSet.of(found)


def cycle_count_bound(n: int, d: int) -> float:
    """Upper bound ``max(2^d, C^n + n)`` on the number of cycles, ``C = 2(1 - 2^-(d+1))^(1/(d+1))``"""
    if n < 1 or d < 1:
        raise ValidationError(f"cycle bound needs n >= 1 and d >= 1, got n={n}, d={d}")
    c = 2 * (1 - 1 / 2 ** (d + 1)) ** (1 / (d + 1))
    return max(2.0 ** d, c ** n + n)


def _restrict_to_cycles(
    a: Automaton,
    labeled: Iterable[Tuple[Cycle, int]],
    source: str,
    cycles: Optional[CycleSet] = None,
) -> Dict[Cycle, int]:
    cycles = all_cycles(a) if cycles is None else cycles
    labels: Dict[Cycle, int] = {}
    dropped = []
    for cycle, label in labeled:
        if cycle in cycles:
            labels[cycle] = label
        else:
            dropped.append(cycle)
    if dropped:
        shown = ", ".join(str(c) for c in dropped[:5])
        more = f" and {len(dropped) - 5} more" if len(dropped) > 5 else ""
        logger.warning("dropped %d %s entries that are not cycles: %s%s", len(dropped), source, shown, more)
    for cycle in cycles:
        if cycle not in labels:
            raise LabelingError(f"unlabeled cycle {cycle}")
    return {cycle: labels[cycle] for cycle in cycles}


def subset_table_to_cycles(
    a: Automaton,
    table: Mapping[str, int],
    strict: bool = False,
    cycles: Optional[CycleSet] = None,
) -> Dict[Cycle, int]:
    """
    Restrict a subset-indexed labeling to the cycles of ``a``

    Args:
        a: Automaton the bit strings refer to
        table: Bit string (leftmost character = state 0) to label
        strict: Require one entry for each of the 2^n subsets
        cycles: Precomputed ``all_cycles(a)``

    Returns:
        Label of every cycle, in canonical cycle order
    """
    if strict and len(table) != 2 ** a.n_states:
        raise LabelingError(f"subset table has {len(table)} entries, expected {2 ** a.n_states}")
    labeled = []
    empty = "0" * a.n_states
    for bits, label in table.items():
        if len(bits) != a.n_states or set(bits) - {"0", "1"}:
            raise ValidationError(f"subset {bits!r} is not a bit string of length {a.n_states}")
        if bits != empty:
            labeled.append((Cycle.from_bits(bits), label))
    return _restrict_to_cycles(a, labeled, "subset", cycles)


def cycle_list_to_cycles(
    a: Automaton,
    entries: Mapping[Tuple[State, ...], int],
    cycles: Optional[CycleSet] = None,
) -> Dict[Cycle, int]:
    """Restrict a compact cycle-list labeling to the cycles of ``a``"""
    return _restrict_to_cycles(a, ((Cycle(ids), label) for ids, label in entries.items()), "cycle", cycles)

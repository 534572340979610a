"""
Deterministic automata over finite alphabets

Parsing and serialization of the line-based automaton file, reachability,
strongly connected components, products, and runs on ultimately periodic
words.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

State = int
Reachability = Mapping[State, FrozenSet[State]]


@dataclass(frozen=True)
class Alphabet:
    """Ordered list of distinct letter names"""

    letters: Tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValidationError("alphabet must be nonempty")
        for letter in self.letters:
            if not letter or any(ch.isspace() for ch in letter):
                raise ValidationError(f"invalid letter {letter!r}")
        if len(set(self.letters)) != len(self.letters):
            raise ValidationError(f"duplicate letters in alphabet {list(self.letters)}")

    @cached_property
    def _positions(self) -> Dict[str, int]:
        return {letter: i for i, letter in enumerate(self.letters)}

    def index(self, letter: str) -> int:
        try:
            return self._positions[letter]
        except KeyError:
            raise ValidationError(f"letter {letter!r} not in alphabet") from None

    def __contains__(self, letter: object) -> bool:
        return letter in self._positions

    def __iter__(self):
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class Automaton:
    """
    Complete deterministic automaton

    ``delta[q][i]`` is the target of state ``q`` on the i-th letter of the
    alphabet. States are the dense ids ``0..n_states-1``.
    """

    alphabet: Alphabet
    n_states: int
    initial: State
    delta: Tuple[Tuple[State, ...], ...]

    def __post_init__(self):
        if self.n_states < 1:
            raise ValidationError("automaton needs at least one state")
        if not 0 <= self.initial < self.n_states:
            raise ValidationError(f"initial state {self.initial} out of range")
        if len(self.delta) != self.n_states:
            raise ValidationError(f"expected {self.n_states} transition rows, got {len(self.delta)}")
        for q, row in enumerate(self.delta):
            if len(row) != len(self.alphabet):
                raise ValidationError(f"state {q} must have exactly one transition per letter")
            for target in row:
                if not 0 <= target < self.n_states:
                    raise ValidationError(f"transition target {target} of state {q} out of range")

    @classmethod
    def from_transitions(
        cls,
        alphabet: Union[Alphabet, Sequence[str]],
        n_states: int,
        initial: State,
        transitions: Mapping[Tuple[State, str], State],
    ) -> "Automaton":
        """Build an automaton from a ``(state, letter) -> state`` map"""
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        rows = []
        for q in range(n_states):
            row = []
            for letter in alphabet:
                if (q, letter) not in transitions:
                    raise ValidationError(f"missing transition for state {q} on {letter!r}")
                row.append(transitions[(q, letter)])
            rows.append(tuple(row))
        extra = set(transitions) - {(q, letter) for q in range(n_states) for letter in alphabet}
        if extra:
            raise ValidationError(f"transitions outside the automaton: {sorted(extra)}")
        return cls(alphabet, n_states, initial, tuple(rows))

    def step(self, state: State, letter: str) -> State:
        return self.delta[state][self.alphabet.index(letter)]

    def run(self, state: State, word: Iterable[str]) -> State:
        for letter in word:
            state = self.step(state, letter)
        return state

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Simple digraph of all states; parallel letters collapse to one arc"""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n_states))
        g.add_edges_from((q, target) for q, row in enumerate(self.delta) for target in row)
        return nx.freeze(g)

    @cached_property
    def reachable(self) -> FrozenSet[State]:
        return frozenset(nx.descendants(self.graph, self.initial)) | {self.initial}

    @cached_property
    def reachable_graph(self) -> nx.DiGraph:
        """Subgraph induced on the states reachable from ``initial``"""
        return nx.freeze(self.graph.subgraph(self.reachable).copy())


@dataclass(frozen=True)
class UltimatelyPeriodicWord:
    """The omega-word ``prefix . period . period ...``"""

    prefix: Tuple[str, ...]
    period: Tuple[str, ...]

    def __post_init__(self):
        if not self.period:
            raise ValidationError("period of an ultimately periodic word must be nonempty")

    @classmethod
    def from_text(cls, prefix: str, period: str, alphabet: Alphabet) -> "UltimatelyPeriodicWord":
        """
        Read prefix and period from command-line text

        Whitespace-separated letters are always accepted. Without whitespace,
        a word over an alphabet of one-character letters is read character by
        character, otherwise the whole text is a single letter.
        """
        return cls(_split_word(prefix, alphabet), _split_word(period, alphabet))

    def __str__(self) -> str:
        return f"{' '.join(self.prefix)} ({' '.join(self.period)})^w".strip()


def _split_word(text: str, alphabet: Alphabet) -> Tuple[str, ...]:
    text = text.strip()
    if not text or text in ("ε", "eps"):
        return ()
    if any(ch.isspace() for ch in text):
        return tuple(text.split())
    if all(len(letter) == 1 for letter in alphabet):
        return tuple(text)
    return (text,)


@dataclass(frozen=True)
class LabelingSection:
    """
    Raw acceptor section of an automaton file

    ``kind`` is ``"cycle"`` (compact cycle list, keys are increasing id
    tuples) or ``"subset"`` (standard subset table, keys are bit strings).
    Each entry is ``(key, label, line_number)``.
    """

    k: int
    kind: str
    entries: Tuple[Tuple[Union[Tuple[int, ...], str], int, int], ...] = field(default=())


class AutomatonFile(NamedTuple):
    automaton: Automaton
    labeling: Optional[LabelingSection]


def _parse_int(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line) from None


def _parse_label(text: str, k: int, line: int) -> int:
    label = _parse_int(text.strip(), "label", line)
    if not 0 <= label < k:
        raise ParseError(f"label {label} out of range for k={k}", line)
    return label


def parse_automaton(text: str) -> AutomatonFile:
    """
    Parse an automaton file, with an optional acceptor section

    Returns:
        The validated automaton and the raw labeling section (or None)
    """
    alphabet: Optional[Alphabet] = None
    n_states: Optional[int] = None
    initial: Optional[int] = None
    initial_line = 0
    transitions: Dict[Tuple[int, int], int] = {}
    k: Optional[int] = None
    kind: Optional[str] = None
    entries: List[Tuple[Union[Tuple[int, ...], str], int, int]] = []
    seen_keys: Dict[Union[Tuple[int, ...], str], int] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"malformed line {line!r}", lineno)
        key = key.strip()
        fields = rest.split()

        if key == "alphabet":
            if alphabet is not None:
                raise ParseError("alphabet declared twice", lineno)
            try:
                alphabet = Alphabet(tuple(fields))
            except ValidationError as e:
                raise ParseError(str(e), lineno) from None
        elif key == "states":
            if n_states is not None:
                raise ParseError("states declared twice", lineno)
            if len(fields) != 1:
                raise ParseError("expected 'states: <n>'", lineno)
            n_states = _parse_int(fields[0], "state count", lineno)
            if n_states < 1:
                raise ParseError("state count must be at least 1", lineno)
        elif key == "initial":
            if initial is not None:
                raise ParseError("initial state declared twice", lineno)
            if len(fields) != 1:
                raise ParseError("expected 'initial: <id>'", lineno)
            initial, initial_line = _parse_int(fields[0], "initial state", lineno), lineno
        elif key == "trans":
            if alphabet is None or n_states is None:
                raise ParseError("alphabet and states must be declared before transitions", lineno)
            if len(fields) != 3:
                raise ParseError("expected 'trans: <from> <letter> <to>'", lineno)
            source = _parse_int(fields[0], "state id", lineno)
            target = _parse_int(fields[2], "state id", lineno)
            for q in (source, target):
                if not 0 <= q < n_states:
                    raise ParseError(f"unknown state id {q}", lineno)
            if fields[1] not in alphabet:
                raise ParseError(f"unknown letter {fields[1]!r}", lineno)
            slot = (source, alphabet.index(fields[1]))
            if slot in transitions:
                raise ParseError(f"duplicate transition {source} {fields[1]}", lineno)
            transitions[slot] = target
        elif key == "k":
            if k is not None:
                raise ParseError("k declared twice", lineno)
            if len(fields) != 1:
                raise ParseError("expected 'k: <k>'", lineno)
            k = _parse_int(fields[0], "k", lineno)
            if k < 1:
                raise ParseError("k must be at least 1", lineno)
        elif key in ("cycle", "subset"):
            if k is None:
                raise ParseError(f"'k:' must precede {key} lines", lineno)
            if n_states is None:
                raise ParseError(f"states must be declared before {key} lines", lineno)
            if kind is not None and kind != key:
                raise ParseError("cycle and subset lines cannot be mixed", lineno)
            kind = key
            body, arrow, label_text = rest.partition("->")
            if not arrow:
                raise ParseError(f"expected '{key}: ... -> <label>'", lineno)
            label = _parse_label(label_text, k, lineno)
            entry_key: Union[Tuple[int, ...], str]
            if key == "cycle":
                ids = tuple(_parse_int(t, "state id", lineno) for t in body.split())
                if not ids:
                    raise ParseError("cycle must name at least one state", lineno)
                if any(b <= a for a, b in zip(ids, ids[1:])):
                    raise ParseError("cycle ids must be strictly increasing", lineno)
                if not all(0 <= q < n_states for q in ids):
                    raise ParseError("unknown state id in cycle", lineno)
                entry_key = ids
            else:
                bits = body.strip()
                if len(bits) != n_states or set(bits) - {"0", "1"}:
                    raise ParseError(f"subset must be a bit string of length {n_states}", lineno)
                entry_key = bits
            if entry_key in seen_keys:
                raise ParseError(f"duplicate {key} entry (first on line {seen_keys[entry_key]})", lineno)
            seen_keys[entry_key] = lineno
            entries.append((entry_key, label, lineno))
        else:
            raise ParseError(f"unknown section {key!r}", lineno)

    if alphabet is None:
        raise ParseError("missing 'alphabet:' line")
    if n_states is None:
        raise ParseError("missing 'states:' line")
    if initial is None:
        raise ParseError("missing 'initial:' line")
    if not 0 <= initial < n_states:
        raise ParseError(f"unknown state id {initial}", initial_line)
    for q in range(n_states):
        for i, letter in enumerate(alphabet):
            if (q, i) not in transitions:
                raise ParseError(f"missing transition for state {q} on {letter!r}")

    delta = tuple(tuple(transitions[(q, i)] for i in range(len(alphabet))) for q in range(n_states))
    automaton = Automaton(alphabet, n_states, initial, delta)
    labeling = None
    if k is not None:
        labeling = LabelingSection(k, kind or "cycle", tuple(entries))
    return AutomatonFile(automaton, labeling)


def format_automaton(a: Automaton) -> str:
    """Serialize to the automaton file format (transitions by state, then letter)"""
    lines = [
        f"alphabet: {' '.join(a.alphabet)}",
        f"states: {a.n_states}",
        f"initial: {a.initial}",
    ]
    for q, row in enumerate(a.delta):
        for letter, target in zip(a.alphabet, row):
            lines.append(f"trans: {q} {letter} {target}")
    return "\n".join(lines) + "\n"


def reachable_states(a: Automaton) -> FrozenSet[State]:
    """States ``f(in, u)`` for finite words ``u``"""
    return a.reachable


def reachability_matrix(a: Automaton) -> Reachability:
    """
    Reflexive reachability relation over all states

    ``q in result[p]`` iff some (possibly empty) path leads from p to q.
    """
    relation = {p: frozenset(nx.descendants(a.graph, p)) | {p} for p in range(a.n_states)}
    return MappingProxyType(relation)


@dataclass(frozen=True)
class SCCDecomposition:
    """
    Strongly connected components of the reachable subgraph

    Components are sorted by their smallest state id; ``order`` holds the
    reflexive reachability order ``(i, j)`` between component indices.
    """

    components: Tuple[Tuple[State, ...], ...]
    order: FrozenSet[Tuple[int, int]]
    condensation: nx.DiGraph = field(compare=False, repr=False)

    @cached_property
    def _index(self) -> Dict[State, int]:
        return {q: i for i, comp in enumerate(self.components) for q in comp}

    def component_of(self, state: State) -> int:
        return self._index[state]

    def precedes(self, i: int, j: int) -> bool:
        return (i, j) in self.order


def tarjan_scc(a: Automaton) -> SCCDecomposition:
    """SCC partition of the reachable states and its condensation order"""
    g = a.reachable_graph
    components = sorted((tuple(sorted(c)) for c in nx.strongly_connected_components(g)), key=lambda c: c[0])
    condensation = nx.condensation(g, scc=[set(c) for c in components])
    order = {(i, i) for i in condensation}
    for i in condensation:
        order.update((i, j) for j in nx.descendants(condensation, i))
    logger.debug("%d reachable states form %d SCCs", len(a.reachable), len(components))
    return SCCDecomposition(tuple(components), frozenset(order), nx.freeze(condensation))


def product_with_pairs(a1: Automaton, a2: Automaton) -> Tuple[Automaton, Tuple[Tuple[State, State], ...]]:
    """Product automaton together with the state pair behind each product state"""
    if a1.alphabet != a2.alphabet:
        raise ValidationError(
            f"alphabet mismatch: {list(a1.alphabet)} vs {list(a2.alphabet)}"
        )
    start = (a1.initial, a2.initial)
    ids = {start: 0}
    pairs = [start]
    queue = deque([start])
    rows: Dict[int, Tuple[int, ...]] = {}
    while queue:
        p, q = queue.popleft()
        row = []
        for r1, r2 in zip(a1.delta[p], a2.delta[q]):
            target = (r1, r2)
            if target not in ids:
                ids[target] = len(pairs)
                pairs.append(target)
                queue.append(target)
            row.append(ids[target])
        rows[ids[(p, q)]] = tuple(row)
    delta = tuple(rows[i] for i in range(len(pairs)))
    return Automaton(a1.alphabet, len(pairs), 0, delta), tuple(pairs)


def product(a1: Automaton, a2: Automaton) -> Automaton:
    """Componentwise product restricted to reachable state pairs"""
    return product_with_pairs(a1, a2)[0]


def product_pairs(a1: Automaton, a2: Automaton) -> Tuple[Tuple[State, State], ...]:
    """State pair of every state of ``product(a1, a2)``, indexed by product state id"""
    return product_with_pairs(a1, a2)[1]


def run_eval(a: Automaton, w: UltimatelyPeriodicWord) -> FrozenSet[State]:
    """
    Infinity set of the run of ``a`` on ``w``

    The period is applied from successive boundary states until a boundary
    state repeats; the states visited after that first repeated boundary
    are exactly the states seen infinitely often.
    """
    prefix = [a.alphabet.index(letter) for letter in w.prefix]
    period = [a.alphabet.index(letter) for letter in w.period]
    state = a.initial
    for i in prefix:
        state = a.delta[state][i]

    first_seen: Dict[State, int] = {}
    segments: List[List[State]] = []
    while state not in first_seen:
        first_seen[state] = len(segments)
        visited = []
        for i in period:
            state = a.delta[state][i]
            visited.append(state)
        segments.append(visited)

    return frozenset(q for segment in segments[first_seen[state]:] for q in segment)

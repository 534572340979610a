"""
Labeled posets with iterated labels

A label is either a base value ``i < k`` or a pointed labeled poset, so a
poset whose labels are pointed posets of base values is a two-level
iterated poset. Posets are stored by their cover (Hasse) edges.

``preceq`` decides ``u(P) <=_h u(R)`` without building the unfoldings: one
bit ``M(v1, v2)`` per node pair says whether the unfolded upper cone of v1
maps into the unfolded upper cone of v2.
"""

import logging
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .config import DEFAULT_UNFOLD_LIMIT, Config
from .errors import ParseError, SizeLimitError, ValidationError

logger = logging.getLogger(__name__)

Node = int
Edge = Tuple[Node, Node]


@dataclass(frozen=True)
class Base:
    """Base label ``value`` from the antichain ``{0, ..., k-1}``"""

    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or self.value < 0:
            raise ValidationError(f"base label must be a nonnegative integer, got {self.value!r}")

    @property
    def size(self) -> int:
        return 1

    @property
    def depth(self) -> int:
        return 0

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Nested:
    """Label that is itself a pointed labeled poset"""

    poset: "PointedPoset"

    def __post_init__(self):
        if not isinstance(self.poset, PointedPoset):
            raise ValidationError("nested labels must be pointed posets")

    @property
    def size(self) -> int:
        return self.poset.size

    @property
    def depth(self) -> int:
        return 1 + self.poset.depth


Label = Union[Base, Nested]


@dataclass(frozen=True)
class LabeledPoset:
    """
    Finite nonempty poset given by its cover edges, with one label per node

    ``edges`` go from the smaller to the larger node; they are kept sorted
    and must not contain an edge implied by transitivity.
    """

    labels: Tuple[Label, ...]
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "edges", tuple(sorted(set(map(tuple, self.edges)))))
        if not self.labels:
            raise ValidationError("a labeled poset must have at least one node")
        for label in self.labels:
            if not isinstance(label, (Base, Nested)):
                raise ValidationError(f"invalid label {label!r}")
        m = len(self.labels)
        for u, v in self.edges:
            if not (0 <= u < m and 0 <= v < m):
                raise ValidationError(f"edge ({u}, {v}) refers to a missing node")
            if u == v:
                raise ValidationError(f"edge ({u}, {v}) is a self-loop")
        self._check_order()

    def _check_order(self) -> None:
        if not nx.is_directed_acyclic_graph(self.graph):
            raise ValidationError("order relation has a cycle")
        reduced = set(nx.transitive_reduction(self.graph).edges)
        for edge in self.edges:
            if edge not in reduced:
                raise ValidationError(f"edge {edge} is implied by transitivity")

    def __hash__(self):
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash((type(self).__name__, self.labels, self.edges, getattr(self, "root", None)))
            self.__dict__["_hash"] = cached
        return cached

    def __len__(self) -> int:
        return len(self.labels)

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.labels)))
        g.add_edges_from(self.edges)
        return nx.freeze(g)

    @cached_property
    def successors(self) -> Tuple[Tuple[Node, ...], ...]:
        succ: List[List[Node]] = [[] for _ in self.labels]
        for u, v in self.edges:
            succ[u].append(v)
        return tuple(map(tuple, succ))

    @cached_property
    def predecessors(self) -> Tuple[Tuple[Node, ...], ...]:
        pred: List[List[Node]] = [[] for _ in self.labels]
        for u, v in self.edges:
            pred[v].append(u)
        return tuple(map(tuple, pred))

    @cached_property
    def minimal(self) -> Tuple[Node, ...]:
        return tuple(v for v, pred in enumerate(self.predecessors) if not pred)

    @cached_property
    def postorder(self) -> Tuple[Node, ...]:
        """Depth-first post-order: every node comes after all of its successors"""
        return tuple(nx.dfs_postorder_nodes(self.graph))

    @cached_property
    def upper_cones(self) -> Tuple[FrozenSet[Node], ...]:
        """``upper_cones[v]`` is the set of nodes ``>= v``"""
        return tuple(frozenset(nx.descendants(self.graph, v)) | {v} for v in range(len(self.labels)))

    def leq(self, u: Node, v: Node) -> bool:
        return v in self.upper_cones[u]

    @property
    def size(self) -> int:
        """Nodes plus cover edges plus the recursive size of every label"""
        return len(self.labels) + len(self.edges) + sum(label.size for label in self.labels)

    @property
    def depth(self) -> int:
        return max(label.depth for label in self.labels)

    @property
    def is_forest(self) -> bool:
        return all(len(pred) <= 1 for pred in self.predecessors)


@dataclass(frozen=True)
class PointedPoset(LabeledPoset):
    """Labeled poset whose node ``root`` is below every other node"""

    root: Node = 0

    def _check_order(self) -> None:
        super()._check_order()
        if self.minimal != (self.root,):
            raise ValidationError(f"node {self.root} is not the least element")

    __hash__ = LabeledPoset.__hash__


@dataclass(frozen=True)
class Forest(LabeledPoset):
    """Labeled poset in which every node has at most one predecessor"""

    def _check_order(self) -> None:
        if not self.is_forest:
            raise ValidationError("a forest node has more than one predecessor")
        if not nx.is_directed_acyclic_graph(self.graph):
            raise ValidationError("order relation has a cycle")

    __hash__ = LabeledPoset.__hash__


def singleton(label: Label) -> LabeledPoset:
    """One-node poset labeled ``label``"""
    return LabeledPoset((label,))


def pointed_singleton(label: Label) -> PointedPoset:
    return PointedPoset((label,), (), 0)


def disjoint_union(p1: LabeledPoset, p2: LabeledPoset) -> LabeledPoset:
    """Side-by-side union; nodes of ``p2`` are shifted past those of ``p1``"""
    shift = len(p1)
    edges = p1.edges + tuple((u + shift, v + shift) for u, v in p2.edges)
    return LabeledPoset(p1.labels + p2.labels, edges)


def normalize(labels: Sequence[Label], relation: Iterable[Edge], pointed: bool = False) -> LabeledPoset:
    """
    Turn an arbitrary acyclic order relation into cover edges

    Reflexive pairs are ignored. With ``pointed`` the result is a
    ``PointedPoset`` rooted at the unique minimal node.
    """
    g = nx.DiGraph()
    g.add_nodes_from(range(len(labels)))
    for u, v in relation:
        if not (0 <= u < len(labels) and 0 <= v < len(labels)):
            raise ValidationError(f"relation pair ({u}, {v}) refers to a missing node")
        if u != v:
            g.add_edge(u, v)
    if not nx.is_directed_acyclic_graph(g):
        raise ValidationError("order relation has a cycle")
    cover = tuple(nx.transitive_reduction(nx.transitive_closure_dag(g)).edges)
    if not pointed:
        return LabeledPoset(tuple(labels), cover)
    minimal = [v for v in g if g.in_degree(v) == 0]
    if len(minimal) != 1:
        raise ValidationError("pointed block without unique minimum")
    return PointedPoset(tuple(labels), cover, minimal[0])


def unfolding_size(p: LabeledPoset) -> int:
    """Number of cover paths starting at a minimal node"""
    paths = [0] * len(p)
    for v in reversed(p.postorder):
        paths[v] = sum(paths[u] for u in p.predecessors[v]) if p.predecessors[v] else 1
    return sum(paths)


def unfold_paths(p: LabeledPoset, limit: Optional[int] = None) -> Tuple[Forest, Tuple[Tuple[Node, ...], ...]]:
    """
    Bottom-up unfolding of ``p`` together with the path behind each node

    Node ``i`` of the forest is the path ``paths[i]`` of ``p``; it is ordered
    below its extensions and carries the label of its endpoint. Labels are
    copied, not unfolded.
    """
    limit = DEFAULT_UNFOLD_LIMIT if limit is None else limit
    total = unfolding_size(p)
    if total > limit:
        raise SizeLimitError(f"unfolding has {total} nodes, limit is {limit}")
    labels: List[Label] = []
    edges: List[Edge] = []
    paths: List[Tuple[Node, ...]] = []
    stack: List[Tuple[Tuple[Node, ...], Optional[int]]] = [((v,), None) for v in reversed(p.minimal)]
    while stack:
        path, parent = stack.pop()
        node = len(paths)
        paths.append(path)
        labels.append(p.labels[path[-1]])
        if parent is not None:
            edges.append((parent, node))
        for u in reversed(p.successors[path[-1]]):
            stack.append((path + (u,), node))
    logger.debug("unfolded %d nodes into %d", len(p), len(paths))
    return Forest(tuple(labels), tuple(edges)), tuple(paths)


def unfold(p: LabeledPoset, limit: Optional[int] = None) -> Forest:
    """Forest of cover paths of ``p`` ordered by prefix"""
    return unfold_paths(p, limit)[0]


def _as_pointed(label: Label) -> PointedPoset:
    return label.poset if isinstance(label, Nested) else pointed_singleton(label)


def _label_classes(p: LabeledPoset) -> Tuple[List[Label], List[int]]:
    classes: Dict[Label, int] = {}
    index = [classes.setdefault(label, len(classes)) for label in p.labels]
    return list(classes), index


class PosetComparator:
    """
    Decides ``preceq`` and ``label_leq`` with one shared memo table

    A comparator belongs to one top-level comparison; every label pair is
    compared at most once however deep it is nested.
    """

    def __init__(self):
        self._memo: Dict[Tuple[Label, Label], bool] = {}
        self.cells = 0
        self.label_comparisons = 0

    @property
    def memo_size(self) -> int:
        return len(self._memo)

    def label_leq(self, l1: Label, l2: Label) -> bool:
        key = (l1, l2)
        result = self._memo.get(key)
        if result is None:
            self.label_comparisons += 1
            if isinstance(l1, Base) and isinstance(l2, Base):
                result = l1.value == l2.value
            else:
                result = self.preceq(_as_pointed(l1), _as_pointed(l2))
            self._memo[key] = result
        return result

    def preceq(self, p1: LabeledPoset, p2: LabeledPoset) -> bool:
        classes1, index1 = _label_classes(p1)
        classes2, index2 = _label_classes(p2)
        label_table: List[List[Optional[bool]]] = [[None] * len(classes2) for _ in classes1]
        succ1, succ2 = p1.successors, p2.successors
        order2 = p2.postorder
        rows: List[Optional[bytearray]] = [None] * len(p1)

        for v1 in p1.postorder:
            row = bytearray(len(p2))
            below = [rows[u1] for u1 in succ1[v1]]
            c1 = classes1[index1[v1]]
            known = label_table[index1[v1]]
            for v2 in order2:
                self.cells += 1
                hit = False
                for u2 in succ2[v2]:
                    if row[u2]:
                        hit = True
                        break
                if not hit and all(r[v2] for r in below):
                    j = index2[v2]
                    ok = known[j]
                    if ok is None:
                        ok = known[j] = self.label_leq(c1, classes2[j])
                    hit = ok
                if hit:
                    row[v2] = 1
            rows[v1] = row

        return all(any(row) for row in rows)


def preceq(p1: LabeledPoset, p2: LabeledPoset) -> bool:
    """Whether ``u(p1) <=_h u(p2)``"""
    return PosetComparator().preceq(p1, p2)


def label_leq(l1: Label, l2: Label) -> bool:
    """Label order: equality on base values, ``preceq`` once a poset is involved"""
    return PosetComparator().label_leq(l1, l2)


def h_leq_bruteforce(
    p1: LabeledPoset,
    p2: LabeledPoset,
    limit: Optional[int] = None,
    comparator: Optional[PosetComparator] = None,
) -> bool:
    """
    Whether some monotone map ``p1 -> p2`` never decreases labels

    Exhaustive search over maps, node by node in topological order; the
    connected components of ``p1`` are searched independently since no
    monotonicity constraint crosses them. Candidate images are first pruned
    to arc consistency along the cover edges of ``p1``, which removes only
    images that no morphism uses.
    """
    limit = Config().bruteforce_poset_limit if limit is None else limit
    if len(p1) > limit or len(p2) > limit:
        raise SizeLimitError(f"brute-force morphism search limited to {limit} nodes, got {len(p1)} and {len(p2)}")
    comparator = comparator or PosetComparator()
    domains = [
        [y for y in range(len(p2)) if comparator.label_leq(p1.labels[x], p2.labels[y])]
        for x in range(len(p1))
    ]

    up2 = p2.upper_cones
    changed = True
    while changed and all(domains):
        changed = False
        for lower, upper in p1.edges:
            kept_lower = [y for y in domains[lower] if any(z in up2[y] for z in domains[upper])]
            kept_upper = [z for z in domains[upper] if any(z in up2[y] for y in kept_lower)]
            if len(kept_lower) != len(domains[lower]) or len(kept_upper) != len(domains[upper]):
                domains[lower], domains[upper] = kept_lower, kept_upper
                changed = True
    if not all(domains):
        return False

    pred1 = p1.predecessors
    image: Dict[Node, Node] = {}

    def extend(order: List[Node], i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for y in domains[x]:
            if all(y in up2[image[z]] for z in pred1[x]):
                image[x] = y
                if extend(order, i + 1):
                    return True
                del image[x]
        return False

    for component in nx.weakly_connected_components(p1.graph):
        order = list(nx.topological_sort(p1.graph.subgraph(component)))
        if not extend(order, 0):
            return False
    return True


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


class _PosetParser:
    """Recursive-descent reader for ``(poset ...)`` s-expressions"""

    def __init__(self, text: str):
        self.tokens: List[Tuple[str, int]] = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split(";", 1)[0]
            self.tokens.extend((tok, lineno) for tok in _TOKEN.findall(line))
        self.pos = 0

    def _line(self) -> Optional[int]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return self.tokens[-1][1] if self.tokens else None

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of input", self._line())
        tok = self.tokens[self.pos][0]
        self.pos += 1
        return tok

    def expect(self, expected: str) -> None:
        line = self._line()
        tok = self.take()
        if tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}", line)

    def block(self, keyword: str) -> LabeledPoset:
        start = self._line()
        self.expect("(")
        self.expect(keyword)
        ids: Dict[str, int] = {}
        labels: List[Label] = []
        relation: List[Tuple[str, str, Optional[int]]] = []
        while self.peek() == "(":
            line = self._line()
            self.take()
            kind = self.take()
            if kind == "node":
                name = self.take()
                if name in ("(", ")"):
                    raise ParseError("node id expected", line)
                if name in ids:
                    raise ParseError(f"duplicate node id {name}", line)
                ids[name] = len(labels)
                labels.append(self.label())
                self.expect(")")
            elif kind == "edge":
                lower, upper = self.take(), self.take()
                relation.append((lower, upper, line))
                self.expect(")")
            else:
                raise ParseError(f"unknown item {kind!r} in {keyword} block", line)
        self.expect(")")

        pairs = []
        for lower, upper, line in relation:
            for name in (lower, upper):
                if name not in ids:
                    raise ParseError(f"dangling node id {name}", line)
            pairs.append((ids[lower], ids[upper]))
        if not labels:
            raise ParseError(f"{keyword} block has no nodes", start)
        try:
            return normalize(labels, pairs, pointed=keyword == "pointed")
        except ValidationError as e:
            raise ParseError(str(e), start) from None

    def label(self) -> Label:
        if self.peek() == "(":
            return Nested(self.block("pointed"))
        line = self._line()
        tok = self.take()
        try:
            value = int(tok)
        except ValueError:
            raise ParseError(f"label must be an integer or a pointed block, got {tok!r}", line) from None
        if value < 0:
            raise ParseError(f"negative label {value}", line)
        return Base(value)


def parse_poset(text: str) -> LabeledPoset:
    """Parse a ``(poset ...)`` block; ``;`` starts a comment"""
    parser = _PosetParser(text)
    poset = parser.block("poset")
    if parser.peek() is not None:
        raise ParseError(f"trailing input {parser.peek()!r}", parser._line())
    return poset


def _format_label(label: Label) -> str:
    if isinstance(label, Base):
        return str(label.value)
    return _format_block("pointed", label.poset, multiline=False)


def _format_block(keyword: str, p: LabeledPoset, multiline: bool) -> str:
    items = [f"(node {v} {_format_label(label)})" for v, label in enumerate(p.labels)]
    items += [f"(edge {u} {v})" for u, v in p.edges]
    if multiline:
        return f"({keyword}\n" + "\n".join("  " + item for item in items) + ")"
    return f"({keyword} " + " ".join(items) + ")"


def format_poset(p: LabeledPoset) -> str:
    """Serialize to the poset grammar, one top-level item per line"""
    return _format_block("poset", p, multiline=True) + "\n"

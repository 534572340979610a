"""
Seeded generators and scaling benchmarks

Every generator draws from ``SplitMix64``, so fixtures are a pure function
of the seed and the configuration:

    state  <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z      <- state
    z      <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z      <- (z xor (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output <- z xor (z >> 31)

``below(n)`` is ``output mod n``, ``random()`` is ``(output >> 11) / 2^53``
and ``split()`` seeds a fresh generator with the next output.
"""

import csv
import gc
import io
import logging
import statistics
import time
from dataclasses import dataclass, replace
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .automaton import Alphabet, Automaton
from .config import DEFAULT_BENCH_REPETITIONS
from .cycles import all_cycles
from .errors import ValidationError
from .poset import Base, Forest, Label, LabeledPoset, Nested, PointedPoset, normalize, preceq
from .wadge import MullerKAcceptor

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """Counter-based 64-bit generator with a documented output function"""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n < 1:
            raise ValueError("below() needs a positive bound")
        return self.next_u64() % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range ``[lo, hi]``"""
        return lo + self.below(hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())


@dataclass(frozen=True)
class GenConfig:
    """
    Generator settings

    ``depth`` counts label nesting: 0 gives base labels, 1 gives pointed
    posets of base labels (the shape of acceptor invariants), 2 nests once
    more. Ranges are closed ``(lo, hi)`` pairs.
    """

    seed: int = 0
    n_states: Tuple[int, int] = (1, 5)
    n_nodes: Tuple[int, int] = (1, 7)
    alphabet_size: int = 2
    k: int = 2
    depth: int = 0
    edge_probability: float = 0.3
    root_probability: float = 0.2

    def __post_init__(self):
        for name in ("n_states", "n_nodes"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise ValidationError(f"{name} range {lo}..{hi} is empty")
        if self.alphabet_size < 1 or self.k < 1:
            raise ValidationError("alphabet size and k must be positive")
        if not 0 <= self.depth <= 2:
            raise ValidationError(f"depth must be 0, 1 or 2, got {self.depth}")
        for name in ("edge_probability", "root_probability"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1]")

    def with_seed(self, seed: int) -> "GenConfig":
        return replace(self, seed=seed)


def _rng(cfg: GenConfig, rng: Optional[SplitMix64]) -> SplitMix64:
    return rng if rng is not None else SplitMix64(cfg.seed)


def letters(size: int) -> Tuple[str, ...]:
    """Default letter names ``a, b, c, ...`` (``x26, x27, ...`` past z)"""
    return tuple(chr(ord("a") + i) if i < 26 else f"x{i}" for i in range(size))


def gen_automaton(cfg: GenConfig, rng: Optional[SplitMix64] = None) -> Automaton:
    """Complete automaton with uniformly drawn transitions; state 0 is initial"""
    rng = _rng(cfg, rng)
    n = rng.between(*cfg.n_states)
    d = cfg.alphabet_size
    delta = tuple(tuple(rng.below(n) for _ in range(d)) for _ in range(n))
    return Automaton(Alphabet(letters(d)), n, 0, delta)


def gen_acceptor(cfg: GenConfig, rng: Optional[SplitMix64] = None) -> MullerKAcceptor:
    """Random automaton with every cycle labeled uniformly in ``0..k-1``"""
    rng = _rng(cfg, rng)
    automaton = gen_automaton(cfg, rng)
    labeling = {cycle: rng.below(cfg.k) for cycle in all_cycles(automaton)}
    return MullerKAcceptor(automaton, cfg.k, labeling)


def _gen_label(cfg: GenConfig, rng: SplitMix64, depth: int) -> Label:
    if depth == 0:
        return Base(rng.below(cfg.k))
    return Nested(gen_pointed(replace(cfg, depth=depth - 1), rng))


def _random_relation(cfg: GenConfig, rng: SplitMix64, m: int, first: int = 0) -> List[Tuple[int, int]]:
    return [
        (i, j)
        for i in range(first, m)
        for j in range(i + 1, m)
        if rng.random() < cfg.edge_probability
    ]


def gen_poset(cfg: GenConfig, rng: Optional[SplitMix64] = None) -> LabeledPoset:
    """Random DAG on ``n_nodes`` nodes, normalized, with labels of the configured depth"""
    rng = _rng(cfg, rng)
    m = rng.between(*cfg.n_nodes)
    labels = [_gen_label(cfg, rng, cfg.depth) for _ in range(m)]
    return normalize(labels, _random_relation(cfg, rng, m))


def gen_pointed(cfg: GenConfig, rng: Optional[SplitMix64] = None) -> PointedPoset:
    """Random pointed poset: node 0 is placed below a random DAG on the other nodes"""
    rng = _rng(cfg, rng)
    m = rng.between(*cfg.n_nodes)
    labels = [_gen_label(cfg, rng, cfg.depth) for _ in range(m)]
    relation = [(0, j) for j in range(1, m)] + _random_relation(cfg, rng, m, first=1)
    return normalize(labels, relation, pointed=True)


def gen_forest(cfg: GenConfig, rng: Optional[SplitMix64] = None) -> Forest:
    """Random forest: each node after the first hangs below an earlier node or starts a new tree"""
    rng = _rng(cfg, rng)
    m = rng.between(*cfg.n_nodes)
    labels = [_gen_label(cfg, rng, cfg.depth) for _ in range(m)]
    edges = []
    for v in range(1, m):
        if rng.random() >= cfg.root_probability:
            edges.append((rng.below(v), v))
    return Forest(tuple(labels), tuple(edges))


def samples(cfg: GenConfig, count: int, generator) -> Iterator:
    """``count`` independent objects from one seeded stream"""
    rng = SplitMix64(cfg.seed)
    for _ in range(count):
        yield generator(cfg, rng.split())


FAMILIES = ("chain", "antichain", "random")


def family_poset(family: str, size: int, rng: SplitMix64, k: int = 2) -> LabeledPoset:
    """Poset of ``size`` nodes from a benchmark family, base labels below ``k``"""
    labels = tuple(Base(rng.below(k)) for _ in range(size))
    if family == "chain":
        return LabeledPoset(labels, tuple((i, i + 1) for i in range(size - 1)))
    if family == "antichain":
        return LabeledPoset(labels)
    if family == "random":
        # at most one forward edge per node keeps normalization cheap at benchmark sizes
        relation = []
        for i in range(size):
            j = i + 1 + rng.below(8)
            if j < size and rng.below(2):
                relation.append((i, j))
        return normalize(labels, relation)
    raise ValidationError(f"unknown benchmark family {family!r}")


class TimingRow(NamedTuple):
    family: str
    size: int
    median_ns: int


def scaling_run(
    family: str,
    sizes: Sequence[int],
    repetitions: int = DEFAULT_BENCH_REPETITIONS,
    seed: int = 0,
) -> List[TimingRow]:
    """Median wall-clock time of ``preceq`` on same-size pairs, per size"""
    if list(sizes) != sorted(sizes):
        raise ValidationError("benchmark sizes must be ascending")
    if repetitions < 1:
        raise ValidationError("at least one repetition is needed")
    rng = SplitMix64(seed)
    rows = []
    for size in sizes:
        p1 = family_poset(family, size, rng)
        p2 = family_poset(family, size, rng)
        # cached successor lists and DFS orders are built outside the timed region
        for p in (p1, p2):
            _ = (p.successors, p.postorder)
        preceq(p1, p2)
        timings = []
        gc_was_enabled = gc.isenabled()
        gc.disable()
        try:
            for _ in range(repetitions):
                start = time.perf_counter_ns()
                preceq(p1, p2)
                timings.append(time.perf_counter_ns() - start)
        finally:
            if gc_was_enabled:
                gc.enable()
        median = int(statistics.median(timings))
        logger.info("%s n=%d median %.3f ms", family, size, median / 1e6)
        rows.append(TimingRow(family, size, median))
    return rows


def timing_csv(rows: Sequence[TimingRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TimingRow._fields)
    writer.writerows(rows)
    return out.getvalue()

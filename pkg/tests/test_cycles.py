"""
Tests for cycle sets, the brute-force oracle and labeling conversion
"""

import itertools
import logging
import os
from unittest.mock import patch

import pytest

from wadgekit.automaton import tarjan_scc
from wadgekit.config import CONFIG_DIR_ENV
from wadgekit.cycles import (
    Cycle,
    CycleSet,
    ElementaryCycle,
    IntersectionGraph,
    all_cycles,
    all_cycles_bruteforce,
    cycle_count_bound,
    cycle_list_to_cycles,
    elementary_cycles,
    is_cycle,
    subset_table_to_cycles,
)
from wadgekit.errors import LabelingError, SizeLimitError, ValidationError
from wadgekit.harness import GenConfig, gen_automaton, samples

from tests.fixtures import automaton


def cycles_of(*groups):
    return CycleSet.of(Cycle(g) for g in groups)


class TestCycle:
    """Test the cycle value type"""

    def test_must_be_increasing(self):
        """Test ids are strictly increasing"""
        with pytest.raises(ValidationError):
            Cycle((1, 0))

    def test_must_be_nonempty(self):
        """Test the empty set is not a cycle"""
        with pytest.raises(ValidationError):
            Cycle(())

    def test_bits(self):
        """Test the subset-table encoding puts state 0 leftmost"""
        assert Cycle((0,)).bits(2) == "10"
        assert Cycle((1,)).bits(2) == "01"
        assert Cycle((0, 1)).bits(2) == "11"
        assert Cycle.from_bits("01") == Cycle((1,))

    def test_mask(self):
        """Test bitmask conversion both ways"""
        assert Cycle((0, 2)).mask == 0b101
        assert Cycle.from_mask(0b110) == Cycle((1, 2))

    def test_superset(self):
        """Test set inclusion"""
        assert Cycle((0, 1)).issuperset(Cycle((1,)))
        assert not Cycle((1,)).issuperset(Cycle((0, 1)))

    def test_str(self):
        """Test the printed form"""
        assert str(Cycle((0, 3))) == "{0,3}"

    def test_elementary_rotation(self):
        """Test elementary cycles start at their smallest state"""
        assert ElementaryCycle.canonical([2, 0, 1]).vertices == (0, 1, 2)


class TestAllCycles:
    """Test the elementary-cycle merging search"""

    def test_one_state(self, one_state):
        """Test a single self-loop"""
        assert all_cycles(one_state) == cycles_of((0,))

    def test_e2(self, e2):
        """Test both loops and their union"""
        assert all_cycles(e2) == cycles_of((0,), (1,), (0, 1))

    def test_eoc(self, eoc):
        """Test states in different SCCs never share a cycle"""
        assert all_cycles(eoc) == cycles_of((0,), (1,))

    def test_chain(self, chain3):
        """Test transient states belong to no cycle"""
        assert all_cycles(chain3) == cycles_of((2,))

    def test_unreachable_ignored(self, e2_unreachable):
        """Test loops on unreachable states are not cycles"""
        assert all_cycles(e2_unreachable) == cycles_of((0,), (1,), (0, 1))

    def test_complete_graph(self):
        """Test every nonempty subset of a complete digraph with loops"""
        a = automaton("abc", [(0, 1, 2)] * 3)
        assert len(all_cycles(a)) == 7

    def test_ring_without_loops(self):
        """Test a ring has exactly one cycle"""
        a = automaton("a", [(1,), (2,), (0,)])
        assert all_cycles(a) == cycles_of((0, 1, 2))

    def test_elementary_cycles_e2(self, e2):
        """Test elementary cycles come sorted by length"""
        assert [c.vertices for c in elementary_cycles(e2)] == [(0,), (1,), (0, 1)]

    def test_intersection_graph(self, e2):
        """Test the two loops each meet the 2-cycle but not each other"""
        graph = IntersectionGraph.build(elementary_cycles(e2))
        assert sorted(graph.edges()) == [(0, 2), (1, 2)]

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_agrees_with_bruteforce(self, seed):
        """Test the merging search against the subset oracle"""
        for d in (1, 2, 3):
            cfg = GenConfig(seed=seed * 10 + d, n_states=(1, 8), alphabet_size=d)
            for a in samples(cfg, 20, gen_automaton):
                assert all_cycles(a) == all_cycles_bruteforce(a)

    def test_members_are_cycles(self):
        """Test every reported set passes the direct cycle test"""
        for a in samples(GenConfig(seed=8, n_states=(2, 9), alphabet_size=2), 20, gen_automaton):
            assert all(is_cycle(a, c) for c in all_cycles(a))

    def test_union_of_overlapping_cycles(self):
        """Test two cycles sharing a state have their union in the set"""
        cfg = GenConfig(seed=41, n_states=(2, 8), alphabet_size=2)
        for a in samples(cfg, 50, gen_automaton):
            cycles = all_cycles(a)
            for c1, c2 in itertools.combinations(cycles, 2):
                if c1.mask & c2.mask:
                    assert Cycle.from_mask(c1.mask | c2.mask) in cycles

    def test_nontrivial_sccs_are_cycles(self):
        """Test every reachable SCC carrying an edge is the largest cycle it holds"""
        cfg = GenConfig(seed=42, n_states=(1, 9), alphabet_size=2)
        for a in samples(cfg, 50, gen_automaton):
            cycles = all_cycles(a)
            for comp in tarjan_scc(a).components:
                if len(comp) > 1 or a.reachable_graph.has_edge(comp[0], comp[0]):
                    assert Cycle(comp) in cycles
                    assert all(Cycle(comp).issuperset(c) for c in cycles if c.states[0] in comp)


class TestBruteforce:
    """Test the subset oracle"""

    def test_limit(self, tmp_path):
        """Test the default state guard"""
        a = automaton("a", [((q + 1) % 21,) for q in range(21)])
        with patch.dict(os.environ, {CONFIG_DIR_ENV: str(tmp_path)}):
            with pytest.raises(SizeLimitError):
                all_cycles_bruteforce(a)

    def test_limit_override(self, e2):
        """Test a smaller explicit limit"""
        with pytest.raises(SizeLimitError):
            all_cycles_bruteforce(e2, limit=1)

    def test_is_cycle(self, eoc):
        """Test sets spanning two SCCs are rejected"""
        assert is_cycle(eoc, {0})
        assert not is_cycle(eoc, {0, 1})
        assert not is_cycle(eoc, set())


class TestBound:
    """Test the counting bound"""

    def test_one_letter(self):
        """Test the small values"""
        assert cycle_count_bound(1, 1) == pytest.approx(2.7320508, rel=1e-6)
        assert cycle_count_bound(1, 3) == 8

    def test_two_states(self):
        """Test the maximum of both terms is returned"""
        assert cycle_count_bound(2, 2) == pytest.approx(5.6593, rel=1e-4)

    def test_invalid(self):
        """Test arguments must be positive"""
        with pytest.raises(ValidationError):
            cycle_count_bound(0, 2)

    def test_bounds_random_automata(self):
        """Test the bound holds on random automata"""
        for d in (1, 2, 3):
            for a in samples(GenConfig(seed=d, n_states=(1, 10), alphabet_size=d), 30, gen_automaton):
                assert len(all_cycles(a)) <= cycle_count_bound(a.n_states, d)


class TestLabelings:
    """Test conversion of subset tables and cycle lists"""

    def test_subset_table(self, e2):
        """Test the all-zero row and non-cycle rows are dropped"""
        table = {"00": 1, "10": 0, "01": 1, "11": 0}
        labels = subset_table_to_cycles(e2, table)
        assert labels == {Cycle((0,)): 0, Cycle((1,)): 1, Cycle((0, 1)): 0}

    def test_subset_table_warns(self, eoc, caplog):
        """Test non-cycles are dropped with one warning"""
        with caplog.at_level(logging.WARNING, logger="wadgekit.cycles"):
            labels = subset_table_to_cycles(eoc, {"10": 0, "01": 1, "11": 1})
        assert labels == {Cycle((0,)): 0, Cycle((1,)): 1}
        assert "not cycles" in caplog.text

    def test_subset_table_strict(self, e2):
        """Test strict mode wants every subset"""
        with pytest.raises(LabelingError):
            subset_table_to_cycles(e2, {"10": 0, "01": 1, "11": 0}, strict=True)

    def test_missing_cycle(self, e2):
        """Test every cycle needs a label"""
        with pytest.raises(LabelingError, match="unlabeled cycle"):
            cycle_list_to_cycles(e2, {(0,): 0, (1,): 1})

    def test_cycle_list(self, eoc):
        """Test labels come back in canonical order"""
        labels = cycle_list_to_cycles(eoc, {(1,): 0, (0,): 1})
        assert list(labels.items()) == [(Cycle((0,)), 1), (Cycle((1,)), 0)]

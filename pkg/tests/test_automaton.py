"""
Tests for automata: parsing, reachability, SCCs, products and runs
"""

import pytest

from wadgekit.automaton import (
    Alphabet,
    Automaton,
    UltimatelyPeriodicWord,
    format_automaton,
    parse_automaton,
    product,
    product_pairs,
    product_with_pairs,
    reachability_matrix,
    reachable_states,
    run_eval,
    tarjan_scc,
)
from wadgekit.errors import ParseError, ValidationError
from wadgekit.harness import GenConfig, SplitMix64, gen_automaton, samples

from tests.fixtures import E2_TEXT, EOC_TEXT


def random_word(rng, alphabet, max_prefix=4, max_period=4):
    prefix = tuple(rng.below(len(alphabet)) for _ in range(rng.below(max_prefix + 1)))
    period = tuple(rng.below(len(alphabet)) for _ in range(1 + rng.below(max_period)))
    return UltimatelyPeriodicWord(
        tuple(alphabet.letters[i] for i in prefix),
        tuple(alphabet.letters[i] for i in period),
    )


class TestParse:
    """Test the automaton file format"""

    def test_one_state(self):
        """Test the smallest valid automaton"""
        a, labeling = parse_automaton("alphabet: a\nstates: 1\ninitial: 0\ntrans: 0 a 0\n")
        assert a.n_states == 1
        assert a.initial == 0
        assert labeling is None

    def test_e2(self, e2):
        """Test the two-state fixture parses to the hand-built automaton"""
        a, _ = parse_automaton(E2_TEXT)
        assert a == e2
        assert a.step(0, "a") == 1
        assert a.step(1, "b") == 0

    def test_round_trip(self):
        """Test serialization reproduces a parseable canonical text"""
        a, _ = parse_automaton(E2_TEXT)
        text = format_automaton(a)
        assert text.splitlines()[:3] == ["alphabet: a b", "states: 2", "initial: 0"]
        assert text.splitlines()[3:] == ["trans: 0 a 1", "trans: 0 b 0", "trans: 1 a 1", "trans: 1 b 0"]
        assert parse_automaton(text).automaton == a

    def test_eoc(self, eoc):
        """Test the absorbing fixture parses to the hand-built automaton"""
        assert parse_automaton(EOC_TEXT).automaton == eoc

    def test_transitions_in_any_order(self):
        """Test transition lines may come in any order"""
        shuffled = "alphabet: a b\nstates: 2\ninitial: 0\ntrans: 1 b 0\ntrans: 0 a 1\ntrans: 1 a 1\ntrans: 0 b 0\n"
        assert parse_automaton(shuffled).automaton == parse_automaton(E2_TEXT).automaton

    def test_duplicate_transition(self):
        """Test a repeated transition is reported with its line"""
        with pytest.raises(ParseError, match="duplicate transition") as info:
            parse_automaton(E2_TEXT + "trans: 0 a 1\n")
        assert info.value.line == 10

    def test_missing_transition(self):
        """Test totality is enforced"""
        text = "\n".join(line for line in E2_TEXT.splitlines() if line != "trans: 1 b 0")
        with pytest.raises(ParseError, match="missing transition"):
            parse_automaton(text)

    @pytest.mark.parametrize("line, message", [
        ("trans: 0 c 1", "unknown letter"),
        ("trans: 0 a 7", "unknown state id"),
        ("trans: 0 a", "expected 'trans"),
        ("this is not a line", "malformed line"),
        ("colour: red", "unknown section"),
    ])
    def test_malformed_lines(self, line, message):
        """Test malformed content is rejected with a line number"""
        with pytest.raises(ParseError, match=message) as info:
            parse_automaton(E2_TEXT + line + "\n")
        assert info.value.line == 10

    def test_initial_out_of_range(self):
        """Test an initial state outside the state range"""
        with pytest.raises(ParseError, match="unknown state id"):
            parse_automaton(E2_TEXT.replace("initial: 0", "initial: 5"))

    def test_cycle_section(self):
        """Test the compact cycle-list section is returned alongside"""
        _, labeling = parse_automaton(E2_TEXT + "k: 2\ncycle: 0 -> 0\ncycle: 1 -> 1\ncycle: 0 1 -> 0\n")
        assert labeling.k == 2
        assert labeling.kind == "cycle"
        assert [(key, label) for key, label, _ in labeling.entries] == [((0,), 0), ((1,), 1), ((0, 1), 0)]

    def test_subset_section(self):
        """Test the subset-table section is returned alongside"""
        _, labeling = parse_automaton(E2_TEXT + "k: 2\nsubset: 10 -> 0\nsubset: 11 -> 1\n")
        assert labeling.kind == "subset"
        assert [key for key, _, _ in labeling.entries] == ["10", "11"]

    @pytest.mark.parametrize("section, message", [
        ("cycle: 0 -> 0\n", "'k:' must precede"),
        ("k: 2\ncycle: 1 0 -> 0\n", "strictly increasing"),
        ("k: 2\ncycle: 0 -> 2\n", "out of range"),
        ("k: 2\ncycle: 0 -> 0\nsubset: 11 -> 1\n", "cannot be mixed"),
        ("k: 2\nsubset: 101 -> 1\n", "bit string"),
        ("k: 2\ncycle: 0 -> 0\ncycle: 0 -> 1\n", "duplicate cycle"),
    ])
    def test_bad_labeling_sections(self, section, message):
        """Test labeling section errors"""
        with pytest.raises(ParseError, match=message):
            parse_automaton(E2_TEXT + section)


class TestTypes:
    """Test construction invariants"""

    def test_alphabet_rejects_duplicates(self):
        """Test alphabet letters are distinct"""
        with pytest.raises(ValidationError):
            Alphabet(("a", "a"))

    def test_alphabet_rejects_empty(self):
        """Test alphabet is nonempty"""
        with pytest.raises(ValidationError):
            Alphabet(())

    def test_automaton_totality(self):
        """Test every state needs one transition per letter"""
        with pytest.raises(ValidationError):
            Automaton(Alphabet(("a", "b")), 1, 0, ((0,),))

    def test_empty_period(self):
        """Test the period must be nonempty"""
        with pytest.raises(ValidationError):
            UltimatelyPeriodicWord(("a",), ())

    def test_word_from_text(self, e2):
        """Test command-line words split into letters"""
        word = UltimatelyPeriodicWord.from_text("", "ab", e2.alphabet)
        assert word == UltimatelyPeriodicWord((), ("a", "b"))
        assert UltimatelyPeriodicWord.from_text("b a", "a", e2.alphabet).prefix == ("b", "a")


class TestReachability:
    """Test reachability and SCC analysis"""

    def test_reachable_states(self, one_state, e2, e2_unreachable):
        """Test reachable states of the fixtures"""
        assert reachable_states(one_state) == {0}
        assert reachable_states(e2) == {0, 1}
        assert reachable_states(e2_unreachable) == {0, 1}

    def test_matrix_one_state(self, one_state):
        """Test reflexivity on the one-state automaton"""
        assert reachability_matrix(one_state) == {0: {0}}

    def test_matrix_e2(self, e2):
        """Test both states of E2 reach each other"""
        reach = reachability_matrix(e2)
        assert all(q in reach[p] for p in (0, 1) for q in (0, 1))

    def test_matrix_chain(self, chain3):
        """Test a chain has no back edges"""
        reach = reachability_matrix(chain3)
        assert 2 in reach[0]
        assert 0 not in reach[2]

    def test_matrix_agrees_with_reachable_states(self):
        """Test the matrix row of each state matches a search from it"""
        for a in samples(GenConfig(seed=3, n_states=(1, 7)), 30, gen_automaton):
            reach = reachability_matrix(a)
            assert reach[a.initial] == reachable_states(a)
            for p in range(a.n_states):
                shifted = Automaton(a.alphabet, a.n_states, p, a.delta)
                assert reach[p] == reachable_states(shifted)

    def test_scc_e2(self, e2):
        """Test E2 is one SCC"""
        assert tarjan_scc(e2).components == ((0, 1),)

    def test_scc_eoc(self, eoc):
        """Test the absorbing state forms its own SCC above the other"""
        scc = tarjan_scc(eoc)
        assert scc.components == ((0,), (1,))
        assert scc.precedes(0, 1)
        assert not scc.precedes(1, 0)

    def test_scc_one_state(self, one_state):
        """Test the one-state automaton"""
        assert tarjan_scc(one_state).components == ((0,),)

    def test_scc_ignores_unreachable(self, e2_unreachable):
        """Test unreachable states are left out"""
        assert tarjan_scc(e2_unreachable).components == ((0, 1),)

    def test_scc_matches_mutual_reachability(self):
        """Test p, q share an SCC iff each reaches the other"""
        for a in samples(GenConfig(seed=5, n_states=(1, 8), alphabet_size=2), 30, gen_automaton):
            scc = tarjan_scc(a)
            reach = reachability_matrix(a)
            for p in a.reachable:
                for q in a.reachable:
                    same = scc.component_of(p) == scc.component_of(q)
                    assert same == (q in reach[p] and p in reach[q])


class TestProduct:
    """Test the product construction"""

    def test_product_with_itself(self, e2_unreachable):
        """Test the product of A with A is its reachable diagonal"""
        prod = product(e2_unreachable, e2_unreachable)
        assert prod.n_states == len(reachable_states(e2_unreachable))
        assert all(p == q for p, q in product_pairs(e2_unreachable, e2_unreachable))

    def test_product_unit(self, e2):
        """Test the one-state automaton is a unit"""
        one = Automaton(e2.alphabet, 1, 0, ((0, 0),))
        assert product(e2, one) == e2

    def test_product_e2_eoc(self, e2, eoc):
        """Test the product of E2 and EOC has at most four states"""
        prod = product(e2, eoc)
        assert prod.n_states <= 4
        assert product_pairs(e2, eoc)[prod.initial] == (0, 0)

    def test_product_with_pairs(self, e2, eoc):
        """Test one build yields both the automaton and its state pairs"""
        prod, pairs = product_with_pairs(e2, eoc)
        assert prod == product(e2, eoc)
        assert pairs == product_pairs(e2, eoc)
        assert len(pairs) == prod.n_states

    def test_alphabet_mismatch(self, e2, one_state):
        """Test products need equal alphabets"""
        with pytest.raises(ValidationError, match="alphabet mismatch"):
            product(e2, one_state)

    def test_projection_property(self):
        """Test infinity sets of the product project onto the factors"""
        cfg = GenConfig(seed=11, n_states=(1, 5))
        rng = SplitMix64(99)
        for _ in range(20):
            a1, a2 = gen_automaton(cfg, rng.split()), gen_automaton(cfg, rng.split())
            prod, pairs = product(a1, a2), product_pairs(a1, a2)
            for _ in range(10):
                w = random_word(rng, a1.alphabet)
                inf = run_eval(prod, w)
                assert {pairs[q][0] for q in inf} == run_eval(a1, w)
                assert {pairs[q][1] for q in inf} == run_eval(a2, w)


class TestRunEval:
    """Test runs on ultimately periodic words"""

    def test_one_state(self, one_state):
        """Test the only state is visited forever"""
        assert run_eval(one_state, UltimatelyPeriodicWord((), ("a",))) == {0}

    def test_e2_prefix(self, e2):
        """Test prefix b then a-loop settles in state 1"""
        assert run_eval(e2, UltimatelyPeriodicWord(("b",), ("a",))) == {1}

    def test_e2_alternating(self, e2):
        """Test period ab alternates between both states"""
        assert run_eval(e2, UltimatelyPeriodicWord((), ("a", "b"))) == {0, 1}

    def test_eoc_escapes(self, eoc):
        """Test a single b moves EOC into its absorbing state"""
        assert run_eval(eoc, UltimatelyPeriodicWord(("a", "a"), ("b", "a"))) == {1}

    def test_unknown_letter(self, e2):
        """Test letters outside the alphabet"""
        with pytest.raises(ValidationError, match="not in alphabet"):
            run_eval(e2, UltimatelyPeriodicWord((), ("c",)))

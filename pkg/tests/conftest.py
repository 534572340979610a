"""
Shared fixtures: small hand-built automata, acceptors and posets
"""

import pytest

from wadgekit.cycles import Cycle
from wadgekit.poset import parse_poset
from wadgekit.wadge import MullerKAcceptor

from tests.fixtures import DIAMOND_TEXT, automaton


@pytest.fixture
def one_state():
    return automaton("a", [(0,)])


@pytest.fixture
def e2():
    return automaton("ab", [(1, 0), (1, 0)])


@pytest.fixture
def eoc():
    return automaton("ab", [(0, 1), (1, 1)])


@pytest.fixture
def e2_unreachable():
    """E2 plus a self-looping state 2 that nothing enters"""
    return automaton("ab", [(1, 0), (1, 0), (2, 2)])


@pytest.fixture
def chain3():
    """0 -> 1 -> 2 with 2 absorbing"""
    return automaton("ab", [(1, 1), (2, 2), (2, 2)])


@pytest.fixture
def two_sinks():
    """0 branches to the absorbing states 1 and 2"""
    return automaton("ab", [(1, 2), (1, 1), (2, 2)])


@pytest.fixture
def e2_acceptor(e2):
    return MullerKAcceptor(e2, 2, {Cycle((0,)): 0, Cycle((1,)): 1, Cycle((0, 1)): 0})


@pytest.fixture
def eoc_open(eoc):
    return MullerKAcceptor(eoc, 2, {Cycle((0,)): 0, Cycle((1,)): 1})


@pytest.fixture
def eoc_closed(eoc):
    return MullerKAcceptor(eoc, 2, {Cycle((0,)): 1, Cycle((1,)): 0})


@pytest.fixture
def constant0(one_state):
    return MullerKAcceptor.constant(one_state, k=2, value=0)


@pytest.fixture
def diamond():
    return parse_poset(DIAMOND_TEXT)

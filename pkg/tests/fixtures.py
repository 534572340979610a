"""
Fixture data shared by the test modules: file texts and small builders
"""

from wadgekit.automaton import Automaton
from wadgekit.poset import Base, LabeledPoset

E2_TEXT = """\
# two states over {a, b}
alphabet: a b
states: 2
initial: 0
trans: 0 a 1
trans: 0 b 0
trans: 1 a 1
trans: 1 b 0
"""

EOC_TEXT = """\
alphabet: a b
states: 2
initial: 0
trans: 0 a 0
trans: 0 b 1
trans: 1 a 1
trans: 1 b 1
"""

DIAMOND_TEXT = """\
(poset
  (node a 0) (node b 1) (node c 2) (node d 0)
  (edge a b) (edge a c) (edge b d) (edge c d))
"""


def automaton(letters, rows, initial=0):
    return Automaton.from_transitions(
        letters,
        len(rows),
        initial,
        {(q, letter): target for q, row in enumerate(rows) for letter, target in zip(letters, row)},
    )


def base_chain(*labels):
    return LabeledPoset(tuple(Base(v) for v in labels), tuple((i, i + 1) for i in range(len(labels) - 1)))

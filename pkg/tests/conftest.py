import hypothesis
from hypothesis import strategies as st

from tenseprove.formula import (
    And,
    Atom,
    BlackBox,
    BlackDiamond,
    Bottom,
    Box,
    Diamond,
    Implies,
    Not,
    Or,
)
from tenseprove.sequent import LinearNestedSequent, Multiset, Component
from tenseprove.formula import Polarity

hypothesis.settings.register_profile("ci", max_examples=60, deadline=None)
hypothesis.settings.load_profile("ci")

atoms = st.sampled_from([Atom("p"), Atom("q"), Atom("r"), Atom("s1")])
leaves = st.one_of(atoms, st.just(Bottom()))

surface_formulas = st.recursive(
    leaves,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(Box, sub),
        st.builds(BlackBox, sub),
        st.builds(Diamond, sub),
        st.builds(BlackDiamond, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
    ),
    max_leaves=8,
)

core_formulas = st.recursive(
    leaves,
    lambda sub: st.one_of(
        st.builds(Box, sub),
        st.builds(BlackBox, sub),
        st.builds(Implies, sub, sub),
    ),
    max_leaves=6,
)

small_multisets = st.lists(core_formulas, max_size=3).map(Multiset)


@st.composite
def small_components(draw):
    return Component(draw(small_multisets), draw(small_multisets))


@st.composite
def small_sequents(draw, max_len=3):
    n = draw(st.integers(1, max_len))
    comps = tuple(draw(small_components()) for _ in range(n))
    links = tuple(draw(st.sampled_from([Polarity.FORWARD, Polarity.BACKWARD]))
                  for _ in range(n - 1))
    return LinearNestedSequent(comps, links)

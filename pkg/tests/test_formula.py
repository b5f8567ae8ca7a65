import pytest
from hypothesis import given

from conftest import core_formulas, surface_formulas
from tenseprove.formula import (
    Atom,
    BlackBox,
    BlackDiamond,
    Bottom,
    Box,
    Diamond,
    Implies,
    Not,
    ParseError,
    complexity,
    desugar,
    is_core,
    modal_degree,
    parse,
    print_ascii,
    print_unicode,
    strict_subformulas,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_parse_tense_shape():
    assert parse("p -> [F]~[P]~p") == Implies(p, Box(Not(BlackBox(Not(p)))))


def test_parse_atom():
    assert parse("p") == p
    assert parse("x_12") == Atom("x_12")


def test_parse_k_axiom():
    assert parse("[F](p -> q) -> ([F]p -> [F]q)") == Implies(
        Box(Implies(p, q)), Implies(Box(p), Box(q))
    )


@pytest.mark.parametrize("text,expected", [
    ("p -> q -> r", Implies(p, Implies(q, r))),
    ("p & q | r", parse("(p & q) | r")),
    ("~p & q", parse("(~p) & q")),
    ("[F]p & q", parse("([F]p) & q")),
    ("<P>p | <F>q", parse("(<P>p) | (<F>q)")),
    ("false -> p", Implies(Bottom(), p)),
])
def test_precedence(text, expected):
    assert parse(text) == expected


def test_parse_error_reports_offset_and_expected():
    with pytest.raises(ParseError) as e:
        parse("p -> ")
    assert e.value.offset == 5
    assert "atom" in e.value.expected
    with pytest.raises(ParseError) as e:
        parse("p q")
    assert e.value.offset == 2
    with pytest.raises(ParseError) as e:
        parse("[X]p")
    assert "'[F]'" in e.value.expected


@given(surface_formulas)
def test_roundtrip(f):
    assert parse(print_ascii(f)) == f


def test_unicode_printer():
    assert print_unicode(parse("p -> [F]~[P]~p")) == "p → □¬■¬p"
    assert print_unicode(parse("<F>p & false")) == "◇p ∧ ⊥"


def test_desugar_diamond_blacksquare():
    f = Diamond(BlackBox(p))
    assert desugar(f) == Implies(Box(Implies(BlackBox(p), Bottom())), Bottom())


def test_desugar_core_fixpoint():
    assert desugar(p) == p


@given(surface_formulas)
def test_desugar_idempotent_and_core(f):
    d = desugar(f)
    assert is_core(d)
    assert desugar(d) == d


def test_desugar_idempotent_on_seeded_surface_sample():
    import random

    rng = random.Random(31)

    def grow(n):
        if n <= 1 or rng.random() < 0.3:
            return rng.choice([p, q, r, Bottom()])
        kind = rng.randrange(9)
        if kind < 2:
            return Implies(grow(n // 2), grow(n // 2))
        if kind == 2:
            return Not(grow(n - 1))
        if kind == 3:
            from tenseprove.formula import And
            return And(grow(n // 2), grow(n // 2))
        if kind == 4:
            from tenseprove.formula import Or
            return Or(grow(n // 2), grow(n // 2))
        ctor = [Box, BlackBox, Diamond, BlackDiamond][kind - 5]
        return ctor(grow(n - 1))

    for _ in range(1000):
        f = grow(8)
        d = desugar(f)
        assert is_core(d) and desugar(d) == d


def test_desugar_conj_disj():
    assert desugar(parse("p & q")) == parse("(p -> (q -> false)) -> false")
    assert desugar(parse("p | q")) == parse("(p -> false) -> q")


@pytest.mark.parametrize("text,deg", [("p", 0), ("[F]p", 1), ("[F](p -> [P]q)", 2)])
def test_modal_degree(text, deg):
    assert modal_degree(parse(text)) == deg


@pytest.mark.parametrize("text,n", [("p", 0), ("[F]p", 1), ("(p -> false) -> false", 2)])
def test_complexity(text, n):
    assert complexity(parse(text)) == n


@given(core_formulas)
def test_complexity_strictly_decreases_to_subformulas(f):
    if isinstance(f, Implies):
        kids = (f.left, f.right)
    elif isinstance(f, (Box, BlackBox)):
        kids = (f.body,)
    else:
        kids = ()
    for k in kids:
        assert complexity(k) < complexity(f)


def test_strict_subformulas():
    f = parse("[F](p -> q)")
    assert strict_subformulas(f) == {parse("p -> q"), p, q}


def test_atom_name_validation():
    with pytest.raises(ValueError):
        Atom("")
    with pytest.raises(ValueError):
        Atom("a b")

import random

import pytest

from tenseprove.formula import Atom, BlackBox, Bottom, Box, Implies, parse, desugar
from tenseprove.semantics import (
    BudgetExceeded,
    KripkeModel,
    UnknownWorld,
    bounded_countermodel_search,
    falsifies,
    forces,
)
from tenseprove.sequent import single

p, q, r = Atom("p"), Atom("q"), Atom("r")


def naive_forces(m, w, f, symmetric=False):
    """Independent reference evaluator; deliberately different code path."""
    rel = set(m.edges)
    if symmetric:
        rel = rel | {(b, a) for (a, b) in rel}
    if isinstance(f, Atom):
        return f.name in m.true_atoms.get(w, frozenset())
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Implies):
        return naive_forces(m, w, f.right, symmetric) if naive_forces(m, w, f.left, symmetric) else True
    if isinstance(f, Box):
        return all(naive_forces(m, v, f.body, symmetric) for (u, v) in rel if u == w)
    if isinstance(f, BlackBox):
        return all(naive_forces(m, u, f.body, symmetric) for (u, v) in rel if v == w)
    raise AssertionError


def test_vacuous_box():
    m = KripkeModel(("w",), frozenset())
    assert forces(m, "w", Box(p))
    assert forces(m, "w", BlackBox(p))


def test_two_world_clauses():
    m = KripkeModel(("u", "v"), frozenset({("u", "v")}), {"v": frozenset({"p"})})
    assert forces(m, "u", Box(p))
    assert not forces(m, "v", BlackBox(p))


def test_bottom_never_forced():
    m = KripkeModel(("w",), frozenset(), {"w": frozenset({"p"})})
    assert not forces(m, "w", Bottom())


def test_unknown_world():
    m = KripkeModel(("w",), frozenset())
    with pytest.raises(UnknownWorld):
        forces(m, "nope", p)


def test_symmetric_closure_reading():
    m = KripkeModel(("u", "v"), frozenset({("u", "v")}), {"u": frozenset({"p"})})
    assert forces(m, "v", Box(p))                   # no successor, vacuous
    assert forces(m, "v", Box(p), symmetric=True)   # u counts and forces p
    m2 = KripkeModel(("u", "v"), frozenset({("u", "v")}))
    assert not forces(m2, "v", Box(p), symmetric=True)


def test_falsifies_simple():
    m = KripkeModel(("w",), frozenset())
    assert falsifies(m, "w", single([], [p]))
    m2 = KripkeModel(("w",), frozenset(), {"w": frozenset({"p"})})
    assert not falsifies(m2, "w", single([p], [p]))


def test_falsifies_fan_model():
    # root with two successors (p, q false there) and one predecessor (r false)
    m = KripkeModel(
        ("u", "w1", "w2", "v"),
        frozenset({("u", "w1"), ("u", "w2"), ("v", "u")}),
    )
    s = single([], [Box(p), Box(q), BlackBox(r)])
    assert falsifies(m, "u", s)


def test_spot_check_against_naive_evaluator():
    rng = random.Random(20240)
    atoms = ["p", "q"]
    for _ in range(10_000):
        k = rng.randint(1, 3)
        worlds = tuple(f"w{i}" for i in range(k))
        edges = frozenset(
            (a, b) for a in worlds for b in worlds if rng.random() < 0.4)
        val = {
            w: frozenset(a for a in atoms if rng.random() < 0.5) for w in worlds
        }
        m = KripkeModel(worlds, edges, {w: s for w, s in val.items() if s})
        f = _random_core(rng, 5)
        w = rng.choice(worlds)
        sym = rng.random() < 0.3
        assert forces(m, w, f, sym) == naive_forces(m, w, f, sym)


def _random_core(rng, size):
    if size <= 1 or rng.random() < 0.3:
        return rng.choice([p, q, Bottom()])
    kind = rng.choice(["imp", "box", "bbox"])
    if kind == "imp":
        return Implies(_random_core(rng, size // 2), _random_core(rng, size // 2))
    body = _random_core(rng, size - 1)
    return Box(body) if kind == "box" else BlackBox(body)


def test_bounded_search_atom():
    m, w = bounded_countermodel_search(p, 3)
    assert m.worlds == ("w1",) and not m.true_atoms and w == "w1"


def test_bounded_search_tautology():
    assert bounded_countermodel_search(parse("p -> p"), 3) is None
    assert bounded_countermodel_search(parse("p -> p"), 4, cap=1 << 30) is None


def test_bounded_search_t_axiom():
    f = desugar(parse("[F]p -> p"))
    m, w = bounded_countermodel_search(f, 3)
    assert not forces(m, w, f)
    assert len(m.worlds) == 1 and not m.edges and not m.true_atoms


def test_bounded_search_self_certifying_and_monotone():
    f = desugar(parse("[F]p -> [F][F]p"))
    hit2 = bounded_countermodel_search(f, 3)
    assert hit2 is not None
    m, w = hit2
    assert not forces(m, w, f)
    # a countermodel found at bound k is still found at any larger bound
    hit3 = bounded_countermodel_search(f, 4, cap=1 << 31)
    assert hit3 is not None


def test_bounded_search_guards():
    with pytest.raises(ValueError):
        bounded_countermodel_search(p, 5)
    with pytest.raises(BudgetExceeded):
        bounded_countermodel_search(
            Implies(p, Implies(q, Implies(r, Atom("s1")))), 4, cap=1 << 20)


def test_model_json_and_dot():
    m = KripkeModel(("w0", "w1"), frozenset({("w0", "w1")}), {"w1": frozenset({"p"})})
    data = m.to_json("w0")
    assert data == {
        "worlds": ["w0", "w1"],
        "edges": [["w0", "w1"]],
        "valuation": {"w1": {"p": True}},
        "root": "w0",
    }
    back = KripkeModel.from_json(data)
    assert back.worlds == m.worlds and back.edges == m.edges
    assert back.true_atoms == {"w1": frozenset({"p"})}
    dot = m.to_dot("w0")
    assert "doublecircle" in dot and '"w0" -> "w1"' in dot and "p" in dot

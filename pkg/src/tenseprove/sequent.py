"""Components, linear nested sequents, the formula translation, and merge."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .formula import (
    BlackBox,
    Bottom,
    Box,
    Formula,
    Implies,
    Polarity,
    core_or,
    parse,
    print_ascii,
    sort_key,
    top,
)


class MergeUndefined(Exception):
    pass


class Multiset:
    """Immutable multiset of formulas; iteration follows the canonical order."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, items=()):
        counts: dict[Formula, int] = {}
        for f in items:
            counts[f] = counts.get(f, 0) + 1
        self._counts = counts
        self._hash = None

    @classmethod
    def _raw(cls, counts: dict) -> Multiset:
        m = object.__new__(cls)
        m._counts = counts
        m._hash = None
        return m

    def add(self, f: Formula, n: int = 1) -> Multiset:
        counts = dict(self._counts)
        counts[f] = counts.get(f, 0) + n
        return Multiset._raw(counts)

    def remove_one(self, f: Formula) -> Multiset:
        if f not in self._counts:
            raise KeyError(f"{f} not in multiset")
        counts = dict(self._counts)
        if counts[f] == 1:
            del counts[f]
        else:
            counts[f] -= 1
        return Multiset._raw(counts)

    def union(self, other: Multiset) -> Multiset:
        counts = dict(self._counts)
        for f, n in other._counts.items():
            counts[f] = counts.get(f, 0) + n
        return Multiset._raw(counts)

    def diff(self, other: Multiset) -> Multiset:
        """Saturating multiset difference."""
        counts = {}
        for f, n in self._counts.items():
            k = n - other.count(f)
            if k > 0:
                counts[f] = k
        return Multiset._raw(counts)

    def subset(self, other: Multiset) -> bool:
        return all(n <= other.count(f) for f, n in self._counts.items())

    def count(self, f: Formula) -> int:
        return self._counts.get(f, 0)

    def total(self) -> int:
        return sum(self._counts.values())

    def distinct(self) -> list[Formula]:
        return sorted(self._counts, key=sort_key)

    def items(self) -> list[tuple[Formula, int]]:
        return [(f, self._counts[f]) for f in self.distinct()]

    def __contains__(self, f: Formula) -> bool:
        return f in self._counts

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Multiset) and self._counts == other._counts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Multiset({[print_ascii(f) for f in self.distinct()]})"


_tags = itertools.count()


def fresh_tag() -> int:
    return next(_tags)


@dataclass(frozen=True)
class Component:
    """One antecedent/succedent pair; the tag identifies a world across rules."""

    ant: Multiset
    succ: Multiset
    tag: int = field(default=-1, compare=False)
    restarts: int = field(default=0, compare=False)

    def with_ant(self, f: Formula) -> Component:
        return replace(self, ant=self.ant.add(f))

    def with_succ(self, f: Formula) -> Component:
        return replace(self, succ=self.succ.add(f))

    def render(self, printer=print_ascii) -> str:
        left = ", ".join(printer(f) for f in self.ant.distinct())
        right = ", ".join(printer(f) for f in self.succ.distinct())
        return f"{left} => {right}".strip()


def component(ants=(), succs=(), tag: int = -1) -> Component:
    return Component(Multiset(ants), Multiset(succs), tag=tag)


_LINK_TEXT = {Polarity.FORWARD: "/F/", Polarity.BACKWARD: "\\P\\"}


@dataclass(frozen=True)
class LinearNestedSequent:
    components: tuple[Component, ...]
    links: tuple[Polarity, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("a linear nested sequent needs at least one component")
        if len(self.links) != len(self.components) - 1:
            raise ValueError("link count must be component count - 1")

    @property
    def length(self) -> int:
        return len(self.components)

    @property
    def last(self) -> Component:
        return self.components[-1]

    def replace_component(self, i: int, c: Component) -> LinearNestedSequent:
        comps = list(self.components)
        comps[i] = c
        return LinearNestedSequent(tuple(comps), self.links)

    def drop_last(self) -> LinearNestedSequent:
        return LinearNestedSequent(self.components[:-1], self.links[:-1])

    def extend(self, link: Polarity, c: Component) -> LinearNestedSequent:
        return LinearNestedSequent(self.components + (c,), self.links + (link,))

    def prefix(self, k: int) -> LinearNestedSequent:
        return LinearNestedSequent(self.components[:k], self.links[: k - 1])

    def render(self, printer=print_ascii) -> str:
        parts = [self.components[0].render(printer)]
        for link, c in zip(self.links, self.components[1:]):
            parts.append(_LINK_TEXT[link])
            parts.append(c.render(printer))
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "components": [
                {
                    "antecedent": [print_ascii(f) for f in c.ant.distinct() for _ in range(c.ant.count(f))],
                    "succedent": [print_ascii(f) for f in c.succ.distinct() for _ in range(c.succ.count(f))],
                }
                for c in self.components
            ],
            "links": [link.value for link in self.links],
        }

    @classmethod
    def from_json(cls, data: dict) -> LinearNestedSequent:
        comps = tuple(
            component([parse(s) for s in c["antecedent"]], [parse(s) for s in c["succedent"]])
            for c in data["components"]
        )
        links = tuple(Polarity(v) for v in data.get("links", []))
        return cls(comps, links)


def sequent(*comps: Component, links=()) -> LinearNestedSequent:
    return LinearNestedSequent(tuple(comps), tuple(links))


def single(ants=(), succs=(), tag: int = -1) -> LinearNestedSequent:
    return LinearNestedSequent((component(ants, succs, tag),), ())


def structurally_equivalent(a: LinearNestedSequent, b: LinearNestedSequent) -> bool:
    """Same length and pointwise-equal link polarities; contents are ignored."""
    return a.links == b.links


def merge(a: LinearNestedSequent, b: LinearNestedSequent) -> LinearNestedSequent:
    """Componentwise multiset union.

    Defined for structurally equivalent sequents, and for the degenerate
    clauses where one side has a single component: the longer tail is kept.
    """
    if a.length == 1 or b.length == 1 or structurally_equivalent(a, b):
        longer, n = (a, b.length) if a.length >= b.length else (b, a.length)
        comps = []
        for i, c in enumerate(longer.components):
            if i < n:
                other = (b if longer is a else a).components[i]
                comps.append(Component(c.ant.union(other.ant), c.succ.union(other.succ), tag=c.tag))
            else:
                comps.append(c)
        return LinearNestedSequent(tuple(comps), longer.links)
    raise MergeUndefined(f"cannot merge {a.render()} with {b.render()}")


def _disjunction(fs: list[Formula]) -> Formula:
    if not fs:
        return Bottom()
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = core_or(f, out)
    return out


def _conjunction(fs: list[Formula]) -> Formula:
    if not fs:
        return top()
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Implies(Implies(f, Implies(out, Bottom())), Bottom())
    return out


def formula_translation(s: LinearNestedSequent) -> Formula:
    """Read a sequent as one core formula, with /F/ as [F] and \\P\\ as [P]."""

    def tau(i: int) -> Formula:
        c = s.components[i]
        head = _conjunction(c.ant.distinct())
        succ = _disjunction(c.succ.distinct())
        if i == s.length - 1:
            return Implies(head, succ)
        op = Box if s.links[i] is Polarity.FORWARD else BlackBox
        return Implies(head, core_or(succ, op(tau(i + 1))))

    return tau(0)

"""Backward proof search with restarts, pruning, and countermodel extraction.

The engine applies the rule groups in priority order (termination, CPL,
propagation, restart) and only then branches over the right box rules.  A
failed search tree is pruned so that only the final incarnation of each
restarted component survives, and the surviving saturated leaves are glued
into a Kripke countermodel.  Both kinds of output are re-verified before
they are reported: derivations against the checker, models against the
forcing relation.
"""

from __future__ import annotations

import itertools
import sys
import time
from dataclasses import dataclass, field, replace

from . import calculus, metatheory, semantics
from .calculus import CalculusVariant, RuleId, RuleInstance
from .formula import (
    Atom,
    Formula,
    Polarity,
    collapse_backward,
    desugar,
    modal_degree,
    parse,
    strict_subformulas,
)
from .metatheory import Derivation
from .semantics import KripkeModel
from .sequent import Component, LinearNestedSequent, Multiset


# search depth tracks derivation height, which can exceed the interpreter default
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))


class SearchInvariantError(Exception):
    """A watchdog or a certificate self-check fired; never a verdict."""


class InternalModelError(SearchInvariantError):
    pass


class _BudgetExceeded(Exception):
    pass


class BudgetExhausted(Exception):
    def __init__(self, stats: "Statistics"):
        super().__init__(f"search budget exhausted after {stats.nodes} nodes")
        self.stats = stats


@dataclass
class Budget:
    max_nodes: int = 1_000_000
    max_ms: int = 30_000


@dataclass
class Statistics:
    nodes: int = 0
    restarts: int = 0
    max_length: int = 1
    elapsed_ms: int = 0

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "restarts": self.restarts, "max_length": self.max_length}


CLOSED = "closed"
FAILED = "failed"


@dataclass
class SearchNode:
    sequent: LinearNestedSequent
    kind: str  # "leaf" | "step" | "and"
    applied: RuleInstance | None
    children: list[SearchNode]
    status: str
    left_derivation: Derivation | None = None
    stuck: bool = False


@dataclass
class PrunedNode:
    sequent: LinearNestedSequent
    rule: RuleId | None
    kind: str  # "leaf" | "step" | "and"
    children: list[PrunedNode] = field(default_factory=list)

    def leaves(self) -> list[PrunedNode]:
        if self.kind == "leaf":
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out


@dataclass
class Valid:
    derivation: Derivation
    stats: Statistics


@dataclass
class Invalid:
    model: KripkeModel
    root: str
    stats: Statistics


@dataclass
class ResourceLimit:
    stats: Statistics


SearchOutcome = Valid | Invalid | ResourceLimit


class _Search:
    def __init__(self, variant: CalculusVariant, budget: Budget, end: LinearNestedSequent):
        self.variant = variant
        self.budget = budget
        self.stats = Statistics()
        self.deadline = time.monotonic() + budget.max_ms / 1000.0
        self.tags = itertools.count(max(c.tag for c in end.components) + 1)
        self.restart_bound = len(strict_subformulas_of(end)) + 1

    def tick(self, s: LinearNestedSequent):
        self.stats.nodes += 1
        self.stats.max_length = max(self.stats.max_length, s.length)
        if self.stats.nodes > self.budget.max_nodes or time.monotonic() > self.deadline:
            raise _BudgetExceeded

    def fresh(self) -> int:
        return next(self.tags)

    def expand(self, s: LinearNestedSequent) -> SearchNode:
        self.tick(s)
        inst = calculus.saturation_instance(s, self.variant, self.fresh)
        if inst is not None:
            if inst.rule in (RuleId.ID, RuleId.BOT_L):
                return SearchNode(s, "leaf", inst, [], CLOSED)
            if inst.rule in calculus.RESTART_RULES:
                self.stats.restarts += 1
                absorber = inst.premisses[0].last
                if absorber.restarts > self.restart_bound:
                    raise SearchInvariantError("restart count exceeded the subformula bound")
            children = []
            for p in inst.premisses:
                c = self.expand(p)
                children.append(c)
                if c.status == FAILED:
                    return SearchNode(s, "step", inst, children, FAILED)
            return SearchNode(s, "step", inst, children, CLOSED)
        choices = calculus.box_instances(s, self.variant, True, self.fresh)
        if not choices:
            return SearchNode(s, "leaf", None, [], FAILED)
        explored = []
        for inst in choices:
            node = self.expand_box(s, inst)
            if node.status == CLOSED:
                return node
            explored.append(node)
        if any(n.stuck for n in explored):
            raise SearchInvariantError(
                "left premiss of a two-premiss box rule could not be derived")
        return SearchNode(s, "and", None, explored, FAILED)

    def expand_box(self, s: LinearNestedSequent, inst: RuleInstance) -> SearchNode:
        grown = inst.premisses[-1]
        if max_degree(grown.last) >= max_degree(s.last):
            raise SearchInvariantError("modal degree failed to drop at a box step")
        if inst.rule in calculus.TWO_PREMISS_BOX_RULES:
            right = self.expand(grown)
            if right.status == FAILED:
                return SearchNode(s, "step", inst, [right], FAILED)
            left = self.derive_left(inst)
            if left is None:
                return SearchNode(s, "step", inst, [right], FAILED, stuck=True)
            return SearchNode(s, "step", inst, [right], CLOSED, left_derivation=left)
        child = self.expand(inst.premisses[0])
        return SearchNode(s, "step", inst, [child], child.status)

    def derive_left(self, inst: RuleInstance) -> Derivation | None:
        """Derivation of the left premiss of boxR1/bboxR1.

        The left premiss weakens the conclusion, so when the conclusion's
        prefix is provable on its own the premiss follows by EW; otherwise
        search the premiss directly (its box instance is fulfilled, so this
        terminates).
        """
        left = inst.premisses[0]
        prefix_tree = self.expand(left.drop_last())
        if prefix_tree.status == CLOSED:
            return Derivation(left, RuleId.EW, (derivation_from(prefix_tree, self.variant),))
        tree = self.expand(left)
        if tree.status == CLOSED:
            return derivation_from(tree, self.variant)
        return None


def strict_subformulas_of(s: LinearNestedSequent):
    out = set()
    for c in s.components:
        for ms in (c.ant, c.succ):
            for f in ms.distinct():
                out.add(f)
                out |= strict_subformulas(f)
    return out


def max_degree(c: Component) -> int:
    degs = [modal_degree(f) for f in c.ant.distinct()] + [modal_degree(f) for f in c.succ.distinct()]
    return max(degs, default=0)


def derivation_from(node: SearchNode, v: CalculusVariant) -> Derivation:
    if node.status != CLOSED:
        raise SearchInvariantError("no derivation in a failed tree")
    if node.kind == "leaf":
        return Derivation(node.sequent, node.applied.rule)
    rule = node.applied.rule
    if rule in calculus.TWO_PREMISS_BOX_RULES:
        right = derivation_from(node.children[0], v)
        return Derivation(node.sequent, rule, (node.left_derivation, right))
    prems = tuple(derivation_from(c, v) for c in node.children)
    return Derivation(node.sequent, rule, prems)


def search(s: LinearNestedSequent, v: CalculusVariant,
           budget: Budget | None = None) -> tuple[str, SearchNode, Statistics]:
    """Run the strategy on s; returns (status, explored tree, statistics)."""
    budget = budget or Budget()
    s = _retag(s)
    eng = _Search(v, budget, s)
    t0 = time.monotonic()
    try:
        tree = eng.expand(s)
    except _BudgetExceeded:
        eng.stats.elapsed_ms = int((time.monotonic() - t0) * 1000)
        raise BudgetExhausted(eng.stats) from None
    eng.stats.elapsed_ms = int((time.monotonic() - t0) * 1000)
    return tree.status, tree, eng.stats


def _retag(s: LinearNestedSequent) -> LinearNestedSequent:
    comps = tuple(replace(c, tag=i) for i, c in enumerate(s.components))
    return LinearNestedSequent(comps, s.links)


def prune(t: SearchNode) -> PrunedNode:
    """Keep only the parts of a failed tree that build the countermodel.

    A restart deletes the last component of its conclusion and that deletion
    cascades downward through the rules that acted inside it; an and-node one
    of whose choices collapsed this way keeps only the collapsed branch,
    since the restarted re-exploration subsumes the longer siblings.
    """
    if t.status != FAILED:
        raise SearchInvariantError("prune expects a failed tree")
    node, _ = _prune(t)
    return node


def _prune(n: SearchNode) -> tuple[PrunedNode, bool]:
    """Returns the pruned subtree and whether a restart collapse is still
    travelling down from it."""
    if n.kind == "leaf":
        return PrunedNode(n.sequent, None, "leaf"), False
    if n.kind == "and":
        pruned = [_prune(c) for c in n.children]
        collapsed = [p for p, flag in pruned if flag]
        if collapsed:
            best = min(collapsed, key=lambda p: p.sequent.length)
            return best, best.sequent.length < n.sequent.length
        return PrunedNode(n.sequent, None, "and", [p for p, _ in pruned]), False
    failed = next(c for c in n.children if c.status == FAILED)
    child, flag = _prune(failed)
    rule = n.applied.rule
    if rule in calculus.RESTART_RULES:
        if flag and child.sequent.length < n.sequent.length - 1:
            return child, True
        return PrunedNode(n.sequent.prefix(n.sequent.length - 1), rule, "step", [child]), True
    if flag:
        return child, True
    return PrunedNode(n.sequent, rule, "step", [child]), False


def extract_model(t: PrunedNode, v: CalculusVariant) -> tuple[KripkeModel, str]:
    """Glue the surviving saturated leaves into a model, keyed by component
    identity tags; antecedent atoms become true, everything else false."""
    names: dict[int, str] = {}

    def name(tag: int) -> str:
        if tag not in names:
            names[tag] = f"w{len(names)}"
        return names[tag]

    edges: set[tuple[str, str]] = set()
    trues: dict[str, set[str]] = {}
    for comp in t.sequent.components:
        name(comp.tag)
    leaves = t.leaves()
    if not leaves:
        raise InternalModelError("pruned tree has no open leaves")
    for leaf in leaves:
        s = leaf.sequent
        for comp in s.components:
            w = name(comp.tag)
            for f in comp.ant.distinct():
                if isinstance(f, Atom):
                    trues.setdefault(w, set()).add(f.name)
        for i, link in enumerate(s.links):
            a, b = name(s.components[i].tag), name(s.components[i + 1].tag)
            edges.add((a, b) if link is Polarity.FORWARD else (b, a))
    worlds = tuple(sorted(names.values(), key=lambda w: int(w[1:])))
    model = KripkeModel(worlds, frozenset(edges),
                        {w: frozenset(s) for w, s in trues.items()})
    return model, name(t.sequent.components[0].tag)


def prove_sequent(s: LinearNestedSequent, v: CalculusVariant = CalculusVariant.KT_STAR,
                  budget: Budget | None = None) -> SearchOutcome:
    """Decide a sequent; every outcome carries a re-verified certificate."""
    try:
        status, tree, stats = search(s, v, budget)
    except BudgetExhausted as e:
        return ResourceLimit(e.stats)
    if status == CLOSED:
        d = derivation_from(tree, v)
        res = metatheory.check(d, v)
        if not res:
            raise SearchInvariantError(f"emitted derivation failed the checker: {res.message}")
        return Valid(d, stats)
    pruned = prune(tree)
    model, root = extract_model(pruned, v)
    if not semantics.falsifies(model, root, tree.sequent, symmetric=(v is CalculusVariant.KB)):
        raise InternalModelError(
            f"extracted model does not falsify {tree.sequent.render()} at {root}")
    return Invalid(model, root, stats)


def prove(f: Formula | str, v: CalculusVariant = CalculusVariant.KT_STAR,
          budget: Budget | None = None) -> SearchOutcome:
    """Decide a formula: Valid with a derivation of ( => f), Invalid with a
    countermodel falsifying it at the root, or ResourceLimit."""
    g = parse(f) if isinstance(f, str) else f
    g = desugar(g)
    if v is CalculusVariant.KB:
        g = collapse_backward(g)
    end = LinearNestedSequent((Component(Multiset(), Multiset((g,)), tag=0),), ())
    return prove_sequent(end, v, budget)

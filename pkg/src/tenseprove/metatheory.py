"""Derivation objects, the trusted checker, and executable proof transformations.

Everything here rebuilds immutable trees; every public transformation
re-validates its output against the checker and raises TransformError on any
internal construction mistake, so a bad rewrite can never leak out as a
"certificate".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import calculus
from .calculus import (
    RESTART_RULES,
    RIGHT_BOX_RULES,
    TWO_PREMISS_BOX_RULES,
    CalculusVariant,
    RuleId,
    is_valid_instance,
)
from .formula import (
    Atom,
    BlackBox,
    Bottom,
    Box,
    Formula,
    Implies,
    Polarity,
    complexity,
    print_ascii,
)
from .sequent import Component, LinearNestedSequent, Multiset


class PositionOutOfRange(Exception):
    pass


class NotDuplicated(Exception):
    pass


class NoSharedFormula(Exception):
    pass


class StructuralMismatch(Exception):
    pass


class NotACutFormulaOccurrence(Exception):
    pass


class TransformError(Exception):
    """A transformation produced something the checker rejects; always a bug."""


@dataclass(frozen=True)
class Derivation:
    conclusion: LinearNestedSequent
    rule: RuleId
    premisses: tuple[Derivation, ...] = ()
    height: int = field(init=False, compare=False)

    def __post_init__(self):
        h = 0 if not self.premisses else 1 + max(p.height for p in self.premisses)
        object.__setattr__(self, "height", h)

    def rules_used(self) -> list[RuleId]:
        out = [self.rule]
        for p in self.premisses:
            out.extend(p.rules_used())
        return out


@dataclass
class CheckResult:
    ok: bool
    path: tuple[int, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check(d: Derivation, v: CalculusVariant) -> CheckResult:
    """Validate every node against the rule schemas of the given variant."""
    stack = [(d, ())]
    while stack:
        node, path = stack.pop()
        if not is_valid_instance(node.conclusion, node.rule, [p.conclusion for p in node.premisses], v):
            return CheckResult(False, path, f"invalid {node.rule.value} at {node.conclusion.render()}")
        for i, p in enumerate(node.premisses):
            stack.append((p, path + (i,)))
    return CheckResult(True)


def infer_variant(d: Derivation) -> CalculusVariant:
    used = set(d.rules_used())
    if used & {RuleId.KB_BOX_R, RuleId.KB_BOX_L1, RuleId.KB_BOX_L2}:
        return CalculusVariant.KB
    if used & {RuleId.BOX_R, RuleId.BBOX_R}:
        return CalculusVariant.KT_STAR
    return CalculusVariant.KT


def _sequents_equal(a: LinearNestedSequent, b: LinearNestedSequent) -> bool:
    return a.links == b.links and all(
        x.ant == y.ant and x.succ == y.succ for x, y in zip(a.components, b.components)
    )


def _recheck(out: Derivation, v: CalculusVariant, what: str) -> Derivation:
    res = check(out, v)
    if not res:
        raise TransformError(f"{what} broke the derivation: {res.message}")
    return out


# --- admissible structural rules ---------------------------------------------


def _weaken(d: Derivation, pos: int, add_l: Multiset, add_r: Multiset) -> Derivation:
    c = d.conclusion.components[pos]
    newc = d.conclusion.replace_component(
        pos, Component(c.ant.union(add_l), c.succ.union(add_r), tag=c.tag)
    )
    prems = []
    for p in d.premisses:
        if p.conclusion.length < d.conclusion.length and pos == d.conclusion.length - 1:
            prems.append(p)  # the weakened component is deleted going up
        else:
            prems.append(_weaken(p, pos, add_l, add_r))
    return Derivation(newc, d.rule, tuple(prems))


def weaken(d: Derivation, position: int, add_left=(), add_right=(),
           variant: CalculusVariant | None = None) -> Derivation:
    """Add formulas to one component everywhere it survives in the derivation."""
    if not 0 <= position < d.conclusion.length:
        raise PositionOutOfRange(position)
    out = _weaken(d, position, Multiset(add_left), Multiset(add_right))
    return _recheck(out, variant or infer_variant(d), "weaken")


def _contract(d: Derivation, pos: int, side: str, f: Formula) -> Derivation:
    c = d.conclusion.components[pos]
    if side == "left":
        newc = Component(c.ant.remove_one(f), c.succ, tag=c.tag)
    else:
        newc = Component(c.ant, c.succ.remove_one(f), tag=c.tag)
    newconc = d.conclusion.replace_component(pos, newc)
    prems = []
    for p in d.premisses:
        if p.conclusion.length < d.conclusion.length and pos == d.conclusion.length - 1:
            prems.append(p)
        else:
            prems.append(_contract(p, pos, side, f))
    return Derivation(newconc, d.rule, tuple(prems))


def contract(d: Derivation, position: int, side: str, f: Formula,
             variant: CalculusVariant | None = None) -> Derivation:
    """Remove one of at least two copies of f from a component, derivation-wide."""
    if not 0 <= position < d.conclusion.length:
        raise PositionOutOfRange(position)
    c = d.conclusion.components[position]
    ms = c.ant if side == "left" else c.succ
    if ms.count(f) < 2:
        raise NotDuplicated(f"{print_ascii(f)} is not duplicated on the {side}")
    out = _contract(d, position, side, f)
    return _recheck(out, variant or infer_variant(d), "contract")


def prefix_context(d: Derivation, comp: Component, link: Polarity) -> Derivation:
    """Prepend a fixed component to every sequent of a derivation."""

    def go(n: Derivation) -> Derivation:
        newc = LinearNestedSequent((comp,) + n.conclusion.components, (link,) + n.conclusion.links)
        return Derivation(newc, n.rule, tuple(go(p) for p in n.premisses))

    return _recheck(go(d), infer_variant(d), "prefix_context")


# --- generalised initial sequents --------------------------------------------


def generalised_init(s: LinearNestedSequent, shared: Formula) -> Derivation:
    """Derivation of a sequent whose last component has `shared` on both sides."""
    last = s.last
    if shared not in last.ant or shared not in last.succ:
        raise NoSharedFormula(print_ascii(shared))
    out = _gen_init(s, shared)
    return _recheck(out, CalculusVariant.KT, "generalised_init")


def _gen_init(s: LinearNestedSequent, a: Formula) -> Derivation:
    i = s.length - 1
    last = s.last
    if isinstance(a, Atom):
        return Derivation(s, RuleId.ID)
    if isinstance(a, Bottom):
        return Derivation(s, RuleId.BOT_L)
    if isinstance(a, Implies):
        p1 = s.replace_component(i, last.with_ant(a.left).with_succ(a.right))
        q1 = p1.replace_component(i, p1.last.with_ant(a.right))
        q2 = p1.replace_component(i, p1.last.with_succ(a.left))
        impl = Derivation(p1, RuleId.IMP_L, (_gen_init(q1, a.right), _gen_init(q2, a.left)))
        return Derivation(s, RuleId.IMP_R, (impl,))
    if isinstance(a, Box):
        link = s.links[-1] if s.length > 1 else None
        if link is not Polarity.BACKWARD:
            ext = s.extend(Polarity.FORWARD, Component(Multiset(), Multiset((a.body,))))
            prop = ext.replace_component(ext.length - 1, ext.last.with_ant(a.body))
            return Derivation(
                s, RuleId.BOX_R2,
                (Derivation(ext, RuleId.BOX_L1, (_gen_init(prop, a.body),)),),
            )
        second = s.components[-2]
        lseq = s.replace_component(s.length - 2, second.with_succ(a.body))
        lrestart = lseq.drop_last()
        lrestart = lrestart.replace_component(
            lrestart.length - 1, lrestart.last.with_ant(a.body))
        left = Derivation(lseq, RuleId.BOX_L2, (_gen_init(lrestart, a.body),))
        ext = s.extend(Polarity.FORWARD, Component(Multiset(), Multiset((a.body,))))
        prop = ext.replace_component(ext.length - 1, ext.last.with_ant(a.body))
        right = Derivation(ext, RuleId.BOX_L1, (_gen_init(prop, a.body),))
        return Derivation(s, RuleId.BOX_R1, (left, right))
    if isinstance(a, BlackBox):
        link = s.links[-1] if s.length > 1 else None
        if link is not Polarity.FORWARD:
            ext = s.extend(Polarity.BACKWARD, Component(Multiset(), Multiset((a.body,))))
            prop = ext.replace_component(ext.length - 1, ext.last.with_ant(a.body))
            return Derivation(
                s, RuleId.BBOX_R2,
                (Derivation(ext, RuleId.BBOX_L1, (_gen_init(prop, a.body),)),),
            )
        second = s.components[-2]
        lseq = s.replace_component(s.length - 2, second.with_succ(a.body))
        lrestart = lseq.drop_last()
        lrestart = lrestart.replace_component(
            lrestart.length - 1, lrestart.last.with_ant(a.body))
        left = Derivation(lseq, RuleId.BBOX_L2, (_gen_init(lrestart, a.body),))
        ext = s.extend(Polarity.BACKWARD, Component(Multiset(), Multiset((a.body,))))
        prop = ext.replace_component(ext.length - 1, ext.last.with_ant(a.body))
        right = Derivation(ext, RuleId.BBOX_L1, (_gen_init(prop, a.body),))
        return Derivation(s, RuleId.BBOX_R1, (left, right))
    raise NoSharedFormula(f"cannot build initial derivation for {print_ascii(a)}")


def to_ktstar(d: Derivation) -> Derivation:
    """Drop the left premisses of the two-premiss box rules and rename."""
    if d.rule is RuleId.BOX_R1:
        return Derivation(d.conclusion, RuleId.BOX_R, (to_ktstar(d.premisses[1]),))
    if d.rule is RuleId.BBOX_R1:
        return Derivation(d.conclusion, RuleId.BBOX_R, (to_ktstar(d.premisses[1]),))
    rule = {RuleId.BOX_R2: RuleId.BOX_R, RuleId.BBOX_R2: RuleId.BBOX_R}.get(d.rule, d.rule)
    return Derivation(d.conclusion, rule, tuple(to_ktstar(p) for p in d.premisses))


# --- cut elimination ----------------------------------------------------------


class CutMonitor:
    """Tracks the lexicographic induction measure across the rewrite calls.

    Each entry is (cut complexity, depth sum, phase) with phase 1 for the
    shift-left procedure and 0 for the shift-right ones; every nested call
    must be strictly smaller.
    """

    def __init__(self):
        self.stack: list[tuple[int, int, int]] = []
        self.calls = 0
        self.violations: list[tuple] = []

    def enter(self, n: int, m: int, phase: int):
        key = (n, m, phase)
        self.calls += 1
        if self.stack and not key < self.stack[-1]:
            self.violations.append((self.stack[-1], key))
        self.stack.append(key)

    def exit(self):
        self.stack.pop()


def _cut_target(cl: LinearNestedSequent, cr: LinearNestedSequent, pos: int,
                a: Formula) -> LinearNestedSequent:
    """Merge minus the cut occurrences: a leaves cl's succedent and cr's
    antecedent at component pos; the longer suffix is kept as is."""
    n = max(cl.length, cr.length)
    comps = []
    for i in range(n):
        x = cl.components[i] if i < cl.length else None
        y = cr.components[i] if i < cr.length else None
        if i < pos:
            comps.append(Component(x.ant.union(y.ant), x.succ.union(y.succ), tag=x.tag))
        elif i == pos:
            comps.append(Component(
                x.ant.union(y.ant.remove_one(a)),
                x.succ.remove_one(a).union(y.succ),
                tag=x.tag,
            ))
        else:
            comps.append(x if x is not None else y)
    links = cl.links if cl.length == n else cr.links
    return LinearNestedSequent(tuple(comps), links)


def _leaf_rule(s: LinearNestedSequent) -> Derivation | None:
    last = s.last
    if Bottom() in last.ant:
        return Derivation(s, RuleId.BOT_L)
    for f in last.ant.distinct():
        if isinstance(f, Atom) and f in last.succ:
            return Derivation(s, RuleId.ID)
    return None


def _ew_extend(d: Derivation, target: LinearNestedSequent) -> Derivation:
    out = d
    while out.conclusion.length < target.length:
        out = Derivation(target.prefix(out.conclusion.length + 1), RuleId.EW, (out,))
    return out


def _try_embed(d: Derivation, target: LinearNestedSequent) -> Derivation | None:
    n = d.conclusion.length
    if n > target.length or d.conclusion.links != target.links[: n - 1]:
        return None
    for i in range(n):
        ci, ti = d.conclusion.components[i], target.components[i]
        if not (ci.ant.subset(ti.ant) and ci.succ.subset(ti.succ)):
            return None
    out = d
    for i in range(n):
        ci, ti = out.conclusion.components[i], target.components[i]
        add_l, add_r = ti.ant.diff(ci.ant), ti.succ.diff(ci.succ)
        if add_l or add_r:
            out = _weaken(out, i, add_l, add_r)
    return _ew_extend(out, target)


def _close_terminal(target: LinearNestedSequent, fallbacks) -> Derivation:
    node = _leaf_rule(target)
    if node:
        return node
    for k in range(target.length - 1, 0, -1):
        node = _leaf_rule(target.prefix(k))
        if node:
            return _ew_extend(node, target)
    for d in fallbacks:
        out = _try_embed(d, target)
        if out is not None:
            return out
    raise TransformError(f"no terminal closure for {target.render()}")


def _contract_to(d: Derivation, target: LinearNestedSequent) -> Derivation:
    out = d
    if out.conclusion.length != target.length:
        raise TransformError("contract_to: length mismatch")
    for i in range(target.length):
        for side in ("left", "right"):
            while True:
                c = out.conclusion.components[i]
                ms = c.ant if side == "left" else c.succ
                t = target.components[i].ant if side == "left" else target.components[i].succ
                extra = [f for f in ms.distinct() if ms.count(f) > t.count(f)]
                if not extra:
                    break
                if ms.count(extra[0]) < 2 or t.count(extra[0]) < 1:
                    raise TransformError("contract_to: support mismatch")
                out = _contract(out, i, side, extra[0])
    if not _sequents_equal(out.conclusion, target):
        raise TransformError("contract_to missed the target")
    return out


def _principal_instance(d: Derivation, a: Formula):
    """The root's rule instance with principal a, if the root matches one."""
    for inst in calculus.applicable_rules(d.conclusion, CalculusVariant.KT, False):
        if (
            inst.rule is d.rule
            and inst.principal == a
            and len(inst.premisses) == len(d.premisses)
            and all(_sequents_equal(p, q.conclusion) for p, q in zip(inst.premisses, d.premisses))
        ):
            return inst
    return None


def _rebuild(target: LinearNestedSequent, rule: RuleId, prems) -> Derivation:
    return Derivation(target, rule, tuple(prems))


def _adapt_witness(w: Derivation, old: LinearNestedSequent, new: LinearNestedSequent,
                   pos: int, boxed: Formula) -> Derivation:
    """Weaken the shift-right witness when pushing past a rule fattens the
    prefix below the cut component."""
    out = w
    for i in range(pos + 1):
        oc, nc = old.components[i], new.components[i]
        oa = oc.ant.remove_one(boxed) if i == pos else oc.ant
        na = nc.ant.remove_one(boxed) if i == pos else nc.ant
        add_l, add_r = na.diff(oa), nc.succ.diff(oc.succ)
        if add_l or add_r:
            out = _weaken(out, i, add_l, add_r)
    return out


def _sl(a: Formula, d1: Derivation, pos1: int, d2: Derivation, mon: CutMonitor) -> Derivation:
    """Shift the cut into d1 until the cut formula is principal there.

    d1 concludes G + (Gamma => Delta, a) + I with the occurrence at pos1;
    d2 concludes H + (a, Sigma => Pi) with the occurrence in its last
    component, structurally equivalent to d1's prefix up to pos1.
    """
    mon.enter(complexity(a), d1.height + d2.height, 1)
    try:
        target = _cut_target(d1.conclusion, d2.conclusion, pos1, a)
        last1 = d1.conclusion.length - 1

        if d1.rule in (RuleId.ID, RuleId.BOT_L):
            return _close_terminal(target, (d2, d1))

        if pos1 == last1 and d1.rule in RIGHT_BOX_RULES | {RuleId.IMP_R}:
            inst = _principal_instance(d1, a)
            if inst is not None:
                if isinstance(a, Implies):
                    return _sr_p(a, d1, d2, d2.conclusion.length - 1, mon)
                right = d1.premisses[1] if d1.rule in TWO_PREMISS_BOX_RULES else d1.premisses[0]
                witness = _sl(a, right, right.conclusion.length - 2, d2, mon)
                return _sr_modal(a, d1, d2, d2.conclusion.length - 1, witness, mon)

        if d1.rule in RESTART_RULES:
            if pos1 < last1:
                sub = _sl(a, d1.premisses[0], pos1, d2, mon)
                return _rebuild(target, d1.rule, (sub,))
            smaller = Derivation(
                d1.conclusion.replace_component(
                    last1,
                    Component(d1.conclusion.last.ant,
                              d1.conclusion.last.succ.remove_one(a),
                              tag=d1.conclusion.last.tag)),
                d1.rule, d1.premisses)
            out = _try_embed(smaller, target)
            if out is None:
                raise TransformError("restart case: weakening failed")
            return out

        if d1.rule is RuleId.EW:
            if pos1 < last1:
                sub = _sl(a, d1.premisses[0], pos1, d2, mon)
                return _rebuild(target, RuleId.EW, (sub,))
            out = _try_embed(d1.premisses[0], target)
            if out is None:
                raise TransformError("sl ew case: weakening failed")
            return out

        subs = tuple(_sl(a, p, pos1, d2, mon) for p in d1.premisses)
        return _rebuild(target, d1.rule, subs)
    finally:
        mon.exit()


def _sr_p(a: Formula, d1: Derivation, d2: Derivation, pos2: int, mon: CutMonitor) -> Derivation:
    """Shift the cut into d2 for a non-modal cut formula.

    The cut formula is principal in d1's root (an implication introduced by
    the right rule); the occurrence in d2 sits at pos2, in the antecedent.
    """
    mon.enter(complexity(a), d1.height + d2.height, 0)
    try:
        target = _cut_target(d1.conclusion, d2.conclusion, pos2, a)
        last2 = d2.conclusion.length - 1

        if d2.rule in (RuleId.ID, RuleId.BOT_L):
            return _close_terminal(target, (d1, d2))

        if d2.rule is RuleId.IMP_L and pos2 == last2:
            inst = _principal_instance(d2, a)
            if inst is not None:
                d3 = d1.premisses[0]
                d4, d5 = d2.premisses
                e1 = _sl(a, d1, d1.conclusion.length - 1, d4, mon)
                e2 = _sl(a, d1, d1.conclusion.length - 1, d5, mon)
                e3 = _sl(a, d3, d3.conclusion.length - 1, d2, mon)
                f = _sl(a.left, e2, e2.conclusion.length - 1, e3, mon)
                g = _sl(a.right, f, f.conclusion.length - 1, e1, mon)
                return _contract_to(g, target)

        if d2.rule in RESTART_RULES:
            if pos2 < last2:
                prem = d2.premisses[0]
                sub = _sr_p(a, d1, prem, pos2, mon)
                return _rebuild(target, d2.rule, (sub,))
            smaller = Derivation(
                d2.conclusion.replace_component(
                    last2,
                    Component(d2.conclusion.last.ant.remove_one(a),
                              d2.conclusion.last.succ,
                              tag=d2.conclusion.last.tag)),
                d2.rule, d2.premisses)
            out = _try_embed(smaller, target)
            if out is None:
                raise TransformError("sr_p restart case: weakening failed")
            return out

        if d2.rule is RuleId.EW:
            if pos2 < last2:
                sub = _sr_p(a, d1, d2.premisses[0], pos2, mon)
                return _rebuild(target, RuleId.EW, (sub,))
            out = _try_embed(d2.premisses[0], target)
            if out is None:
                raise TransformError("sr_p ew case: weakening failed")
            return out

        subs = tuple(_sr_p(a, d1, p, pos2, mon) for p in d2.premisses)
        return _rebuild(target, d2.rule, subs)
    finally:
        mon.exit()


def _sr_modal(a: Formula, d1: Derivation, d2: Derivation, pos2: int,
              witness: Derivation, mon: CutMonitor) -> Derivation:
    """Shift the cut into d2 for a boxed cut formula.

    d1 ends with a right box rule introducing `a`; `witness` derives the
    merged prefix extended with an empty component holding the box body, and
    pays for eliminating the contextual copy when the cut gets principal on
    the left side of d2.
    """
    mon.enter(complexity(a), d1.height + d2.height, 0)
    try:
        body = a.body
        target = _cut_target(d1.conclusion, d2.conclusion, pos2, a)
        last2 = d2.conclusion.length - 1
        prop_rule = RuleId.BOX_L1 if isinstance(a, Box) else RuleId.BBOX_L1
        restart_rule = RuleId.BOX_L2 if isinstance(a, Box) else RuleId.BBOX_L2

        if d2.rule in (RuleId.ID, RuleId.BOT_L):
            return _close_terminal(target, (d1, d2))

        if d2.rule is prop_rule and pos2 == last2 - 1:
            inst = _principal_instance(d2, a)
            if inst is not None:
                d5 = d2.premisses[0]
                d6 = _sr_modal(a, d1, d5, pos2, witness, mon)
                e = _sl(body, witness, witness.conclusion.length - 1, d6, mon)
                return _contract_to(e, target)

        if d2.rule is restart_rule and pos2 == last2:
            inst = _principal_instance(d2, a)
            if inst is not None:
                if d1.rule not in TWO_PREMISS_BOX_RULES:
                    raise TransformError("one-premiss box against a principal restart")
                d3 = d1.premisses[0]
                d5 = d2.premisses[0]
                d6 = _sl(a, d3, d3.conclusion.length - 1, d2, mon)
                e = _sl(body, d6, d6.conclusion.length - 2, d5, mon)
                return _contract_to(e, target)

        if d2.rule in RESTART_RULES:
            if pos2 < last2:
                prem = d2.premisses[0]
                w2 = _adapt_witness(witness, d2.conclusion, prem.conclusion, pos2, a)
                sub = _sr_modal(a, d1, prem, pos2, w2, mon)
                return _rebuild(target, d2.rule, (sub,))
            smaller = Derivation(
                d2.conclusion.replace_component(
                    last2,
                    Component(d2.conclusion.last.ant.remove_one(a),
                              d2.conclusion.last.succ,
                              tag=d2.conclusion.last.tag)),
                d2.rule, d2.premisses)
            out = _try_embed(smaller, target)
            if out is None:
                raise TransformError("sr_modal restart case: weakening failed")
            return out

        if d2.rule is RuleId.EW:
            if pos2 < last2:
                sub = _sr_modal(a, d1, d2.premisses[0], pos2, witness, mon)
                return _rebuild(target, RuleId.EW, (sub,))
            out = _try_embed(d2.premisses[0], target)
            if out is None:
                raise TransformError("sr_modal ew case: weakening failed")
            return out

        subs = []
        for p in d2.premisses:
            w2 = _adapt_witness(witness, d2.conclusion, p.conclusion, pos2, a)
            subs.append(_sr_modal(a, d1, p, pos2, w2, mon))
        return _rebuild(target, d2.rule, tuple(subs))
    finally:
        mon.exit()


def cut(d1: Derivation, d2: Derivation, cut_formula: Formula,
        monitor: CutMonitor | None = None) -> Derivation:
    """Cut-free derivation of the merged conclusion minus the cut occurrences.

    d1 must conclude with the cut formula in its last succedent, d2 with the
    cut formula in its last antecedent, over structurally equivalent
    sequents; only the full system with the two-premiss box rules supports
    the reduction.
    """
    for d in (d1, d2):
        if infer_variant(d) is not CalculusVariant.KT:
            raise ValueError("cut is defined for the full calculus only")
        res = check(d, CalculusVariant.KT)
        if not res:
            raise TransformError(f"cut premiss does not check: {res.message}")
    if d1.conclusion.links != d2.conclusion.links:
        raise StructuralMismatch(
            f"{d1.conclusion.render()} vs {d2.conclusion.render()}")
    if cut_formula not in d1.conclusion.last.succ:
        raise NotACutFormulaOccurrence(f"{print_ascii(cut_formula)} not in left succedent")
    if cut_formula not in d2.conclusion.last.ant:
        raise NotACutFormulaOccurrence(f"{print_ascii(cut_formula)} not in right antecedent")
    mon = monitor if monitor is not None else CutMonitor()
    out = _sl(cut_formula, d1, d1.conclusion.length - 1, d2, mon)
    expected = _cut_target(d1.conclusion, d2.conclusion, d1.conclusion.length - 1, cut_formula)
    if not _sequents_equal(out.conclusion, expected):
        raise TransformError("cut concluded the wrong sequent")
    if mon.violations:
        raise TransformError(f"cut measure violated: {mon.violations[0]}")
    return _recheck(out, CalculusVariant.KT, "cut")


# --- serialization ------------------------------------------------------------


def derivation_to_json(d: Derivation) -> dict:
    return {
        "sequent": d.conclusion.to_json(),
        "rule": d.rule.value,
        "premisses": [derivation_to_json(p) for p in d.premisses],
    }


def derivation_from_json(data: dict) -> Derivation:
    return Derivation(
        LinearNestedSequent.from_json(data["sequent"]),
        RuleId(data["rule"]),
        tuple(derivation_from_json(p) for p in data.get("premisses", [])),
    )


_LATEX_SUBS = {
    "\\": r"\textbackslash{}", "&": r"\&", "%": r"\%", "#": r"\#",
    "_": r"\_", "{": r"\{", "}": r"\}", "~": r"\textasciitilde{}",
    "^": r"\textasciicircum{}",
}


def _latex_escape(s: str) -> str:
    return "".join(_LATEX_SUBS.get(c, c) for c in s)


def derivation_to_latex(d: Derivation) -> str:
    """Proof-tree markup in bussproofs style."""
    lines: list[str] = []

    def emit(n: Derivation):
        for p in n.premisses:
            emit(p)
        if not n.premisses:
            lines.append(r"\AxiomC{}")
        lines.append(rf"\RightLabel{{\scriptsize {_latex_escape(n.rule.value)}}}")
        cmd = {0: "UnaryInfC", 1: "UnaryInfC", 2: "BinaryInfC", 3: "TrinaryInfC"}[len(n.premisses)]
        lines.append(rf"\{cmd}{{\texttt{{{_latex_escape(n.conclusion.render())}}}}}")

    emit(d)
    return "\n".join([r"\begin{prooftree}", *lines, r"\end{prooftree}"])

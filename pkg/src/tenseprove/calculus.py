"""Inference rules of the three linear nested sequent calculi.

Rules are enumerated as RuleInstance values carrying their premisses, so the
same code serves backward search (saturating=True, with the side conditions
that force progress) and derivation checking (saturating=False, schema only).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .formula import Atom, BlackBox, Bottom, Box, Formula, Implies, Polarity
from .sequent import Component, LinearNestedSequent, Multiset, fresh_tag


class CalculusVariant(enum.Enum):
    KT = "kt"
    KT_STAR = "kt-star"
    KB = "kb"


class RuleId(enum.Enum):
    ID = "id"
    BOT_L = "botL"
    IMP_R = "impR"
    IMP_L = "impL"
    BOX_R1 = "boxR1"
    BBOX_R1 = "bboxR1"
    BOX_R2 = "boxR2"
    BBOX_R2 = "bboxR2"
    BOX_L1 = "boxL1"
    BBOX_L1 = "bboxL1"
    BOX_L2 = "boxL2"
    BBOX_L2 = "bboxL2"
    EW = "ew"
    BOX_R = "boxR"
    BBOX_R = "bboxR"
    KB_BOX_R = "kb.boxR"
    KB_BOX_L1 = "kb.boxL1"
    KB_BOX_L2 = "kb.boxL2"


RESTART_RULES = frozenset((RuleId.BOX_L2, RuleId.BBOX_L2, RuleId.KB_BOX_L2))
PROPAGATION_RULES = frozenset((RuleId.BOX_L1, RuleId.BBOX_L1, RuleId.KB_BOX_L1))
RIGHT_BOX_RULES = frozenset(
    (RuleId.BOX_R1, RuleId.BBOX_R1, RuleId.BOX_R2, RuleId.BBOX_R2,
     RuleId.BOX_R, RuleId.BBOX_R, RuleId.KB_BOX_R)
)
TWO_PREMISS_BOX_RULES = frozenset((RuleId.BOX_R1, RuleId.BBOX_R1))

RULES_BY_VARIANT = {
    CalculusVariant.KT: frozenset(
        (RuleId.ID, RuleId.BOT_L, RuleId.IMP_R, RuleId.IMP_L, RuleId.EW,
         RuleId.BOX_R1, RuleId.BBOX_R1, RuleId.BOX_R2, RuleId.BBOX_R2,
         RuleId.BOX_L1, RuleId.BBOX_L1, RuleId.BOX_L2, RuleId.BBOX_L2)
    ),
    CalculusVariant.KT_STAR: frozenset(
        (RuleId.ID, RuleId.BOT_L, RuleId.IMP_R, RuleId.IMP_L, RuleId.EW,
         RuleId.BOX_R, RuleId.BBOX_R,
         RuleId.BOX_L1, RuleId.BBOX_L1, RuleId.BOX_L2, RuleId.BBOX_L2)
    ),
    CalculusVariant.KB: frozenset(
        (RuleId.ID, RuleId.BOT_L, RuleId.IMP_R, RuleId.IMP_L, RuleId.EW,
         RuleId.KB_BOX_R, RuleId.KB_BOX_L1, RuleId.KB_BOX_L2)
    ),
}


class VariantMismatch(Exception):
    pass


class NotApplicable(Exception):
    pass


@dataclass(frozen=True)
class RuleInstance:
    rule: RuleId
    position: int
    principal: Formula | None
    premisses: tuple[LinearNestedSequent, ...]


def _check_variant(s: LinearNestedSequent, v: CalculusVariant):
    if v is CalculusVariant.KB and any(link is Polarity.BACKWARD for link in s.links):
        raise VariantMismatch("KB sequents use forward links only")


def _fresh_component(body: Formula, tags) -> Component:
    return Component(Multiset(), Multiset((body,)), tag=tags())


def _restart_premiss(s: LinearNestedSequent, body: Formula) -> LinearNestedSequent:
    shorter = s.drop_last()
    absorber = shorter.last
    absorber = replace(absorber, ant=absorber.ant.add(body), restarts=absorber.restarts + 1)
    return shorter.replace_component(shorter.length - 1, absorber)


def _terminal_instances(s: LinearNestedSequent) -> list[RuleInstance]:
    last, i = s.last, s.length - 1
    out = []
    for f in last.ant.distinct():
        if isinstance(f, Atom) and f in last.succ:
            out.append(RuleInstance(RuleId.ID, i, f, ()))
    if Bottom() in last.ant:
        out.append(RuleInstance(RuleId.BOT_L, i, Bottom(), ()))
    return out


def _cpl_instances(s: LinearNestedSequent, saturating: bool) -> list[RuleInstance]:
    last, i = s.last, s.length - 1
    out = []
    for f in last.succ.distinct():
        if isinstance(f, Implies):
            if saturating and f.left in last.ant and f.right in last.succ:
                continue
            p = s.replace_component(i, last.with_ant(f.left).with_succ(f.right))
            out.append(RuleInstance(RuleId.IMP_R, i, f, (p,)))
    for f in last.ant.distinct():
        if isinstance(f, Implies):
            if saturating and (f.right in last.ant or f.left in last.succ):
                continue
            p1 = s.replace_component(i, last.with_ant(f.right))
            p2 = s.replace_component(i, last.with_succ(f.left))
            out.append(RuleInstance(RuleId.IMP_L, i, f, (p1, p2)))
    return out


def _propagation_instances(s, v, saturating) -> list[RuleInstance]:
    if s.length < 2:
        return []
    last, second = s.last, s.components[-2]
    link = s.links[-1]
    out = []

    def emit(rule, kind):
        for f in second.ant.distinct():
            if isinstance(f, kind):
                if saturating and f.body in last.ant:
                    continue
                p = s.replace_component(s.length - 1, last.with_ant(f.body))
                out.append(RuleInstance(rule, s.length - 2, f, (p,)))

    if v is CalculusVariant.KB:
        if link is Polarity.FORWARD:
            emit(RuleId.KB_BOX_L1, Box)
    else:
        if link is Polarity.FORWARD:
            emit(RuleId.BOX_L1, Box)
        else:
            emit(RuleId.BBOX_L1, BlackBox)
    return out


def _restart_instances(s, v, saturating) -> list[RuleInstance]:
    if s.length < 2:
        return []
    last, second = s.last, s.components[-2]
    link = s.links[-1]
    out = []

    def emit(rule, kind):
        for f in last.ant.distinct():
            if isinstance(f, kind):
                if saturating and f.body in second.ant:
                    continue
                out.append(RuleInstance(rule, s.length - 1, f, (_restart_premiss(s, f.body),)))

    if v is CalculusVariant.KB:
        if link is Polarity.FORWARD:
            emit(RuleId.KB_BOX_L2, Box)
    else:
        if link is Polarity.BACKWARD:
            emit(RuleId.BOX_L2, Box)
        else:
            emit(RuleId.BBOX_L2, BlackBox)
    return out


def _box_instances(s, v, saturating, tags) -> list[RuleInstance]:
    last, i = s.last, s.length - 1
    link = s.links[-1] if s.length > 1 else None
    second = s.components[-2] if s.length > 1 else None
    out = []

    def extend(direction, body):
        return s.extend(direction, _fresh_component(body, tags))

    if v is CalculusVariant.KT:
        for f in last.succ.distinct():
            if isinstance(f, Box) and link is Polarity.BACKWARD:
                # Two-premiss form: the body may also be falsified at the
                # predecessor itself.  When it already is, the instance adds
                # nothing the search could use.
                if saturating and f.body in second.succ:
                    continue
                left = s.replace_component(s.length - 2, second.with_succ(f.body))
                out.append(RuleInstance(RuleId.BOX_R1, i, f, (left, extend(Polarity.FORWARD, f.body))))
        for f in last.succ.distinct():
            if isinstance(f, BlackBox) and link is Polarity.FORWARD:
                if saturating and f.body in second.succ:
                    continue
                left = s.replace_component(s.length - 2, second.with_succ(f.body))
                out.append(RuleInstance(RuleId.BBOX_R1, i, f, (left, extend(Polarity.BACKWARD, f.body))))
        for f in last.succ.distinct():
            if isinstance(f, Box) and link is not Polarity.BACKWARD:
                out.append(RuleInstance(RuleId.BOX_R2, i, f, (extend(Polarity.FORWARD, f.body),)))
        for f in last.succ.distinct():
            if isinstance(f, BlackBox) and link is not Polarity.FORWARD:
                out.append(RuleInstance(RuleId.BBOX_R2, i, f, (extend(Polarity.BACKWARD, f.body),)))
    elif v is CalculusVariant.KT_STAR:
        for f in last.succ.distinct():
            if isinstance(f, Box):
                out.append(RuleInstance(RuleId.BOX_R, i, f, (extend(Polarity.FORWARD, f.body),)))
        for f in last.succ.distinct():
            if isinstance(f, BlackBox):
                out.append(RuleInstance(RuleId.BBOX_R, i, f, (extend(Polarity.BACKWARD, f.body),)))
    else:
        for f in last.succ.distinct():
            if isinstance(f, Box):
                out.append(RuleInstance(RuleId.KB_BOX_R, i, f, (extend(Polarity.FORWARD, f.body),)))
    return out


def saturation_instance(s, v, tags=fresh_tag) -> RuleInstance | None:
    """First applicable instance from the non-box priority classes."""
    _check_variant(s, v)
    for group in (
        _terminal_instances(s),
        _cpl_instances(s, True),
        _propagation_instances(s, v, True),
        _restart_instances(s, v, True),
    ):
        if group:
            return group[0]
    return None


def box_instances(s, v, saturating=True, tags=fresh_tag) -> list[RuleInstance]:
    _check_variant(s, v)
    return _box_instances(s, v, saturating, tags)


def applicable_rules(s, v, saturating, tags=fresh_tag) -> list[RuleInstance]:
    """Every rule instance whose conclusion matches s, in a fixed order.

    With saturating=True the termination side conditions are imposed and EW
    is excluded; this is the enumeration backward search works from.
    """
    _check_variant(s, v)
    out = []
    out.extend(_terminal_instances(s))
    out.extend(_cpl_instances(s, saturating))
    out.extend(_propagation_instances(s, v, saturating))
    out.extend(_restart_instances(s, v, saturating))
    out.extend(_box_instances(s, v, saturating, tags))
    if not saturating and s.length >= 2:
        out.append(RuleInstance(RuleId.EW, s.length - 1, None, (s.drop_last(),)))
    return out


def premisses(s, inst: RuleInstance, v) -> tuple[LinearNestedSequent, ...]:
    if not is_valid_instance(s, inst.rule, inst.premisses, v):
        raise NotApplicable(f"{inst.rule.value} does not apply to {s.render()}")
    return inst.premisses


def _sequents_equal(a: LinearNestedSequent, b: LinearNestedSequent) -> bool:
    return a.links == b.links and all(
        x.ant == y.ant and x.succ == y.succ for x, y in zip(a.components, b.components)
    )


def is_valid_instance(conclusion, rule: RuleId, prems, v) -> bool:
    """True iff (conclusion, rule, prems) matches some enumerated instance.

    Premisses are compared componentwise as multisets, in schema order;
    identity tags never matter here.
    """
    if rule not in RULES_BY_VARIANT[v]:
        return False
    try:
        candidates = applicable_rules(conclusion, v, saturating=False)
    except VariantMismatch:
        return False
    prems = tuple(prems)
    for inst in candidates:
        if inst.rule is not rule or len(inst.premisses) != len(prems):
            continue
        if all(_sequents_equal(p, q) for p, q in zip(inst.premisses, prems)):
            return True
    return False

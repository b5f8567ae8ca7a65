import random

import pytest
from hypothesis import given

from conftest import small_sequents
from tenseprove.calculus import (
    RESTART_RULES,
    CalculusVariant,
    RuleId,
    VariantMismatch,
    applicable_rules,
    box_instances,
    is_valid_instance,
    premisses,
    NotApplicable,
)
from tenseprove.formula import Atom, BlackBox, Bottom, Box, Implies, Polarity, parse, desugar
from tenseprove.semantics import KripkeModel, falsifies
from tenseprove.sequent import LinearNestedSequent, component, single
from tenseprove.metatheory import Derivation, check

KT, KTS, KB = CalculusVariant.KT, CalculusVariant.KT_STAR, CalculusVariant.KB
FWD, BWD = Polarity.FORWARD, Polarity.BACKWARD
p, q, r = Atom("p"), Atom("q"), Atom("r")


def seq(*parts):
    comps = [parts[0]]
    links = []
    for link, c in zip(parts[1::2], parts[2::2]):
        links.append(link)
        comps.append(c)
    return LinearNestedSequent(tuple(comps), tuple(links))


def test_saturated_sequent_offers_the_three_box_instances():
    # r => [F]p, [F]q, [P]X with X the expanded negated box
    x = desugar(parse("~[F]~r"))
    s = single([r], [Box(p), Box(q), BlackBox(x)])
    insts = box_instances(s, KT)
    assert [i.rule for i in insts] == [RuleId.BOX_R2, RuleId.BOX_R2, RuleId.BBOX_R2]
    assert [i.principal for i in insts] == [Box(p), Box(q), BlackBox(x)]


def test_id_instance():
    insts = applicable_rules(single([p], [p]), KT, True)
    assert insts[0].rule is RuleId.ID and insts[0].premisses == ()


def test_bbox_l2_deletes_last_component():
    s = seq(component(), FWD, component([BlackBox(p)], []))
    insts = [i for i in applicable_rules(s, KT, True) if i.rule is RuleId.BBOX_L2]
    assert len(insts) == 1
    prem = insts[0].premisses[0]
    assert prem.length == 1 and p in prem.components[0].ant


def test_imp_r_premiss_keeps_principal():
    f = Implies(p, q)
    s = single([], [f])
    inst = next(i for i in applicable_rules(s, KT, True) if i.rule is RuleId.IMP_R)
    prem = inst.premisses[0]
    assert f in prem.last.succ and p in prem.last.ant and q in prem.last.succ


def test_box_r1_two_premisses():
    s = seq(component([p], [q]), BWD, component([], [Box(p)]))
    inst = next(i for i in applicable_rules(s, KT, False) if i.rule is RuleId.BOX_R1)
    left, right = inst.premisses
    assert left.length == 2 and p in left.components[0].succ
    assert right.length == 3 and right.links[-1] is FWD
    assert right.components[-1].succ.count(p) == 1 and not right.components[-1].ant


def test_ew_drops_last_only_when_not_saturating():
    s = seq(component([p], []), FWD, component([q], []))
    non_sat = [i for i in applicable_rules(s, KT, False) if i.rule is RuleId.EW]
    sat = [i for i in applicable_rules(s, KT, True) if i.rule is RuleId.EW]
    assert len(non_sat) == 1 and non_sat[0].premisses[0].length == 1
    assert not sat


def test_side_conditions_block_reapplication():
    # impR already applied: A in Gamma and B in Delta
    f = Implies(p, q)
    s = single([p], [f, q])
    assert all(i.rule is not RuleId.IMP_R for i in applicable_rules(s, KT, True))
    assert any(i.rule is RuleId.IMP_R for i in applicable_rules(s, KT, False))
    # impL blocked when either side formula is present
    g = Implies(p, q)
    s2 = single([g, q], [])
    assert all(i.rule is not RuleId.IMP_L for i in applicable_rules(s2, KT, True))
    # propagation blocked when the body is already there
    s3 = seq(component([Box(p)], []), FWD, component([p], []))
    assert all(i.rule is not RuleId.BOX_L1 for i in applicable_rules(s3, KT, True))
    # restart blocked when the absorber already has the body
    s4 = seq(component([p], []), BWD, component([Box(p)], []))
    assert all(i.rule is not RuleId.BOX_L2 for i in applicable_rules(s4, KT, True))


def test_variant_availability():
    s = seq(component(), FWD, component([], [Box(p)]))
    kt_rules = {i.rule for i in applicable_rules(s, KT, False)}
    kts_rules = {i.rule for i in applicable_rules(s, KTS, False)}
    kb_rules = {i.rule for i in applicable_rules(s, KB, False)}
    assert RuleId.BOX_R2 in kt_rules and RuleId.BOX_R not in kt_rules
    assert RuleId.BOX_R in kts_rules and RuleId.BOX_R2 not in kts_rules
    assert RuleId.KB_BOX_R in kb_rules and RuleId.BOX_R not in kb_rules


def test_kb_rejects_backward_links():
    s = seq(component(), BWD, component())
    with pytest.raises(VariantMismatch):
        applicable_rules(s, KB, True)


def test_is_valid_instance_trivia():
    assert is_valid_instance(single([p], [p]), RuleId.ID, (), KT)
    assert not is_valid_instance(single([p], [q]), RuleId.ID, (), KT)
    assert not is_valid_instance(single([p], [p]), RuleId.BOX_R, (), KT)


def example4_derivation():
    """Hand-built derivation of (r => [F]p, [F]q, [P]~[F]~r), desugared."""
    notr = Implies(r, Bottom())
    x = Implies(Box(notr), Bottom())          # ~[F]~r
    base = [Box(p), Box(q), BlackBox(x)]
    s0 = single([r], base)
    s1 = LinearNestedSequent(
        (s0.components[0], component([], [x])), (BWD,))
    s2 = LinearNestedSequent(
        (s0.components[0], component([Box(notr)], [x, Bottom()])), (BWD,))
    s3 = single([r, notr], base)
    s4 = single([r, notr, Bottom()], base)
    s5 = single([r, notr], base + [r])
    d = Derivation(s0, RuleId.BBOX_R2, (
        Derivation(s1, RuleId.IMP_R, (
            Derivation(s2, RuleId.BOX_L2, (
                Derivation(s3, RuleId.IMP_L, (
                    Derivation(s4, RuleId.BOT_L),
                    Derivation(s5, RuleId.ID),
                )),
            )),
        )),
    ))
    return d


def test_example4_derivation_validates_node_by_node():
    d = example4_derivation()
    stack = [d]
    while stack:
        n = stack.pop()
        assert is_valid_instance(
            n.conclusion, n.rule, [c.conclusion for c in n.premisses], KT)
        stack.extend(n.premisses)
    assert check(d, KT)


def test_premisses_rejects_forged_instance():
    s = single([p], [p])
    inst = applicable_rules(s, KT, False)[0]
    assert premisses(s, inst, KT) == inst.premisses
    other = single([], [Implies(q, q)])
    bad = next(i for i in applicable_rules(other, KT, False) if i.rule is RuleId.IMP_R)
    with pytest.raises(NotApplicable):
        premisses(s, bad, KT)


@given(small_sequents(max_len=2))
def test_progress_under_saturation(s):
    for inst in applicable_rules(s, KT, True):
        for prem in inst.premisses:
            same = prem.links == s.links and all(
                a.ant == b.ant and a.succ == b.succ
                for a, b in zip(prem.components, s.components))
            assert not same


@given(small_sequents(max_len=3))
def test_end_active(s):
    """Every premiss keeps activity at the end: its last component differs
    from the conclusion's, or the rule deleted/created the last component."""
    for inst in applicable_rules(s, KT, False):
        for prem in inst.premisses:
            if prem.length != s.length:
                continue
            changed = not (prem.last.ant == s.last.ant and prem.last.succ == s.last.succ)
            has_principal_at_end = (
                inst.principal is not None
                and (inst.principal in s.last.ant or inst.principal in s.last.succ)
            )
            assert changed or has_principal_at_end


def _random_model(rng, k, atoms=("p", "q")):
    worlds = tuple(f"w{i}" for i in range(k))
    edges = frozenset((a, b) for a in worlds for b in worlds if rng.random() < 0.45)
    val = {w: frozenset(a for a in atoms if rng.random() < 0.5) for w in worlds}
    return KripkeModel(worlds, edges, {w: s for w, s in val.items() if s})


def test_rule_local_soundness_propositional_and_restart():
    """Whenever a model falsifies the conclusion of a propositional,
    propagation, or restart instance, the same model falsifies a premiss."""
    rng = random.Random(99)
    from tenseprove.generate import random_core_formula

    checked = 0
    while checked < 1000:
        n = rng.randint(1, 3)
        comps = tuple(
            component(
                [random_core_formula(rng, ("p", "q"), 4, 1) for _ in range(rng.randint(0, 2))],
                [random_core_formula(rng, ("p", "q"), 4, 1) for _ in range(rng.randint(0, 2))],
            )
            for _ in range(n)
        )
        links = tuple(rng.choice([FWD, BWD]) for _ in range(n - 1))
        s = LinearNestedSequent(comps, links)
        local = frozenset((RuleId.IMP_R, RuleId.IMP_L, RuleId.BOX_L1,
                           RuleId.BBOX_L1)) | RESTART_RULES
        insts = [i for i in applicable_rules(s, KT, False) if i.rule in local]
        if not insts:
            continue
        inst = rng.choice(insts)
        m = _random_model(rng, rng.randint(1, 3))
        w = rng.choice(m.worlds)
        if falsifies(m, w, s):
            assert any(falsifies(m, w, prem) for prem in inst.premisses), (
                s.render(), inst.rule)
        checked += 1


def _collapse_sequent(s):
    def cb(f):
        from tenseprove.formula import collapse_backward
        return collapse_backward(f)
    comps = tuple(
        component([cb(f) for f in c.ant.distinct() for _ in range(c.ant.count(f))],
                  [cb(f) for f in c.succ.distinct() for _ in range(c.succ.count(f))])
        for c in s.components)
    return LinearNestedSequent(comps, tuple(FWD for _ in s.links))


_KB_IMAGE = {
    RuleId.ID: RuleId.ID, RuleId.BOT_L: RuleId.BOT_L, RuleId.IMP_R: RuleId.IMP_R,
    RuleId.IMP_L: RuleId.IMP_L, RuleId.EW: RuleId.EW,
    RuleId.BOX_R: RuleId.KB_BOX_R, RuleId.BBOX_R: RuleId.KB_BOX_R,
    RuleId.BOX_L1: RuleId.KB_BOX_L1, RuleId.BBOX_L1: RuleId.KB_BOX_L1,
    RuleId.BOX_L2: RuleId.KB_BOX_L2, RuleId.BBOX_L2: RuleId.KB_BOX_L2,
}


@given(small_sequents(max_len=3))
def test_collapsed_kt_instances_are_kb_instances(s):
    """Identifying the two modalities and both link directions maps every
    starred-rule instance onto a KB instance."""
    collapsed = _collapse_sequent(s)
    kb_keys = {
        (i.rule, tuple(pr.render() for pr in i.premisses))
        for i in applicable_rules(collapsed, KB, False)
    }
    for i in applicable_rules(s, KTS, False):
        key = (_KB_IMAGE[i.rule],
               tuple(_collapse_sequent(pr).render() for pr in i.premisses))
        assert key in kb_keys, (s.render(), i.rule)


@given(small_sequents(max_len=3))
def test_kb_instances_are_collapse_images(s):
    """Every KB instance arises by collapsing a starred-rule instance on a
    preimage sequent: the sequent itself, except that the symmetry restart
    comes from the backward restart with the principal read as a past box."""
    collapsed = _collapse_sequent(s)
    for i in applicable_rules(collapsed, KB, False):
        if i.rule is RuleId.KB_BOX_L2:
            ants = _expanded(collapsed.last.ant)
            ants[ants.index(i.principal)] = BlackBox(i.principal.body)
            pre = collapsed.replace_component(
                collapsed.length - 1,
                component(ants, _expanded(collapsed.last.succ)),
            )
            pre_insts = applicable_rules(pre, KTS, False)
            match = [
                j for j in pre_insts
                if j.rule is RuleId.BBOX_L2 and j.principal == BlackBox(i.principal.body)
            ]
        else:
            pre_insts = applicable_rules(collapsed, KTS, False)
            match = [j for j in pre_insts if _KB_IMAGE.get(j.rule) is i.rule
                     and j.principal == i.principal]
        assert match, (collapsed.render(), i.rule)
        want = tuple(pr.render() for pr in i.premisses)
        got = {tuple(_collapse_sequent(pr).render() for pr in j.premisses) for j in match}
        assert want in got, (collapsed.render(), i.rule)


def _expanded(ms):
    out = []
    for f in ms.distinct():
        out.extend([f] * ms.count(f))
    return out

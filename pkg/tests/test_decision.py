import random

import pytest

from conftest import FORK, all_relations, all_valuations, is_reflexive, is_transitive, naive_holds
from epistemic.decision import (Countermodel, NoneUpTo, Sat, Unsat, Valid,
                                bounded_countermodel, consistent, decide_valid,
                                enumerate_mcs, extend_mcs, tableau_sat)
from epistemic.formula import SchemaName, Var, conjunct, instantiate_schema, neg, parse
from epistemic.generators import random_formula
from epistemic.kripke import CapExceeded, FrameClass, class_check, evaluate

p = Var("p")
TWO = instantiate_schema(SchemaName.Ax2, 1, p)
WDP = FrameClass.WEAKLY_DIRECTED_PREORDER


def test_tableau_examples():
    sat = tableau_sat("S4", parse("p & ~K1 p"))
    assert isinstance(sat, Sat) and sat.witness.model.frame.size == 2
    assert tableau_sat("S4", parse("~(K1 p -> p)")) == Unsat()
    k = tableau_sat("K", parse("~(K1 p -> p)"))
    assert isinstance(k, Sat) and k.witness.model.frame.size == 1
    assert k.witness.model.frame.relation(1) == frozenset()


def test_tableau_rejects_other_logics_and_big_formulas():
    with pytest.raises(ValueError):
        tableau_sat("S5", p)
    big = conjunct(Var(f"x{k}") for k in range(250))
    with pytest.raises(CapExceeded):
        tableau_sat("S4", big)


def test_decide_valid_examples():
    assert decide_valid("S4", parse("K1 p -> p")) == Valid()
    assert isinstance(decide_valid("S4", TWO), Countermodel)
    assert decide_valid("K", parse("p -> p")) == Valid()
    cm = decide_valid("K", parse("K1 p -> K1 K1 p"))
    assert isinstance(cm, Countermodel)
    assert not evaluate(cm.witness.model, cm.witness.world, parse("K1 p -> K1 K1 p"))


def test_s4_witnesses_are_preorders():
    rng = random.Random(8)
    for _ in range(150):
        f = random_formula(rng, 4, (1, 2), ("p", "q"))
        res = tableau_sat("S4", f)
        if isinstance(res, Sat):
            m = res.witness.model
            assert evaluate(m, res.witness.world, f)
            assert all(class_check(m.frame, a, FrameClass.PREORDER) for a in m.frame.agents)


def _naive_s4_sat(f, max_worlds):
    """Brute-force satisfiability over every one-agent preorder model."""
    for n in range(1, max_worlds + 1):
        for r in all_relations(n):
            if not (is_reflexive(n, r) and is_transitive(r)):
                continue
            for val in all_valuations(n, ["p", "q"]):
                if any(naive_holds(n, {1: r}, val, w, f) for w in range(n)):
                    return True
    return False


def test_tableau_against_naive_search():
    rng = random.Random(21)
    for _ in range(60):
        f = random_formula(rng, 3, (1,), ("p", "q"))
        assert isinstance(tableau_sat("S4", f), Sat) == _naive_s4_sat(f, 3)


def test_bounded_countermodel_examples():
    assert bounded_countermodel(WDP, TWO, 4) == NoneUpTo(4)
    fork = bounded_countermodel(FrameClass.PREORDER, TWO, 3)
    assert isinstance(fork, Countermodel)
    assert fork.witness.world == 0
    assert fork.witness.model.frame.relation(1) == FORK
    assert fork.witness.model.valuation == {"p": frozenset({1})}
    gap = bounded_countermodel(WDP, parse("L1 p -> K1 L1 p"), 2)
    assert isinstance(gap, Countermodel)
    assert gap.witness.model.frame.relation(1) == {(0, 0), (1, 1), (0, 1)}
    assert gap.witness.model.valuation == {"p": frozenset({0})} and gap.witness.world == 0


def test_bounded_countermodel_caps():
    with pytest.raises(CapExceeded):
        bounded_countermodel(WDP, TWO, 6)
    with pytest.raises(CapExceeded):
        bounded_countermodel(WDP, parse("p | q | r | s"), 2)


def test_bounded_search_matches_naive_refutation():
    rng = random.Random(13)
    for _ in range(40):
        f = random_formula(rng, 3, (1,), ("p",))
        found = bounded_countermodel(FrameClass.PREORDER, f, 3)
        refutable = _naive_s4_sat(neg(f), 3)
        assert isinstance(found, Countermodel) == refutable


def test_consistent_examples():
    assert not consistent("S4", [parse("K1 p"), parse("~p")])
    assert consistent("K", [parse("K1 p"), parse("~p")])
    assert consistent("S4", [])


def test_enumerate_mcs_examples():
    sets = [s.members for s in enumerate_mcs("K", [p])]
    assert sets == [(p,), (neg(p),)]
    conj = parse("p & q")
    closure = [Var("p"), Var("q"), conj]
    for s in enumerate_mcs("K", closure):
        if Var("p") in s and Var("q") in s:
            assert conj in s
    kp = parse("K1 p")
    assert all(not (kp in s and neg(p) in s) for s in enumerate_mcs("S4", [kp, p]))


def test_extend_mcs_examples():
    kp = parse("K1 p")
    assert extend_mcs("S4", [kp], [kp, p]).members == (kp, p)
    assert extend_mcs("K", [], [p]).members == (p,)
    assert extend_mcs("K", [neg(p)], [p]).members == (neg(p),)
    with pytest.raises(ValueError):
        extend_mcs("K", [parse("q")], [p])
    with pytest.raises(ValueError):
        extend_mcs("S4", [kp, neg(p)], [kp, p])
    with pytest.raises(CapExceeded):
        list(enumerate_mcs("K", [Var(f"v{k}") for k in range(13)]))

import random

import pytest

from epistemic.decision import NoneUpTo, bounded_countermodel
from epistemic.formula import Know, SchemaName, Var, parse, variables_of
from epistemic.generators import random_proof
from epistemic.kripke import FrameClass
from epistemic.hilbert import (S4, TOPOS4, Axiom, CheckError, Nec, Proof,
                               ProofBuilder, Step, Taut, check_proof)
from epistemic.theorems import s4_suite, topo_suite
from epistemic.toposys import (check_topo_proof, prove_axiom_K_topo,
                               prove_nec_topo, s4_to_topo, topo_to_s4)

p, q = Var("p"), Var("q")


def single(system, schema, *args):
    b = ProofBuilder(system)
    return b.build(b.instance(schema, 1, *args))


def test_prove_axiom_K_topo():
    assert check_topo_proof(prove_axiom_K_topo(1, p, q)) == parse("K1 p & K1 (p -> q) -> K1 q")
    assert check_topo_proof(prove_axiom_K_topo(1, p, p))
    assert check_topo_proof(prove_axiom_K_topo(1, Know(1, p), q))
    assert all(not isinstance(s.justification, Nec) for s in prove_axiom_K_topo(1, p, q).steps)


def test_prove_nec_topo():
    b = ProofBuilder(TOPOS4)
    base = b.build(b.taut(parse("p -> p")))
    assert check_topo_proof(prove_nec_topo(1, base)) == parse("K1 (p -> p)")
    n = single(TOPOS4, SchemaName.AxN)
    assert check_topo_proof(prove_nec_topo(2, n)) == parse("K2 K1 true")
    twice = prove_nec_topo(1, prove_nec_topo(1, base))
    assert check_topo_proof(twice) == parse("K1 K1 (p -> p)")


def test_prove_nec_topo_rejects_bad_input():
    bad = Proof((Step(parse("p"), Taut()),))
    with pytest.raises(CheckError):
        prove_nec_topo(1, bad)


def test_s4_to_topo_examples():
    nec = Proof((Step(parse("p -> p"), Taut()), Step(parse("K1 (p -> p)"), Nec(1, 1))))
    assert check_topo_proof(s4_to_topo(nec)) == parse("K1 (p -> p)")
    t = single(S4, SchemaName.AxT, p)
    assert check_topo_proof(s4_to_topo(t)) == t.conclusion
    k = single(S4, SchemaName.AxK, p, q)
    assert check_topo_proof(s4_to_topo(k)) == k.conclusion


def test_topo_to_s4_examples():
    n = single(TOPOS4, SchemaName.AxN)
    out = topo_to_s4(n)
    assert check_proof(S4, out) == parse("K1 true")
    kt = prove_axiom_K_topo(1, p, q)
    assert check_proof(S4, topo_to_s4(kt)) == kt.conclusion
    r = single(TOPOS4, SchemaName.AxR, p, q)
    assert check_proof(S4, topo_to_s4(r)) == r.conclusion


def test_translation_rejects_wrong_system():
    with pytest.raises(CheckError):
        s4_to_topo(single(TOPOS4, SchemaName.AxN))
    with pytest.raises(CheckError):
        topo_to_s4(Proof((Step(parse("p -> p"), Taut()), Step(parse("K1 (p -> p)"), Nec(1, 1)))))


def test_curated_suites():
    assert len(s4_suite()) >= 20 and len(topo_suite()) >= 20
    for th in s4_suite():
        assert check_topo_proof(s4_to_topo(th.proof)) == check_proof(S4, th.proof)
    for th in topo_suite():
        assert check_proof(S4, topo_to_s4(th.proof)) == check_topo_proof(th.proof)


def test_suites_cover_every_axiom():
    used = {s.justification.schema for th in topo_suite() for s in th.proof.steps
            if isinstance(s.justification, Axiom)}
    assert used == {SchemaName.AxN, SchemaName.AxR, SchemaName.AxT, SchemaName.Ax4}
    used = {s.justification.schema for th in s4_suite() for s in th.proof.steps
            if isinstance(s.justification, Axiom)}
    assert used == {SchemaName.AxK, SchemaName.AxT, SchemaName.Ax4}


@pytest.mark.parametrize("seed", range(25))
def test_random_round_trips(seed):
    s4 = random_proof(random.Random(seed), S4)
    assert check_proof(S4, topo_to_s4(s4_to_topo(s4))) == s4.conclusion
    topo = random_proof(random.Random(seed + 500), TOPOS4)
    assert check_topo_proof(s4_to_topo(topo_to_s4(topo))) == topo.conclusion


def test_translated_conclusions_hold_on_preorders():
    for th in topo_suite():
        f = check_proof(S4, topo_to_s4(th.proof))
        if len(variables_of(f)) <= 3:
            assert bounded_countermodel(FrameClass.PREORDER, f, 3) == NoneUpTo(3), th.name

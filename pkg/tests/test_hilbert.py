import random

import pytest

from conftest import naive_tautology
from epistemic.certificate import (CertificateError, check_certificate,
                                   format_certificate, parse_certificate)
from epistemic.decision import NoneUpTo, Valid, bounded_countermodel, decide_valid
from epistemic.formula import (And, Imp, Know, SchemaName, Var, conjunct,
                               imply, neg, parse)
from epistemic.generators import random_formula, random_proof
from epistemic.hilbert import (K, S4, S42, TO_CONJUNCT, TO_IMPLY, TOPOS4, Axiom,
                               CheckError, Mp, Nec, Proof, ProofBuilder, Rm, Step,
                               Taut, TooManyAtoms, check_deduction, check_proof,
                               is_tautology, prove_imply_conjunct_equiv,
                               prove_K_conj_imply_factor, prove_K_impl_form,
                               prove_K_over_conjunct, prove_K_thm)
from epistemic.kripke import FrameClass
from epistemic.theorems import BELIEF_PRINCIPLES, s42_suite

p, q, r = Var("p"), Var("q"), Var("r")


def proof(*steps):
    return Proof(tuple(Step(parse(f) if isinstance(f, str) else f, j) for f, j in steps))


def test_tautology_examples():
    assert is_tautology(parse("p -> p"))
    assert is_tautology(parse("K1 p -> K1 p"))
    assert not is_tautology(parse("K1 p -> p"))
    assert is_tautology(parse("K1 (p & q) | ~K1 (p & q)"))
    assert not is_tautology(parse("K1 (p & q) -> K1 (q & p)"))


def test_tautology_against_truth_tables():
    rng = random.Random(4)
    for _ in range(400):
        f = random_formula(rng, 4, (1,), ("p", "q"), sugar=True)
        assert is_tautology(f) == naive_tautology(f)


def test_tautology_atom_cap():
    wide = conjunct(Var(f"v{k}") for k in range(21))
    with pytest.raises(TooManyAtoms):
        is_tautology(Imp(wide, wide))


def test_check_proof_examples():
    assert check_proof(K, proof(("p -> p", Taut()))) == parse("p -> p")
    assert check_proof(K, proof(("p -> p", Taut()), ("K1 (p -> p)", Nec(1, 1)))) == parse("K1 (p -> p)")
    with pytest.raises(CheckError) as info:
        check_proof(K, proof(("K1 p -> p", Axiom(SchemaName.AxT))))
    assert info.value.step == 1


@pytest.mark.parametrize("steps, bad", [
    ([("p -> q", Taut())], 1),
    ([("p -> p", Taut()), ("p", Mp(1, 1))], 2),
    ([("p -> p", Taut()), ("K1 (p -> p)", Mp(3, 1))], 2),
    ([("p -> p", Taut()), ("K2 (p -> p)", Nec(1, 1))], 2),
    ([("K1 p -> p", Axiom(SchemaName.Ax4))], 1),
    ([("p -> p", Taut()), ("K1 p -> K1 p", Rm(1, 1))], 2),
])
def test_check_proof_rejections(steps, bad):
    with pytest.raises(CheckError) as info:
        check_proof(S4, proof(*steps))
    assert info.value.step == bad


def test_topo_rules():
    assert check_proof(TOPOS4, proof(("K1 true", Axiom(SchemaName.AxN))))
    assert check_proof(TOPOS4, proof(("p -> p", Taut()), ("K1 p -> K1 p", Rm(1, 1))))
    with pytest.raises(CheckError):
        check_proof(TOPOS4, proof(("p -> p", Taut()), ("K1 (p -> p)", Nec(1, 1))))
    with pytest.raises(CheckError):
        check_proof(TOPOS4, proof(("K1 (p -> q) & K1 p -> K1 q", Axiom(SchemaName.AxK))))


def test_check_deduction():
    assert check_deduction(K, [p], p, proof(("p -> p", Taut())))
    phi = parse("K1 (p -> p)")
    pr = proof(("p -> p", Taut()), ("K1 (p -> p)", Nec(1, 1)))
    assert check_deduction(K, [], phi, pr)
    assert check_deduction(K, [p, q], And(p, q), proof((Imp(p, Imp(q, And(p, q))), Taut())))
    # premise order and repetition are immaterial
    assert check_deduction(K, [q, p, p], And(p, q), proof((Imp(p, Imp(q, And(p, q))), Taut())))
    with pytest.raises(CheckError):
        check_deduction(K, [p], q, proof(("p -> p", Taut())))


def test_builder_reuses_proved_formulas():
    b = ProofBuilder(S4)
    assert b.taut(parse("p -> p")) == b.taut(parse("p -> p")) == 1
    with pytest.raises(ValueError):
        b.taut(parse("p -> q"))
    with pytest.raises(ValueError):
        b.instance(SchemaName.Ax2, 1, p)


@pytest.mark.parametrize("psis, phi", [
    ([], parse("p -> p")), ([p, q], p), ([p], parse("q -> p")), ([p, q, r], q), ([Know(1, p)], Know(1, p)),
])
@pytest.mark.parametrize("system", [K, S4, TOPOS4])
def test_imply_conjunct_equiv(system, psis, phi):
    b = ProofBuilder(system)
    src = b.build(b.taut(imply(psis, phi)))
    fwd = prove_imply_conjunct_equiv(system, psis, phi, TO_CONJUNCT, src)
    assert check_proof(system, fwd) == Imp(conjunct(psis), phi)
    back = prove_imply_conjunct_equiv(system, psis, phi, TO_IMPLY, fwd)
    assert check_proof(system, back) == imply(psis, phi)


def test_imply_conjunct_equiv_rejects_wrong_source():
    b = ProofBuilder(K)
    src = b.build(b.taut(parse("p -> p")))
    with pytest.raises(CheckError):
        prove_imply_conjunct_equiv(K, [q], p, TO_CONJUNCT, src)
    with pytest.raises(ValueError):
        prove_imply_conjunct_equiv(K, [], parse("p -> p"), "sideways", src)


@pytest.mark.parametrize("psis", [[], [p], [p, q], [p, Know(2, q), r, neg(p)]])
def test_K_over_conjunct(psis):
    fwd, bwd = prove_K_over_conjunct(K, 1, psis)
    boxed = conjunct(Know(1, x) for x in psis)
    assert check_proof(K, fwd) == Imp(Know(1, conjunct(psis)), boxed)
    assert check_proof(K, bwd) == Imp(boxed, Know(1, conjunct(psis)))
    with pytest.raises(ValueError):
        prove_K_over_conjunct(K, 1, [p] * 9)


def test_K_conj_imply_factor():
    pr = prove_K_conj_imply_factor(K, 1, p, q, r)
    assert check_proof(K, pr) == parse("((K1 p & K1 q) -> r) -> (K1 (p & q) -> r)")
    assert check_proof(K, prove_K_conj_imply_factor(K, 1, p, q, parse("false")))
    assert check_proof(K, prove_K_conj_imply_factor(K, 1, p, p, q))


def test_K_thm():
    assert check_proof(K, prove_K_thm(K, 1, p, q)) == parse("K1 p & L1 q -> L1 (p & q)")
    assert check_proof(K, prove_K_thm(K, 1, p, p))
    f = prove_K_thm(K, 1, p, q).conclusion
    assert bounded_countermodel(FrameClass.WEAKLY_DIRECTED_PREORDER, f, 4) == NoneUpTo(4)


def test_K_impl_form():
    assert check_proof(K, prove_K_impl_form(K, 2, p, q)) == parse("K2 (p -> q) -> K2 p -> K2 q")


@pytest.mark.parametrize("system", [K, S4, S42, TOPOS4])
def test_builders_in_every_system(system):
    rng = random.Random(system.name)
    for _ in range(10):
        a, c = random_formula(rng, 2), random_formula(rng, 2)
        assert check_proof(system, prove_K_thm(system, 1, a, c))
        assert check_proof(system, prove_K_conj_imply_factor(system, 2, a, c, p))


def test_builder_theorems_are_valid():
    for pr in (prove_K_thm(K, 1, p, q), prove_K_conj_imply_factor(K, 1, p, q, r),
               prove_K_impl_form(K, 1, p, q), *prove_K_over_conjunct(K, 1, [p, q])):
        assert decide_valid("K", pr.conclusion) == Valid()
        assert decide_valid("S4", pr.conclusion) == Valid()


def test_belief_principles():
    texts = {
        "positive introspection": "B1 p -> K1 B1 p",
        "negative introspection": "~B1 p -> K1 ~B1 p",
        "knowledge implies belief": "K1 p -> B1 p",
        "consistency of belief": "B1 p -> ~B1 ~p",
        "strong belief": "B1 p -> B1 K1 p",
    }
    for name, prover in BELIEF_PRINCIPLES.items():
        f = check_proof(S42, prover(1, p))
        assert f == parse(texts[name])
        assert bounded_countermodel(FrameClass.WEAKLY_DIRECTED_PREORDER, f, 4) == NoneUpTo(4)


def test_s42_suite_needs_dot2():
    suite = s42_suite()
    assert len(suite) >= 30
    needs = [th for th in suite if not isinstance(decide_valid("S4", th.formula), Valid)]
    # the .2 instances, introspection and belief conjunction are not S4 theorems
    assert len(needs) >= 5
    for th in needs:
        assert bounded_countermodel(FrameClass.WEAKLY_DIRECTED_PREORDER, th.formula, 4) == NoneUpTo(4)


@pytest.mark.parametrize("system", [S4, TOPOS4])
def test_certificate_roundtrip(system):
    for seed in range(20):
        pr = random_proof(random.Random(seed), system)
        text = format_certificate(system, pr)
        sys2, back = parse_certificate(text)
        assert sys2 is system and back == pr
        assert check_certificate(text) == pr.conclusion


def test_certificate_errors():
    with pytest.raises(CertificateError):
        parse_certificate("1: p -> p ; TAUT\n")
    with pytest.raises(CertificateError) as info:
        parse_certificate("system K\n1: p -> p ; TAUT\n3: p ; MP 1 1\n")
    assert info.value.line == 2
    with pytest.raises(CertificateError):
        parse_certificate("system K\n1: p -> ; TAUT\n")
    with pytest.raises(CertificateError):
        parse_certificate("system K\n1: p -> p ; FROB\n")
    with pytest.raises(CertificateError):
        parse_certificate("system Q\n1: p -> p ; TAUT\n")
    with pytest.raises(CheckError) as info:
        check_certificate("system S4\n1: p -> p ; TAUT\n2: K1 (p -> p) ; NEC 1 1\n3: K1 p ; MP 7 1\n")
    assert info.value.step == 3

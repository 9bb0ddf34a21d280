import random

from epistemic.formula import depth, render
from epistemic.generators import random_formula, random_proof
from epistemic.hilbert import S4, S42, TOPOS4, check_proof


def test_random_formula_deterministic_and_bounded():
    a = [random_formula(random.Random(s), 4) for s in range(50)]
    b = [random_formula(random.Random(s), 4) for s in range(50)]
    assert a == b
    assert all(depth(f) <= 5 for f in a)  # depth counts leaves as 1


def test_random_proofs_check():
    for system in (S4, S42, TOPOS4):
        for seed in range(15):
            pr = random_proof(random.Random(seed), system)
            assert check_proof(system, pr) == pr.conclusion


def test_random_proofs_vary():
    conclusions = {render(random_proof(random.Random(s), S4).conclusion) for s in range(30)}
    assert len(conclusions) > 20

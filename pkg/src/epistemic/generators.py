"""Seeded random formulas and proofs for property runs."""

from __future__ import annotations

import random
from typing import Sequence

from .formula import BOTTOM, And, Formula, Imp, Know, Or, Var, bel, neg, poss, size
from .hilbert import (Proof, ProofBuilder, System, box_mono, dia_mono,
                      necessitate, prove_K_conj_imply_factor, prove_K_thm)


def random_formula(rng: random.Random, depth: int, agents: Sequence[int] = (1, 2),
                   variables: Sequence[str] = ("p", "q"), sugar: bool = False) -> Formula:
    """Random primitive formula of depth at most ``depth``.

    With ``sugar`` the generator also emits negations, ``L_i`` and ``B_i``;
    these expand to primitives, so the depth bound then applies to the sugared
    shape only.
    """
    if depth <= 0 or rng.random() < 0.2:
        return BOTTOM if rng.random() < 0.1 else Var(rng.choice(list(variables)))
    ops = ["and", "or", "imp", "know", "know"]
    if sugar:
        ops += ["neg", "poss", "bel"]
    op = rng.choice(ops)
    sub = lambda: random_formula(rng, depth - 1, agents, variables, sugar)  # noqa: E731
    if op == "and":
        return And(sub(), sub())
    if op == "or":
        return Or(sub(), sub())
    if op == "imp":
        return Imp(sub(), sub())
    if op == "neg":
        return neg(sub())
    agent = rng.choice(list(agents))
    if op == "poss":
        return poss(agent, sub())
    if op == "bel":
        return bel(agent, sub())
    return Know(agent, sub())


def _random_tautology(rng: random.Random, a: Formula, c: Formula) -> Formula:
    return rng.choice([
        Imp(a, a),
        Imp(a, Imp(c, a)),
        Imp(And(a, c), c),
        Or(a, neg(a)),
        Imp(And(Imp(a, c), a), c),
        Imp(a, Or(c, a)),
    ])


def random_proof(rng: random.Random, system: System, steps: int = 8,
                 agents: Sequence[int] = (1, 2), variables: Sequence[str] = ("p", "q")) -> Proof:
    """A random proof in ``system`` built from the generic derived rules.

    Works for the normal systems with ``AxK`` and for ``TOPOS4``.
    """
    b = ProofBuilder(system)
    formula = lambda: random_formula(rng, 2, agents, variables)  # noqa: E731
    agent = lambda: rng.choice(list(agents))  # noqa: E731
    schemas = sorted(system.schemas, key=lambda s: s.value)
    proved: list = []
    for _ in range(steps):
        kinds = ["taut", "axiom", "axiom"]
        # keep tautology checks cheap by combining only modest formulas
        small = [j for j in proved if size(b.formula(j)) <= 40]
        if small:
            kinds += ["nec", "conj", "mp"]
        if any(isinstance(b.formula(j), Imp) for j in proved):
            kinds += ["mono", "mono", "dia"]
        kinds.append("builder")
        kind = rng.choice(kinds)
        if kind == "taut":
            j = b.taut(_random_tautology(rng, formula(), formula()))
        elif kind == "axiom":
            s = rng.choice(schemas)
            args = () if s.nullary else (formula(), formula()) if s.binary else (formula(),)
            j = b.instance(s, agent(), *args)
        elif kind == "nec":
            j = necessitate(b, rng.choice(small), agent())
        elif kind == "conj":
            x, y = rng.choice(small), rng.choice(small)
            j = b.glue([x, y], And(b.formula(x), b.formula(y)))
        elif kind == "mp":
            x = rng.choice(small)
            # build an implication out of x, then detach it again
            target = formula()
            imp = b.taut(Imp(b.formula(x), Or(b.formula(x), target)))
            j = b.mp(imp, x)
        elif kind in ("mono", "dia"):
            x = rng.choice([j for j in proved if isinstance(b.formula(j), Imp)])
            j = (box_mono if kind == "mono" else dia_mono)(b, x, agent())
        else:
            builder = rng.choice([prove_K_thm, prove_K_conj_imply_factor])
            args = (formula(), formula()) if builder is prove_K_thm else (formula(), formula(), formula())
            j = b.include(builder(system, agent(), *args))
        proved.append(j)
    return b.build(rng.choice(proved))

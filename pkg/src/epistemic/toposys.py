"""The topological axiomatisation of S4 and translations to and from S4.

Both translations work step by step and inline derivation templates, so the
output checks in the bare target kernel.
"""

from __future__ import annotations

from .formula import And, Formula, Imp, Know, SchemaName
from .hilbert import (S4, TOPOS4, Axiom, CheckError, Mp, Nec, Proof,
                      ProofBuilder, Rm, Taut, box_mono, check_proof,
                      k_and_join, k_and_split, k_top, necessitate)

TopoProof = Proof


def check_topo_proof(pr: TopoProof) -> Formula:
    return check_proof(TOPOS4, pr)


def prove_axiom_K_topo(i: int, phi: Formula, psi: Formula) -> TopoProof:
    """topoS4 proof of ``(K_i phi & K_i(phi -> psi)) -> K_i psi``."""
    b = ProofBuilder(TOPOS4)
    t = b.taut(Imp(And(phi, Imp(phi, psi)), psi))
    m = b.rm(t, i)
    r = b.instance(SchemaName.AxR, i, phi, Imp(phi, psi))
    goal = Imp(And(Know(i, phi), Know(i, Imp(phi, psi))), Know(i, psi))
    return b.build(b.glue([r, m], goal))


def prove_nec_topo(i: int, pr: TopoProof) -> TopoProof:
    """Extend a topoS4 proof of ``phi`` to one of ``K_i phi``."""
    check_topo_proof(pr)
    b = ProofBuilder(TOPOS4)
    j = b.include(pr)
    return b.build(necessitate(b, j, i))


def s4_to_topo(pr: Proof) -> TopoProof:
    """Translate an S4 proof into a topoS4 proof of the same formula."""
    check_proof(S4, pr)
    b = ProofBuilder(TOPOS4)
    where: dict = {}
    for n, step in enumerate(pr.steps, 1):
        f, just = step.formula, step.justification
        if isinstance(just, Taut):
            where[n] = b.taut(f)
        elif isinstance(just, Axiom) and just.schema is SchemaName.AxK:
            # (K(a -> c) & K a) -> K c
            i = f.rhs.agent
            a, c = f.lhs.rhs.body, f.rhs.body
            k = b.include(prove_axiom_K_topo(i, a, c))
            where[n] = b.glue([k], f)
        elif isinstance(just, Axiom):
            where[n] = b.axiom(just.schema, f)
        elif isinstance(just, Mp):
            where[n] = b.mp(where[just.major], where[just.minor])
        elif isinstance(just, Nec):
            where[n] = necessitate(b, where[just.premise], just.agent)
        else:
            raise CheckError(n, f"unexpected justification {just!r} in an S4 proof")
    return b.build(where[len(pr.steps)])


def topo_to_s4(pr: TopoProof) -> Proof:
    """Translate a topoS4 proof into an S4 proof of the same formula."""
    check_topo_proof(pr)
    b = ProofBuilder(S4)
    where: dict = {}
    for n, step in enumerate(pr.steps, 1):
        f, just = step.formula, step.justification
        if isinstance(just, Taut):
            where[n] = b.taut(f)
        elif isinstance(just, Axiom) and just.schema is SchemaName.AxN:
            where[n] = k_top(b, f.agent)
        elif isinstance(just, Axiom) and just.schema is SchemaName.AxR:
            # K(a & c) -> (K a & K c), and back
            boxed = f.lhs.lhs
            i, a, c = boxed.agent, boxed.body.lhs, boxed.body.rhs
            split = k_and_split(b, i, a, c)
            join = k_and_join(b, i, a, c)
            where[n] = b.glue([split, join], f)
        elif isinstance(just, Axiom):
            where[n] = b.axiom(just.schema, f)
        elif isinstance(just, Mp):
            where[n] = b.mp(where[just.major], where[just.minor])
        elif isinstance(just, Rm):
            where[n] = box_mono(b, where[just.premise], just.agent)
        else:
            raise CheckError(n, f"unexpected justification {just!r} in a topoS4 proof")
    return b.build(where[len(pr.steps)])

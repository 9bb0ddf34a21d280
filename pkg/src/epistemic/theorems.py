"""Bundled kernel-checked theorem libraries.

``s42_suite`` covers the knowledge/belief principles with belief read
as ``B_i phi := ~K_i ~K_i phi``, instances of every axiom schema and the
derived-rule builders.  ``s4_suite`` and ``topo_suite`` feed the translation
checks between the two S4 axiomatisations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .formula import (And, Formula, Imp, Know, Or, SchemaName, Var, bel, iff,
                      neg, poss)
from .hilbert import (S4, S42, TOPOS4, Proof, ProofBuilder, System, box_mono,
                      chain, dia_mono, k_and_join, k_and_split, k_top,
                      necessitate, prove_K_conj_imply_factor, prove_K_impl_form,
                      prove_K_over_conjunct, prove_K_thm)
from .toposys import prove_axiom_K_topo, prove_nec_topo


@dataclass(frozen=True)
class Theorem:
    name: str
    system: System
    proof: Proof

    @property
    def formula(self) -> Formula:
        return self.proof.conclusion


p, q, r = Var("p"), Var("q"), Var("r")


# Knowledge/belief principles, each proved in S4.2 for a given agent and formula.

def prove_positive_introspection(i: int, phi: Formula) -> Proof:
    """``B_i phi -> K_i B_i phi``."""
    b = ProofBuilder(S42)
    up = dia_mono(b, b.instance(SchemaName.Ax4, i, phi), i)   # L K phi -> L K K phi
    two = b.instance(SchemaName.Ax2, i, Know(i, phi))         # L K K phi -> K L K phi
    return b.build(chain(b, up, two))


def prove_negative_introspection(i: int, phi: Formula) -> Proof:
    """``~B_i phi -> K_i ~B_i phi``."""
    b = ProofBuilder(S42)
    x = neg(Know(i, phi))
    four = b.instance(SchemaName.Ax4, i, x)                   # K x -> K K x
    dn = box_mono(b, b.taut(Imp(Know(i, x), neg(neg(Know(i, x))))), i)
    nb = neg(bel(i, phi))
    return b.build(b.glue([four, dn], Imp(nb, Know(i, nb))))


def prove_knowledge_implies_belief(i: int, phi: Formula) -> Proof:
    """``K_i phi -> B_i phi``."""
    b = ProofBuilder(S42)
    t = b.instance(SchemaName.AxT, i, neg(Know(i, phi)))
    return b.build(b.glue([t], Imp(Know(i, phi), bel(i, phi))))


def prove_belief_consistency(i: int, phi: Formula) -> Proof:
    """``B_i phi -> ~B_i ~phi``."""
    b = ProofBuilder(S42)
    two = b.instance(SchemaName.Ax2, i, phi)
    # ~B_i ~phi unfolds to ~~K_i ~K_i ~phi
    return b.build(b.glue([two], Imp(bel(i, phi), neg(bel(i, neg(phi))))))


def prove_strong_belief(i: int, phi: Formula) -> Proof:
    """``B_i phi -> B_i K_i phi``."""
    b = ProofBuilder(S42)
    return b.build(dia_mono(b, b.instance(SchemaName.Ax4, i, phi), i))


def prove_belief_definition(i: int, phi: Formula) -> Proof:
    """``B_i phi <-> ~K_i ~K_i phi``; a tautology once belief is unfolded."""
    b = ProofBuilder(S42)
    return b.build(b.taut(iff(bel(i, phi), neg(Know(i, neg(Know(i, phi)))))))


BELIEF_PRINCIPLES = {
    "positive introspection": prove_positive_introspection,
    "negative introspection": prove_negative_introspection,
    "knowledge implies belief": prove_knowledge_implies_belief,
    "consistency of belief": prove_belief_consistency,
    "strong belief": prove_strong_belief,
}


def _dia_collapse(b: ProofBuilder, i: int, x: Formula) -> int:
    # L L x -> L x, the dual of 4
    four = b.instance(SchemaName.Ax4, i, neg(x))
    dn = box_mono(b, b.taut(Imp(Know(i, neg(x)), neg(neg(Know(i, neg(x)))))), i)
    return b.glue([four, dn], Imp(poss(i, poss(i, x)), poss(i, x)))


def prove_belief_conjunction(i: int, phi: Formula, psi: Formula) -> Proof:
    """``(B_i phi & B_i psi) -> B_i(phi & psi)``: beliefs are closed under
    conjunction, which needs the .2 axiom."""
    b = ProofBuilder(S42)
    kp, kq = Know(i, phi), Know(i, psi)
    lkq = poss(i, kq)
    intro = b.include(prove_positive_introspection(i, psi))   # L K psi -> K L K psi
    mix = b.include(prove_K_thm(S42, i, lkq, kp))             # K L K psi & L K phi -> L(L K psi & K phi)
    # (L K psi & K phi) -> L(K phi & K psi), from K phi -> K K phi
    four = b.instance(SchemaName.Ax4, i, phi)
    inner_thm = b.include(prove_K_thm(S42, i, kp, kq))        # K K phi & L K psi -> L(K phi & K psi)
    inner = b.glue([four, inner_thm], Imp(And(lkq, kp), poss(i, And(kp, kq))))
    lifted = dia_mono(b, inner, i)                            # L(..) -> L L(K phi & K psi)
    join = dia_mono(b, k_and_join(b, i, phi, psi), i)         # L(K phi & K psi) -> L K(phi & psi)
    join2 = dia_mono(b, join, i)
    collapse = _dia_collapse(b, i, Know(i, And(phi, psi)))
    goal = Imp(And(bel(i, phi), bel(i, psi)), bel(i, And(phi, psi)))
    return b.build(b.glue([intro, mix, lifted, join2, collapse], goal))


def _single(system: System, schema: SchemaName, i: int, *args: Formula) -> Proof:
    b = ProofBuilder(system)
    return b.build(b.instance(schema, i, *args))


def _from_taut(system: System, f: Formula) -> Proof:
    b = ProofBuilder(system)
    return b.build(b.taut(f))


def _nec_of(system: System, inner: Proof, i: int) -> Proof:
    b = ProofBuilder(system)
    return b.build(necessitate(b, b.include(inner), i))


def _box_idempotent(system: System, i: int, phi: Formula) -> Proof:
    b = ProofBuilder(system)
    four = b.instance(SchemaName.Ax4, i, phi)
    t = b.instance(SchemaName.AxT, i, Know(i, phi))
    return b.build(b.glue([four, t], iff(Know(i, phi), Know(i, Know(i, phi)))))


def _t_dual(system: System, i: int, phi: Formula) -> Proof:
    b = ProofBuilder(system)
    t = b.instance(SchemaName.AxT, i, neg(phi))
    return b.build(b.glue([t], Imp(phi, poss(i, phi))))


def _four_dual(system: System, i: int, phi: Formula) -> Proof:
    b = ProofBuilder(system)
    return b.build(_dia_collapse(b, i, phi))


def _box_conj(system: System, i: int, phi: Formula, psi: Formula) -> Proof:
    b = ProofBuilder(system)
    split = k_and_split(b, i, phi, psi)
    join = k_and_join(b, i, phi, psi)
    return b.build(b.glue([split, join], iff(Know(i, And(phi, psi)), And(Know(i, phi), Know(i, psi)))))


def _box_or(system: System, i: int, phi: Formula, psi: Formula) -> Proof:
    b = ProofBuilder(system)
    left = box_mono(b, b.taut(Imp(phi, Or(phi, psi))), i)
    right = box_mono(b, b.taut(Imp(psi, Or(phi, psi))), i)
    goal = Imp(Or(Know(i, phi), Know(i, psi)), Know(i, Or(phi, psi)))
    return b.build(b.glue([left, right], goal))


def _k_top(system: System, i: int) -> Proof:
    b = ProofBuilder(system)
    return b.build(k_top(b, i))


def _rm_closure(system: System, i: int, phi: Formula, psi: Formula) -> Proof:
    b = ProofBuilder(system)
    return b.build(box_mono(b, b.taut(Imp(And(phi, psi), phi)), i))


def _box_dual(system: System, i: int, phi: Formula) -> Proof:
    return _from_taut(system, iff(poss(i, phi), neg(Know(i, neg(phi)))))


@lru_cache(maxsize=None)
def s42_suite() -> tuple:
    """Kernel-checkable S4.2 theorems (about forty)."""
    out = []
    for phi in (p, And(p, q), Know(2, p)):
        for name, prover in BELIEF_PRINCIPLES.items():
            out.append(Theorem(f"{name} [{phi}]", S42, prover(1, phi)))
    out += [
        Theorem("belief definition [p]", S42, prove_belief_definition(1, p)),
        Theorem("belief definition [K2 q]", S42, prove_belief_definition(1, Know(2, q))),
        Theorem(".2 [p]", S42, _single(S42, SchemaName.Ax2, 1, p)),
        Theorem(".2 [~p]", S42, _single(S42, SchemaName.Ax2, 1, neg(p))),
        Theorem(".2 [p | q] agent 2", S42, _single(S42, SchemaName.Ax2, 2, Or(p, q))),
        Theorem(".2 [K2 p]", S42, _single(S42, SchemaName.Ax2, 1, Know(2, p))),
        Theorem("K [p, q]", S42, _single(S42, SchemaName.AxK, 1, p, q)),
        Theorem("K [K1 p, q]", S42, _single(S42, SchemaName.AxK, 2, Know(1, p), q)),
        Theorem("T [p]", S42, _single(S42, SchemaName.AxT, 1, p)),
        Theorem("T [K2 p]", S42, _single(S42, SchemaName.AxT, 1, Know(2, p))),
        Theorem("4 [p]", S42, _single(S42, SchemaName.Ax4, 1, p)),
        Theorem("4 [p & q] agent 2", S42, _single(S42, SchemaName.Ax4, 2, And(p, q))),
        Theorem("K_thm [p, q]", S42, prove_K_thm(S42, 1, p, q)),
        Theorem("K_thm [K2 p, ~q]", S42, prove_K_thm(S42, 1, Know(2, p), neg(q))),
        Theorem("K_conj_imply_factor [p, q, r]", S42, prove_K_conj_imply_factor(S42, 1, p, q, r)),
        Theorem("K_conj_imply_factor [p, ~p, false]", S42,
                prove_K_conj_imply_factor(S42, 2, p, neg(p), neg(Imp(p, p)))),
        Theorem("K implication form [p, q]", S42, prove_K_impl_form(S42, 1, p, q)),
        Theorem("K over conjunction [p, q, r]", S42, prove_K_over_conjunct(S42, 1, [p, q, r])[0]),
        Theorem("conjunction under K [p, q, r]", S42, prove_K_over_conjunct(S42, 1, [p, q, r])[1]),
        Theorem("K idempotent [p]", S42, _box_idempotent(S42, 1, p)),
        Theorem("T dual [p]", S42, _t_dual(S42, 1, p)),
        Theorem("4 dual [p]", S42, _four_dual(S42, 1, p)),
        Theorem("K over conjunction iff [p, q]", S42, _box_conj(S42, 1, p, q)),
        Theorem("K over disjunction [p, q]", S42, _box_or(S42, 2, p, q)),
        Theorem("L / K duality [p]", S42, _box_dual(S42, 1, p)),
        Theorem("nec of .2 [p]", S42, _nec_of(S42, _single(S42, SchemaName.Ax2, 1, p), 2)),
        Theorem("belief conjunction [p, q]", S42, prove_belief_conjunction(1, p, q)),
    ]
    return tuple(out)


@lru_cache(maxsize=None)
def s4_suite() -> tuple:
    """S4 theorems used for the S4 to topoS4 direction."""
    out = [
        Theorem("K [p, q]", S4, _single(S4, SchemaName.AxK, 1, p, q)),
        Theorem("K [K2 p, p | q]", S4, _single(S4, SchemaName.AxK, 1, Know(2, p), Or(p, q))),
        Theorem("K [~p, false] agent 2", S4, _single(S4, SchemaName.AxK, 2, neg(p), neg(Imp(p, p)))),
        Theorem("T [p]", S4, _single(S4, SchemaName.AxT, 1, p)),
        Theorem("T [K1 q]", S4, _single(S4, SchemaName.AxT, 2, Know(1, q))),
        Theorem("T [p -> q]", S4, _single(S4, SchemaName.AxT, 1, Imp(p, q))),
        Theorem("4 [p]", S4, _single(S4, SchemaName.Ax4, 1, p)),
        Theorem("4 [p & q]", S4, _single(S4, SchemaName.Ax4, 2, And(p, q))),
        Theorem("4 [~K2 p]", S4, _single(S4, SchemaName.Ax4, 1, neg(Know(2, p)))),
        Theorem("N", S4, _k_top(S4, 1)),
        Theorem("N agent 2", S4, _k_top(S4, 2)),
        Theorem("R [p, q]", S4, _box_conj(S4, 1, p, q)),
        Theorem("R [K1 p, ~q]", S4, _box_conj(S4, 2, Know(1, p), neg(q))),
        Theorem("nec [p -> p]", S4, _nec_of(S4, _from_taut(S4, Imp(p, p)), 1)),
        Theorem("nec nec [p | ~p]", S4,
                _nec_of(S4, _nec_of(S4, _from_taut(S4, Or(p, neg(p))), 1), 2)),
        Theorem("nec [T p]", S4, _nec_of(S4, _single(S4, SchemaName.AxT, 1, p), 2)),
        Theorem("RM closure [p, q]", S4, _rm_closure(S4, 1, p, q)),
        Theorem("K_thm [p, q]", S4, prove_K_thm(S4, 1, p, q)),
        Theorem("K_conj_imply_factor [p, q, r]", S4, prove_K_conj_imply_factor(S4, 1, p, q, r)),
        Theorem("K implication form [p, q]", S4, prove_K_impl_form(S4, 2, p, q)),
        Theorem("K idempotent [p]", S4, _box_idempotent(S4, 1, p)),
        Theorem("T dual [q]", S4, _t_dual(S4, 1, q)),
        Theorem("4 dual [p]", S4, _four_dual(S4, 2, p)),
        Theorem("K over disjunction [p, q]", S4, _box_or(S4, 1, p, q)),
    ]
    return tuple(out)


@lru_cache(maxsize=None)
def topo_suite() -> tuple:
    """topoS4 theorems used for the topoS4 to S4 direction."""
    out = [
        Theorem("N", TOPOS4, _single(TOPOS4, SchemaName.AxN, 1)),
        Theorem("N agent 2", TOPOS4, _single(TOPOS4, SchemaName.AxN, 2)),
        Theorem("R [p, q]", TOPOS4, _single(TOPOS4, SchemaName.AxR, 1, p, q)),
        Theorem("R [K2 p, p -> q]", TOPOS4, _single(TOPOS4, SchemaName.AxR, 1, Know(2, p), Imp(p, q))),
        Theorem("T [p]", TOPOS4, _single(TOPOS4, SchemaName.AxT, 1, p)),
        Theorem("T [K1 p | q]", TOPOS4, _single(TOPOS4, SchemaName.AxT, 2, Or(Know(1, p), q))),
        Theorem("4 [p]", TOPOS4, _single(TOPOS4, SchemaName.Ax4, 1, p)),
        Theorem("4 [~q]", TOPOS4, _single(TOPOS4, SchemaName.Ax4, 2, neg(q))),
        Theorem("K [p, q]", TOPOS4, prove_axiom_K_topo(1, p, q)),
        Theorem("K [K1 p, ~q]", TOPOS4, prove_axiom_K_topo(2, Know(1, p), neg(q))),
        Theorem("RM closure [p, q]", TOPOS4, _rm_closure(TOPOS4, 1, p, q)),
        Theorem("nec [p -> p]", TOPOS4, prove_nec_topo(1, _from_taut(TOPOS4, Imp(p, p)))),
        Theorem("nec [T p]", TOPOS4, prove_nec_topo(2, _single(TOPOS4, SchemaName.AxT, 1, p))),
        Theorem("nec nec [p | ~p]", TOPOS4,
                prove_nec_topo(2, prove_nec_topo(1, _from_taut(TOPOS4, Or(p, neg(p)))))),
        Theorem("K_thm [p, q]", TOPOS4, prove_K_thm(TOPOS4, 1, p, q)),
        Theorem("K_conj_imply_factor [p, q, r]", TOPOS4, prove_K_conj_imply_factor(TOPOS4, 1, p, q, r)),
        Theorem("K implication form [p, q]", TOPOS4, prove_K_impl_form(TOPOS4, 1, p, q)),
        Theorem("K idempotent [p]", TOPOS4, _box_idempotent(TOPOS4, 1, p)),
        Theorem("T dual [p]", TOPOS4, _t_dual(TOPOS4, 2, p)),
        Theorem("4 dual [q]", TOPOS4, _four_dual(TOPOS4, 1, q)),
        Theorem("K over disjunction [p, q]", TOPOS4, _box_or(TOPOS4, 1, p, q)),
        Theorem("K over conjunction [p, q, r]", TOPOS4, prove_K_over_conjunct(TOPOS4, 1, [p, q, r])[0]),
    ]
    return tuple(out)

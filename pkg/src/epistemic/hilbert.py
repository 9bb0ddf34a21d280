"""Hilbert-style proof kernel and proof builders.

A proof is a list of steps, each a formula with a justification that may only
cite earlier steps.  Step numbers are 1-based, as in certificate files.

Systems are sets of axiom schemas plus a set of inference rules.  The normal
systems (``K``, ``S4``, ``K2``, ``S42``) use modus ponens and necessitation;
``TOPOS4`` uses modus ponens and monotonicity (``RM``) instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .formula import (BOTTOM, TOP, And, Bottom, Formula, Imp, Know, Or,
                      SchemaName, Var, conjunct, imply, instantiate_schema,
                      match_schema, neg)

TAUTOLOGY_ATOM_CAP = 20
CONJUNCT_CAP = 8


# --------------------------------------------------------------------------
# Systems and proofs

@dataclass(frozen=True)
class System:
    name: str
    schemas: frozenset
    rules: frozenset

    def __str__(self):
        return self.name


K = System("K", frozenset({SchemaName.AxK}), frozenset({"MP", "NEC"}))
S4 = System("S4", frozenset({SchemaName.AxK, SchemaName.AxT, SchemaName.Ax4}),
            frozenset({"MP", "NEC"}))
K2 = System("K2", frozenset({SchemaName.AxK, SchemaName.Ax2}), frozenset({"MP", "NEC"}))
S42 = System("S42", frozenset({SchemaName.AxK, SchemaName.AxT, SchemaName.Ax4, SchemaName.Ax2}),
             frozenset({"MP", "NEC"}))
TOPOS4 = System("TOPOS4", frozenset({SchemaName.AxN, SchemaName.AxR, SchemaName.AxT,
                                     SchemaName.Ax4}), frozenset({"MP", "RM"}))

SYSTEMS = {s.name: s for s in (K, S4, K2, S42, TOPOS4)}


def system_named(name: str) -> System:
    try:
        return SYSTEMS[name.upper()]
    except KeyError:
        raise ValueError(f"unknown system {name!r}; choose from {', '.join(SYSTEMS)}") from None


@dataclass(frozen=True)
class Taut:
    pass


@dataclass(frozen=True)
class Axiom:
    schema: SchemaName


@dataclass(frozen=True)
class Mp:
    major: int  # step proving A -> B
    minor: int  # step proving A


@dataclass(frozen=True)
class Nec:
    premise: int
    agent: int


@dataclass(frozen=True)
class Rm:
    premise: int
    agent: int


Justification = Union[Taut, Axiom, Mp, Nec, Rm]


@dataclass(frozen=True)
class Step:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Proof:
    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError("a proof has at least one step")

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def __len__(self):
        return len(self.steps)


class CheckError(Exception):
    def __init__(self, step: int, reason: str):
        self.step = step
        self.reason = reason
        super().__init__(f"step {step}: {reason}")


class TooManyAtoms(ValueError):
    pass


# --------------------------------------------------------------------------
# Tautologies

def skeleton_atoms(f: Formula) -> list:
    """Variables and maximal ``Know`` subformulas of ``f``, first-seen order."""
    atoms: dict = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Var, Know)):
            atoms.setdefault(g, None)
        elif isinstance(g, (And, Or, Imp)):
            stack.append(g.rhs)
            stack.append(g.lhs)
    return list(atoms)


@lru_cache(maxsize=65536)
def is_tautology(f: Formula, cap: int = TAUTOLOGY_ATOM_CAP) -> bool:
    """Truth-table validity of the propositional skeleton of ``f``.

    All ``2**m`` rows are evaluated at once: atom ``k`` is the integer whose
    bit ``r`` is bit ``k`` of ``r``.
    """
    atoms = skeleton_atoms(f)
    m = len(atoms)
    if m > cap:
        raise TooManyAtoms(f"skeleton has {m} atoms, cap is {cap}")
    rows = 1 << m
    full = (1 << rows) - 1
    pattern = {}
    for k, atom in enumerate(atoms):
        period = 1 << (k + 1)
        unit = ((1 << (1 << k)) - 1) << (1 << k)
        pattern[atom] = unit * (full // ((1 << period) - 1))

    def val(g) -> int:
        if isinstance(g, Bottom):
            return 0
        if isinstance(g, (Var, Know)):
            return pattern[g]
        if isinstance(g, And):
            return val(g.lhs) & val(g.rhs)
        if isinstance(g, Or):
            return val(g.lhs) | val(g.rhs)
        return (~val(g.lhs) | val(g.rhs)) & full

    return val(f) == full


# --------------------------------------------------------------------------
# Kernel

def check_proof(sys: System, pr: Proof) -> Formula:
    """Check ``pr`` in ``sys`` and return its conclusion; raise ``CheckError``."""
    formulas: list = []
    for n, step in enumerate(pr.steps, 1):
        f, just = step.formula, step.justification

        def cited(j: int) -> Formula:
            if not isinstance(j, int) or j < 1:
                raise CheckError(n, f"bad step reference {j!r}")
            if j >= n:
                raise CheckError(n, f"forward reference to step {j}")
            return formulas[j - 1]

        if isinstance(just, Taut):
            try:
                ok = is_tautology(f)
            except TooManyAtoms as exc:
                raise CheckError(n, str(exc)) from None
            if not ok:
                raise CheckError(n, "not a tautology")
        elif isinstance(just, Axiom):
            if just.schema not in sys.schemas:
                raise CheckError(n, f"schema {just.schema.value} is not in system {sys.name}")
            if not match_schema(just.schema, f):
                raise CheckError(n, f"not an instance of {just.schema.value}")
        elif isinstance(just, Mp):
            if "MP" not in sys.rules:
                raise CheckError(n, f"rule MP is not in system {sys.name}")
            major, minor = cited(just.major), cited(just.minor)
            if not isinstance(major, Imp):
                raise CheckError(n, f"MP: step {just.major} is not an implication")
            if major.lhs != minor:
                raise CheckError(n, f"MP: step {just.minor} is not the antecedent of step {just.major}")
            if major.rhs != f:
                raise CheckError(n, f"MP: formula is not the consequent of step {just.major}")
        elif isinstance(just, Nec):
            if "NEC" not in sys.rules:
                raise CheckError(n, f"rule NEC is not in system {sys.name}")
            if f != Know(just.agent, cited(just.premise)):
                raise CheckError(n, f"NEC: formula is not K{just.agent} of step {just.premise}")
        elif isinstance(just, Rm):
            if "RM" not in sys.rules:
                raise CheckError(n, f"rule RM is not in system {sys.name}")
            src = cited(just.premise)
            if not isinstance(src, Imp):
                raise CheckError(n, f"RM: step {just.premise} is not an implication")
            want = Imp(Know(just.agent, src.lhs), Know(just.agent, src.rhs))
            if f != want:
                raise CheckError(n, f"RM: formula does not match step {just.premise}")
        else:
            raise CheckError(n, f"unknown justification {just!r}")
        formulas.append(f)
    return formulas[-1]


def check_deduction(sys: System, premises: Sequence[Formula], goal: Formula,
                    pr: Proof) -> Formula:
    """Check that ``pr`` derives ``goal`` from ``premises``.

    The conclusion must read ``imply(ps, goal)`` where every ``ps`` member is
    one of ``premises``; order and repetition are free.
    """
    final = check_proof(sys, pr)
    allowed = set(premises)
    f = final
    while True:
        if f == goal:
            return final
        if not isinstance(f, Imp) or f.lhs not in allowed:
            break
        f = f.rhs
    raise CheckError(len(pr), "conclusion does not derive the goal from the premises")


# --------------------------------------------------------------------------
# Building proofs

class ProofBuilder:
    """Accumulates a proof; every ``add``-style method returns a step number.

    A formula that is already proved is never proved again; the earlier step
    number is returned instead.
    """

    def __init__(self, system: System):
        self.system = system
        self.steps: list = []
        self._proved: dict = {}

    def formula(self, j: int) -> Formula:
        return self.steps[j - 1].formula

    def add(self, f: Formula, just: Justification) -> int:
        j = self._proved.get(f)
        if j is not None:
            return j
        self.steps.append(Step(f, just))
        self._proved[f] = len(self.steps)
        return len(self.steps)

    def taut(self, f: Formula) -> int:
        if f not in self._proved and not is_tautology(f):
            raise ValueError(f"not a tautology: {f}")
        return self.add(f, Taut())

    def axiom(self, schema: SchemaName, f: Formula) -> int:
        if schema not in self.system.schemas:
            raise ValueError(f"{schema.value} is not an axiom of {self.system.name}")
        if not match_schema(schema, f):
            raise ValueError(f"not an instance of {schema.value}: {f}")
        return self.add(f, Axiom(schema))

    def instance(self, schema: SchemaName, i: int, *args: Formula) -> int:
        return self.axiom(schema, instantiate_schema(schema, i, *args))

    def mp(self, major: int, minor: int) -> int:
        f = self.formula(major)
        if not isinstance(f, Imp) or f.lhs != self.formula(minor):
            raise ValueError(f"cannot apply MP to steps {major} and {minor}")
        return self.add(f.rhs, Mp(major, minor))

    def nec(self, j: int, i: int) -> int:
        return self.add(Know(i, self.formula(j)), Nec(j, i))

    def rm(self, j: int, i: int) -> int:
        f = self.formula(j)
        if not isinstance(f, Imp):
            raise ValueError(f"RM needs an implication at step {j}")
        return self.add(Imp(Know(i, f.lhs), Know(i, f.rhs)), Rm(j, i))

    def glue(self, premises: Iterable[int], conclusion: Formula) -> int:
        """Derive ``conclusion`` from proved steps by one tautology and MPs."""
        premises = list(premises)
        if conclusion in self._proved:
            return self._proved[conclusion]
        j = self.taut(imply([self.formula(k) for k in premises], conclusion))
        for k in premises:
            j = self.mp(j, k)
        return j

    def include(self, pr: Proof) -> int:
        """Copy a proof in, renumbering its references; returns its last step."""
        mapping: dict = {}
        for n, step in enumerate(pr.steps, 1):
            just = step.justification
            if isinstance(just, Mp):
                mapping[n] = self.mp(mapping[just.major], mapping[just.minor])
            elif isinstance(just, Nec):
                mapping[n] = self.nec(mapping[just.premise], just.agent)
            elif isinstance(just, Rm):
                mapping[n] = self.rm(mapping[just.premise], just.agent)
            else:
                mapping[n] = self.add(step.formula, just)
        return mapping[len(pr.steps)]

    def build(self, last: Optional[int] = None) -> Proof:
        """The proof so far, optionally reordered to end on step ``last``."""
        if last is None or last == len(self.steps):
            return Proof(tuple(self.steps))
        # move the goal to the end by re-citing it through a trivial MP
        goal = self.formula(last)
        t = self.add(Imp(goal, goal), Taut())
        steps = list(self.steps)
        steps.append(Step(goal, Mp(t, last)))
        return Proof(tuple(steps))


# Derived rules.  Each works in any system above: the normal systems use
# necessitation and AxK, TOPOS4 uses RM, AxN and AxR.

def necessitate(b: ProofBuilder, j: int, i: int) -> int:
    """From a proof of ``A`` at step ``j``, prove ``K_i A``."""
    if "NEC" in b.system.rules:
        return b.nec(j, i)
    a = b.formula(j)
    t = b.glue([j], Imp(TOP, a))
    m = b.rm(t, i)
    n = b.instance(SchemaName.AxN, i)
    return b.mp(m, n)


def axiom_k(b: ProofBuilder, i: int, a: Formula, c: Formula) -> int:
    """Prove ``(K_i(a -> c) & K_i a) -> K_i c``."""
    if SchemaName.AxK in b.system.schemas:
        return b.instance(SchemaName.AxK, i, a, c)
    # monotonicity over the tautology (a & (a -> c)) -> c, then split the box with AxR
    t = b.taut(Imp(And(a, Imp(a, c)), c))
    m = b.rm(t, i)
    r = b.instance(SchemaName.AxR, i, a, Imp(a, c))
    ka, kac, kc = Know(i, a), Know(i, Imp(a, c)), Know(i, c)
    return b.glue([r, m], Imp(And(kac, ka), kc))


def k_impl(b: ProofBuilder, i: int, a: Formula, c: Formula) -> int:
    """Prove ``K_i(a -> c) -> (K_i a -> K_i c)``."""
    ax = axiom_k(b, i, a, c)
    return b.glue([ax], Imp(Know(i, Imp(a, c)), Imp(Know(i, a), Know(i, c))))


def box_mono(b: ProofBuilder, j: int, i: int) -> int:
    """From ``A -> C`` at step ``j``, prove ``K_i A -> K_i C``."""
    if "RM" in b.system.rules:
        return b.rm(j, i)
    f = b.formula(j)
    n = b.nec(j, i)
    k = k_impl(b, i, f.lhs, f.rhs)
    return b.mp(k, n)


def dia_mono(b: ProofBuilder, j: int, i: int) -> int:
    """From ``A -> C`` at step ``j``, prove ``L_i A -> L_i C``."""
    f = b.formula(j)
    contra = b.glue([j], Imp(neg(f.rhs), neg(f.lhs)))
    boxed = box_mono(b, contra, i)
    return b.glue([boxed], Imp(neg(Know(i, neg(f.lhs))), neg(Know(i, neg(f.rhs)))))


def chain(b: ProofBuilder, j: int, k: int) -> int:
    """From ``A -> B`` and ``B -> C``, prove ``A -> C``."""
    f, g = b.formula(j), b.formula(k)
    return b.glue([j, k], Imp(f.lhs, g.rhs))


def k_and_split(b: ProofBuilder, i: int, a: Formula, c: Formula) -> int:
    """Prove ``K_i(a & c) -> (K_i a & K_i c)``."""
    left = box_mono(b, b.taut(Imp(And(a, c), a)), i)
    right = box_mono(b, b.taut(Imp(And(a, c), c)), i)
    return b.glue([left, right], Imp(Know(i, And(a, c)), And(Know(i, a), Know(i, c))))


def k_and_join(b: ProofBuilder, i: int, a: Formula, c: Formula) -> int:
    """Prove ``(K_i a & K_i c) -> K_i(a & c)``."""
    m = box_mono(b, b.taut(Imp(a, Imp(c, And(a, c)))), i)
    k = k_impl(b, i, c, And(a, c))
    return b.glue([m, k], Imp(And(Know(i, a), Know(i, c)), Know(i, And(a, c))))


def k_top(b: ProofBuilder, i: int) -> int:
    """Prove ``K_i true``."""
    if SchemaName.AxN in b.system.schemas:
        return b.instance(SchemaName.AxN, i)
    return necessitate(b, b.taut(TOP), i)


# --------------------------------------------------------------------------
# Builders for list encodings and K distribution

TO_CONJUNCT = "to_conjunct"
TO_IMPLY = "to_imply"


def prove_imply_conjunct_equiv(sys: System, psis: Sequence[Formula], phi: Formula,
                               direction: str, source: Proof) -> Proof:
    """Turn a proof of ``imply(psis, phi)`` into one of ``conjunct(psis) -> phi``
    (``direction=TO_CONJUNCT``) or the other way round (``TO_IMPLY``)."""
    curried, uncurried = imply(psis, phi), Imp(conjunct(psis), phi)
    if direction == TO_CONJUNCT:
        src, dst = curried, uncurried
    elif direction == TO_IMPLY:
        src, dst = uncurried, curried
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if check_proof(sys, source) != src:
        raise CheckError(len(source), f"source proof does not conclude {src}")
    b = ProofBuilder(sys)
    j = b.include(source)
    return b.build(b.glue([j], dst))


def _k_conjunct_forward(b: ProofBuilder, i: int, psis: list) -> int:
    # K_i conjunct(psis) -> conjunct(K_i psis)
    if not psis:
        return b.taut(Imp(Know(i, TOP), TOP))
    head, rest = psis[0], psis[1:]
    split = k_and_split(b, i, head, conjunct(rest))
    tail = _k_conjunct_forward(b, i, rest)
    boxed = conjunct(Know(i, p) for p in psis)
    return b.glue([split, tail], Imp(Know(i, conjunct(psis)), boxed))


def _k_conjunct_backward(b: ProofBuilder, i: int, psis: list) -> int:
    # conjunct(K_i psis) -> K_i conjunct(psis)
    if not psis:
        return b.glue([k_top(b, i)], Imp(TOP, Know(i, TOP)))
    head, rest = psis[0], psis[1:]
    tail = _k_conjunct_backward(b, i, rest)
    join = k_and_join(b, i, head, conjunct(rest))
    boxed = conjunct(Know(i, p) for p in psis)
    return b.glue([tail, join], Imp(boxed, Know(i, conjunct(psis))))


def prove_K_over_conjunct(sys: System, i: int, psis: Sequence[Formula],
                          cap: int = CONJUNCT_CAP) -> tuple:
    """Proofs of ``K_i conjunct(psis) -> conjunct(K_i psis)`` and its converse."""
    psis = list(psis)
    if len(psis) > cap:
        raise ValueError(f"{len(psis)} conjuncts exceeds the cap of {cap}")
    fwd = ProofBuilder(sys)
    f = _k_conjunct_forward(fwd, i, psis)
    bwd = ProofBuilder(sys)
    g = _k_conjunct_backward(bwd, i, psis)
    return fwd.build(f), bwd.build(g)


def prove_K_conj_imply_factor(sys: System, i: int, phi: Formula, psi: Formula,
                              theta: Formula) -> Proof:
    """Proof of ``((K_i phi & K_i psi) -> theta) -> (K_i(phi & psi) -> theta)``."""
    b = ProofBuilder(sys)
    forward, _ = prove_K_over_conjunct(sys, i, [phi, psi])
    over = b.include(forward)  # K(phi & (psi & T)) -> (K phi & (K psi & T))
    pad = box_mono(b, b.taut(Imp(And(phi, psi), conjunct([phi, psi]))), i)
    kp, kq = Know(i, phi), Know(i, psi)
    goal = Imp(Imp(And(kp, kq), theta), Imp(Know(i, And(phi, psi)), theta))
    return b.build(b.glue([pad, over], goal))


def prove_K_impl_form(sys: System, i: int, phi: Formula, psi: Formula) -> Proof:
    """Proof of ``K_i(phi -> psi) -> (K_i phi -> K_i psi)`` from conjunctive AxK."""
    b = ProofBuilder(sys)
    return b.build(k_impl(b, i, phi, psi))


def prove_K_thm(sys: System, i: int, phi: Formula, psi: Formula) -> Proof:
    """Proof of ``(K_i phi & L_i psi) -> L_i(phi & psi)``.

    Necessitate ``phi -> (~(phi & psi) -> ~psi)``, distribute the box twice,
    then close propositionally.
    """
    b = ProofBuilder(sys)
    pq = And(phi, psi)
    inner = Imp(neg(pq), neg(psi))
    t = b.taut(Imp(phi, inner))
    first = box_mono(b, t, i)                 # K phi -> K(~(phi&psi) -> ~psi)
    second = k_impl(b, i, neg(pq), neg(psi))  # K(...) -> (K ~(phi&psi) -> K ~psi)
    kp = Know(i, phi)
    l_psi = neg(Know(i, neg(psi)))
    l_pq = neg(Know(i, neg(pq)))
    return b.build(b.glue([first, second], Imp(And(kp, l_psi), l_pq)))

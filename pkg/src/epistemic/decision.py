"""Decision procedures: K/S4 tableau, bounded countermodel search, finite MCSs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .formula import (And, Bottom, Formula, Imp, Know, Or, Var, agents_of,
                      conjunct, neg, size, variables_of)
from .kripke import (DEFAULT_WORLD_CAP, CapExceeded, Frame, FrameClass, Model,
                     PointedModel, _closure_masks, _frame_from_masks,
                     _mask_to_succ, _members, class_check, evaluate,
                     relation_codes)

LOGICS = ("K", "S4")
FORMULA_SIZE_CAP = 400
SEARCH_VARIABLE_CAP = 3
MCS_CLOSURE_CAP = 12
_CHUNK_BYTES = 1 << 25


@dataclass(frozen=True)
class Sat:
    witness: PointedModel


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class Countermodel:
    witness: PointedModel


@dataclass(frozen=True)
class NoneUpTo:
    bound: int


TableauResult = Union[Sat, Unsat]
SearchResult = Union[Countermodel, NoneUpTo]


def _check_logic(logic: str) -> bool:
    if logic not in LOGICS:
        raise ValueError(f"tableau logic must be one of {LOGICS}, got {logic!r}")
    return logic == "S4"


# --------------------------------------------------------------------------
# Tableau
#
# Nodes carry signed formulas (True = "holds", False = "fails").

def _saturations(pending: list, acc: set, betas: list, s4: bool) -> Iterator[frozenset]:
    """Every open propositional saturation of ``acc`` plus ``pending``."""
    pending = list(pending)
    acc = set(acc)
    betas = list(betas)
    while True:
        while pending:
            sf = pending.pop()
            if sf in acc:
                continue
            sign, f = sf
            if (not sign, f) in acc:
                return
            if isinstance(f, Bottom) and sign:
                return
            acc.add(sf)
            if isinstance(f, And):
                if sign:
                    pending += [(True, f.lhs), (True, f.rhs)]
                else:
                    betas.append(((False, f.lhs), (False, f.rhs)))
            elif isinstance(f, Or):
                if sign:
                    betas.append(((True, f.lhs), (True, f.rhs)))
                else:
                    pending += [(False, f.lhs), (False, f.rhs)]
            elif isinstance(f, Imp):
                if sign:
                    betas.append(((False, f.lhs), (True, f.rhs)))
                else:
                    pending += [(True, f.lhs), (False, f.rhs)]
            elif isinstance(f, Know) and sign and s4:
                pending.append((True, f.body))
        while betas and (betas[0][0] in acc or betas[0][1] in acc):
            betas.pop(0)
        if not betas:
            yield frozenset(acc)
            return
        left, right = betas.pop(0)
        for option in (left, right):
            yield from _saturations([option], acc, betas, s4)
        return


class _Node:
    __slots__ = ("ident", "label", "edges")

    def __init__(self, ident: int):
        self.ident = ident
        self.label: frozenset = frozenset()
        self.edges: list = []  # (agent, _Node)


def _sort_key(sf) -> tuple:
    sign, f = sf
    return (f.agent, str(f.body)) if isinstance(f, Know) else (0, str(f))


class _Tableau:
    def __init__(self, s4: bool):
        self.s4 = s4
        self.counter = 0

    def expand(self, seeds: Iterable, path: list) -> Optional[_Node]:
        node = _Node(-1)
        for sat in _saturations(list(seeds), set(), [], self.s4):
            if self.s4:
                for anc in path:
                    if anc.label == sat:
                        return anc
            node.label = sat
            node.edges = []
            diamonds = sorted((sf for sf in sat if not sf[0] and isinstance(sf[1], Know)),
                              key=_sort_key)
            ok = True
            for _, f in diamonds:
                i = f.agent
                boxes = [g for sign, g in sat if sign and isinstance(g, Know) and g.agent == i]
                child_seeds = [(False, f.body)] + [(True, g.body) for g in boxes]
                if self.s4:
                    child_seeds += [(True, g) for g in boxes]
                child = self.expand(child_seeds, path + [node])
                if child is None:
                    ok = False
                    break
                node.edges.append((i, child))
            if ok:
                return node
        return None


def _read_model(root: _Node, agents: Sequence[int], s4: bool) -> Model:
    order: list = []
    index: dict = {}
    stack = [root]
    while stack:
        nd = stack.pop()
        if id(nd) in index:
            continue
        index[id(nd)] = len(order)
        order.append(nd)
        for _, child in reversed(nd.edges):
            stack.append(child)
    n = len(order)
    succ = {a: [0] * n for a in agents}
    for nd in order:
        for a, child in nd.edges:
            succ.setdefault(a, [0] * n)[index[id(nd)]] |= 1 << index[id(child)]
    if s4:
        succ = {a: _closure_masks(s, n) for a, s in succ.items()}
    val: dict = {}
    for w, nd in enumerate(order):
        for sign, f in nd.label:
            if sign and isinstance(f, Var):
                val.setdefault(f.name, []).append(w)
    return Model(_frame_from_masks(n, succ), val)


def tableau_sat(logic: str, f: Formula, cap: int = FORMULA_SIZE_CAP) -> TableauResult:
    """Satisfiability of ``f`` over all frames (K) or all preorders (S4)."""
    s4 = _check_logic(logic)
    if size(f) > cap:
        raise CapExceeded(f"formula size {size(f)} exceeds the cap of {cap}")
    root = _Tableau(s4).expand([(True, f)], [])
    if root is None:
        return Unsat()
    m = _read_model(root, agents_of(f), s4)
    if not evaluate(m, 0, f):
        raise AssertionError(f"tableau witness does not satisfy {f}")
    return Sat(PointedModel(m, 0))


def decide_valid(logic: str, f: Formula, cap: int = FORMULA_SIZE_CAP) -> Union[Valid, Countermodel]:
    result = tableau_sat(logic, neg(f), cap)
    if isinstance(result, Unsat):
        return Valid()
    return Countermodel(result.witness)


def consistent(logic: str, formulas: Sequence[Formula], cap: int = FORMULA_SIZE_CAP) -> bool:
    return isinstance(tableau_sat(logic, conjunct(formulas), cap), Sat)


# --------------------------------------------------------------------------
# Bounded countermodel search
#
# Frames are processed in batches.  A formula's truth value is held as an
# array of shape (frames, worlds, words): bit v of the word row is its truth
# value under valuation number v.

_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


def _atom_words(v_count: int, bit: int) -> np.ndarray:
    v = np.arange(v_count, dtype=np.uint64)
    bits = ((v >> np.uint64(bit)) & np.uint64(1)).astype(np.uint8)
    if v_count < 64:
        bits = np.concatenate([bits, np.zeros(64 - v_count, dtype=np.uint8)])
    return np.packbits(bits, bitorder="little").view("<u8").astype(np.uint64)


def _batch_truth(f: Formula, rels: dict, atoms: dict, valid: np.ndarray, shape: tuple):
    cache: dict = {}

    def tv(g):
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Bottom):
            r = np.zeros(shape, dtype=np.uint64)
        elif isinstance(g, Var):
            r = np.broadcast_to(atoms[g.name], shape)
        elif isinstance(g, And):
            r = tv(g.lhs) & tv(g.rhs)
        elif isinstance(g, Or):
            r = tv(g.lhs) | tv(g.rhs)
        elif isinstance(g, Imp):
            r = (~tv(g.lhs) | tv(g.rhs)) & valid
        else:
            body = tv(g.body)
            rel = rels[g.agent]  # (frames, n, n) bool
            masked = np.where(rel[:, :, :, None], body[:, None, :, :], _ALL)
            r = np.bitwise_and.reduce(masked, axis=2) & valid
        cache[g] = r
        return r

    return tv(f)


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def bounded_countermodel(cls: FrameClass, f: Formula, max_worlds: int,
                         cap: int = DEFAULT_WORLD_CAP) -> SearchResult:
    """Exhaustively search frames of ``cls`` with up to ``max_worlds`` worlds.

    Returns the first refuting pointed model ordered by world count, frame
    number, valuation number and world, or ``NoneUpTo(max_worlds)``.
    """
    if max_worlds > cap:
        raise CapExceeded(f"bound {max_worlds} exceeds the cap of {cap}")
    agents = agents_of(f)
    variables = variables_of(f)
    if len(variables) > SEARCH_VARIABLE_CAP:
        raise CapExceeded(f"{len(variables)} variables exceeds the cap of {SEARCH_VARIABLE_CAP}")
    for n in range(1, max_worlds + 1):
        found = _search_size(cls, f, n, agents, variables)
        if found is not None:
            return Countermodel(found)
    return NoneUpTo(max_worlds)


def _search_size(cls, f, n, agents, variables) -> Optional[PointedModel]:
    codes = [relation_codes(n, cls) for _ in agents]
    tables = []
    for cs in codes:
        arr = np.zeros((len(cs), n, n), dtype=bool)
        for k, c in enumerate(cs):
            for w, s in enumerate(_mask_to_succ(c, n)):
                for v in _members(s):
                    arr[k, w, v] = True
        tables.append(arr)
    v_count = 1 << (n * len(variables))
    words = max(1, v_count // 64)
    valid = np.full(words, _ALL, dtype=np.uint64)
    if v_count < 64:
        valid[0] = np.uint64((1 << v_count) - 1)
    atoms = {name: np.stack([_atom_words(v_count, j * n + w) for w in range(n)])[None]
             for j, name in enumerate(variables)}
    counts = tuple(len(cs) for cs in codes)
    total = math.prod(counts)
    chunk = max(1, _CHUNK_BYTES // (n * n * words * 8))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        parts = np.unravel_index(idx, counts) if agents else ()
        rels = {a: tables[k][parts[k]] for k, a in enumerate(agents)}
        shape = (len(idx), n, words)
        truth = _batch_truth(f, rels, atoms, valid, shape)
        bad = ~truth & valid
        hits = np.flatnonzero(bad.reshape(len(idx), -1).any(axis=1))
        if not len(hits):
            continue
        c = int(hits[0])
        per_world = bad[c]  # (n, words)
        union = np.bitwise_or.reduce(per_world, axis=0)
        t = int(np.flatnonzero(union)[0])
        v = 64 * t + _lowest_bit(int(union[t]))
        world = next(w for w in range(n) if int(per_world[w, t]) >> (v - 64 * t) & 1)
        frame_codes = [codes[k][int(parts[k][c])] for k in range(len(agents))]
        frame = _frame_from_masks(n, {a: _mask_to_succ(code, n)
                                      for a, code in zip(agents, frame_codes)})
        row = (1 << n) - 1
        model = Model(frame, {name: _members((v >> (j * n)) & row)
                              for j, name in enumerate(variables)})
        if evaluate(model, world, f):
            raise AssertionError("batch evaluator disagrees with the Kripke evaluator")
        return PointedModel(model, world)
    return None


# --------------------------------------------------------------------------
# Finite maximal consistent sets

@dataclass(frozen=True)
class FiniteMcs:
    closure: tuple
    members: tuple

    def __contains__(self, f) -> bool:
        return f in self.members


def _check_closure(closure: Iterable[Formula], cap: int) -> tuple:
    closure = tuple(dict.fromkeys(closure))
    if len(closure) > cap:
        raise CapExceeded(f"closure of {len(closure)} formulas exceeds the cap of {cap}")
    return closure


def enumerate_mcs(logic: str, closure: Iterable[Formula],
                  cap: int = MCS_CLOSURE_CAP) -> Iterator[FiniteMcs]:
    """Consistent choices of ``psi`` or ``~psi`` for every closure formula.

    Depth-first with the positive choice first, pruning inconsistent prefixes.
    """
    _check_logic(logic)
    closure = _check_closure(closure, cap)

    def walk(k: int, chosen: tuple):
        if k == len(closure):
            yield FiniteMcs(closure, chosen)
            return
        for option in (closure[k], neg(closure[k])):
            cand = chosen + (option,)
            if consistent(logic, cand):
                yield from walk(k + 1, cand)

    yield from walk(0, ())


def extend_mcs(logic: str, seed: Sequence[Formula], closure: Iterable[Formula],
               cap: int = MCS_CLOSURE_CAP) -> FiniteMcs:
    """Greedy finite Lindenbaum extension of ``seed`` in closure order."""
    _check_logic(logic)
    closure = _check_closure(closure, cap)
    allowed = set(closure) | {neg(c) for c in closure}
    stray = [s for s in seed if s not in allowed]
    if stray:
        raise ValueError(f"seed formula {stray[0]} is not in the closure or its negations")
    if not consistent(logic, list(seed)):
        raise ValueError("seed is inconsistent")
    current = list(seed)
    members = []
    for c in closure:
        if c in current:
            members.append(c)
        elif neg(c) in current:
            members.append(neg(c))
        elif consistent(logic, current + [c]):
            current.append(c)
            members.append(c)
        else:
            current.append(neg(c))
            members.append(neg(c))
    return FiniteMcs(closure, tuple(members))

"""Finite Kripke frames and models.

Worlds are the integers ``0..n-1``.  Internally a relation is also handled as
a bit-vector with bit ``a*n + b`` set iff ``(a, b)`` is in the relation, and a
set of worlds as an integer bitmask; these encodings fix the deterministic
enumeration orders used by the search procedures.
"""

from __future__ import annotations

import enum
import itertools
import random
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Optional

from .formula import (And, Bottom, Formula, Imp, Know, Or, SchemaName, Var,
                      instantiate_schema)

DEFAULT_WORLD_CAP = 5
DEFAULT_VALUATION_BITS = 24
# largest number of candidate relations per agent enumerate_frames will scan
CANDIDATE_CAP = 1 << 20


class CapExceeded(ValueError):
    pass


class FrameClass(enum.Enum):
    ALL = "all"
    REFLEXIVE = "reflexive"
    TRANSITIVE = "transitive"
    PREORDER = "preorder"
    WEAKLY_DIRECTED = "wd"
    WEAKLY_DIRECTED_PREORDER = "wd-preorder"

    @property
    def reflexive(self) -> bool:
        return self in (FrameClass.REFLEXIVE, FrameClass.PREORDER,
                        FrameClass.WEAKLY_DIRECTED_PREORDER)

    @property
    def transitive(self) -> bool:
        return self in (FrameClass.TRANSITIVE, FrameClass.PREORDER,
                        FrameClass.WEAKLY_DIRECTED_PREORDER)

    @property
    def weakly_directed(self) -> bool:
        return self in (FrameClass.WEAKLY_DIRECTED, FrameClass.WEAKLY_DIRECTED_PREORDER)


@dataclass(frozen=True, eq=True)
class Frame:
    size: int
    rel: Mapping[int, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a frame needs at least one world")
        rel = {}
        for agent in sorted(self.rel):
            pairs = frozenset((int(a), int(b)) for a, b in self.rel[agent])
            for a, b in pairs:
                if not (0 <= a < self.size and 0 <= b < self.size):
                    raise ValueError(f"pair ({a},{b}) of agent {agent} leaves the world set")
            rel[agent] = pairs
        object.__setattr__(self, "rel", rel)

    __hash__ = None

    @property
    def worlds(self) -> range:
        return range(self.size)

    @property
    def agents(self) -> list[int]:
        return list(self.rel)

    def relation(self, agent: int) -> frozenset:
        return self.rel.get(agent, frozenset())

    @cached_property
    def _succ(self) -> dict:
        out = {}
        for agent, pairs in self.rel.items():
            masks = [0] * self.size
            for a, b in pairs:
                masks[a] |= 1 << b
            out[agent] = tuple(masks)
        return out

    def successor_masks(self, agent: int) -> tuple:
        """Successor sets of every world for ``agent``, as bitmasks."""
        return self._succ.get(agent) or (0,) * self.size

    def successors(self, agent: int, w: int) -> list[int]:
        return _members(self.successor_masks(agent)[w])


@dataclass(frozen=True, eq=True)
class Model:
    frame: Frame
    valuation: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        val = {}
        for name in sorted(self.valuation):
            worlds = frozenset(int(w) for w in self.valuation[name])
            bad = [w for w in worlds if not 0 <= w < self.frame.size]
            if bad:
                raise ValueError(f"valuation of {name} mentions unknown world {bad[0]}")
            val[name] = worlds
        object.__setattr__(self, "valuation", val)

    __hash__ = None

    @cached_property
    def _val_masks(self) -> dict:
        return {name: sum(1 << w for w in ws) for name, ws in self.valuation.items()}

    def truth_mask(self, name: str) -> int:
        return self._val_masks.get(name, 0)


@dataclass(frozen=True)
class PointedModel:
    model: Model
    world: int

    def __post_init__(self):
        if not 0 <= self.world < self.model.frame.size:
            raise ValueError(f"world {self.world} is not in the model")

    __hash__ = None


def _members(mask: int) -> list[int]:
    out = []
    w = 0
    while mask:
        if mask & 1:
            out.append(w)
        mask >>= 1
        w += 1
    return out


# --------------------------------------------------------------------------
# Satisfaction

def extension(m: Model, f: Formula, cache: Optional[dict] = None) -> int:
    """Bitmask of the worlds of ``m`` where ``f`` holds."""
    if cache is None:
        cache = {}
    full = (1 << m.frame.size) - 1

    def ext(g) -> int:
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Bottom):
            r = 0
        elif isinstance(g, Var):
            r = m.truth_mask(g.name)
        elif isinstance(g, And):
            r = ext(g.lhs) & ext(g.rhs)
        elif isinstance(g, Or):
            r = ext(g.lhs) | ext(g.rhs)
        elif isinstance(g, Imp):
            r = (~ext(g.lhs) | ext(g.rhs)) & full
        elif isinstance(g, Know):
            body = ext(g.body)
            succ = m.frame.successor_masks(g.agent)
            r = 0
            for w, s in enumerate(succ):
                if s & body == s:
                    r |= 1 << w
        else:
            raise TypeError(f"not a formula: {g!r}")
        cache[g] = r
        return r

    return ext(f)


def evaluate(m: Model, w: int, f: Formula) -> bool:
    """``m, w |= f``."""
    if not 0 <= w < m.frame.size:
        raise ValueError(f"world {w} is out of range for a {m.frame.size}-world model")
    return bool(extension(m, f) >> w & 1)


def valid_in(m: Model, f: Formula) -> bool:
    return extension(m, f) == (1 << m.frame.size) - 1


# --------------------------------------------------------------------------
# Frame properties

def _reflexive(succ) -> bool:
    return all(s >> w & 1 for w, s in enumerate(succ))


def _transitive(succ) -> bool:
    for s in succ:
        for v in _members(s):
            if succ[v] & s != succ[v]:
                return False
    return True


def _weakly_directed(succ) -> bool:
    for s in succ:
        ms = _members(s)
        for a, y in enumerate(ms):
            for z in ms[a:]:
                if not succ[y] & succ[z]:
                    return False
    return True


def _in_class(succ, cls: FrameClass) -> bool:
    return ((not cls.reflexive or _reflexive(succ))
            and (not cls.transitive or _transitive(succ))
            and (not cls.weakly_directed or _weakly_directed(succ)))


def class_check(fr: Frame, i: int, cls: FrameClass) -> bool:
    """Whether agent ``i``'s relation in ``fr`` lies in ``cls``."""
    return _in_class(fr.successor_masks(i), cls)


def _closure_masks(succ, n: int) -> tuple:
    rows = [s | (1 << w) for w, s in enumerate(succ)]
    for k in range(n):
        bit = 1 << k
        for w in range(n):
            if rows[w] & bit:
                rows[w] |= rows[k]
    return tuple(rows)


def _frame_from_masks(n: int, masks: Mapping[int, Iterable[int]]) -> Frame:
    return Frame(n, {agent: [(w, v) for w, s in enumerate(succ) for v in _members(s)]
                     for agent, succ in masks.items()})


def refl_trans_closure(fr: Frame) -> Frame:
    return _frame_from_masks(fr.size, {a: _closure_masks(fr.successor_masks(a), fr.size)
                                       for a in fr.agents})


def _attach_final_world(fr: Frame) -> Frame:
    n = fr.size
    rel = {a: set(pairs) | {(w, n) for w in range(n + 1)} for a, pairs in fr.rel.items()}
    return Frame(n + 1, rel)


def add_final_cluster(fr: Frame) -> Frame:
    """Add a fresh world seen by every world, for every agent.

    On a preorder the result is a weakly directed preorder.
    """
    for a in fr.agents:
        if not class_check(fr, a, FrameClass.PREORDER):
            raise ValueError(f"relation of agent {a} is not a preorder")
    return _attach_final_world(fr)


# --------------------------------------------------------------------------
# Enumeration

def _mask_to_succ(mask: int, n: int) -> tuple:
    row = (1 << n) - 1
    return tuple((mask >> (w * n)) & row for w in range(n))


@lru_cache(maxsize=None)
def _preorders(n: int) -> tuple:
    """Successor tuples of every preorder on ``n`` worlds (unordered)."""
    if n == 0:
        return ((),)
    out = []
    x = n - 1
    for succ in _preorders(n - 1):
        subsets = range(1 << x)
        ups = [u for u in subsets if all(succ[v] & u == succ[v] for v in _members(u))]
        downs = [d for d in subsets
                 if all(d >> y & 1 for y in range(x) if succ[y] & d)]
        for d in downs:
            for u in ups:
                # d R x and x R u force d R u
                if any(succ[y] & u != u for y in _members(d)):
                    continue
                rows = [s | (1 << x) if d >> y & 1 else s for y, s in enumerate(succ)]
                rows.append(u | (1 << x))
                out.append(tuple(rows))
    return tuple(out)


def _succ_to_mask(succ) -> int:
    n = len(succ)
    return sum(s << (w * n) for w, s in enumerate(succ))


@lru_cache(maxsize=None)
def relation_codes(n: int, cls: FrameClass) -> tuple:
    """Bit-vector codes of all relations on ``n`` worlds in ``cls``, ascending."""
    if cls.reflexive and cls.transitive:
        return tuple(sorted(_succ_to_mask(s) for s in _preorders(n) if _in_class(s, cls)))
    diag = sum(1 << (w * n + w) for w in range(n))
    free = [b for b in range(n * n) if not (cls.reflexive and diag >> b & 1)]
    if 1 << len(free) > CANDIDATE_CAP:
        raise CapExceeded(f"{1 << len(free)} candidate relations on {n} worlds exceeds the cap")
    base = diag if cls.reflexive else 0
    out = []
    for code in range(1 << len(free)):
        mask = base
        for k, b in enumerate(free):
            if code >> k & 1:
                mask |= 1 << b
        if _in_class(_mask_to_succ(mask, n), cls):
            out.append(mask)
    # free bits are taken in ascending position, so the codes are already sorted
    return tuple(out)


def enumerate_frames(n: int, agents: Iterable[int], cls: FrameClass,
                     cap: int = DEFAULT_WORLD_CAP) -> Iterator[Frame]:
    """All labelled frames on ``n`` worlds with every agent relation in ``cls``.

    Multi-agent frames are produced in lexicographic order of the agents'
    relation codes, the first agent being the most significant.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > cap:
        raise CapExceeded(f"{n} worlds exceeds the cap of {cap}")
    agents = list(agents)
    codes = relation_codes(n, cls)
    for combo in itertools.product(codes, repeat=len(agents)):
        yield _frame_from_masks(n, {a: _mask_to_succ(c, n) for a, c in zip(agents, combo)})


def enumerate_valuations(fr: Frame, variables: Iterable[str],
                         cap_bits: int = DEFAULT_VALUATION_BITS) -> Iterator[Model]:
    """All valuations of ``variables`` over ``fr``.

    Valuation number ``k`` makes variable ``j`` true at world ``w`` iff bit
    ``j*n + w`` of ``k`` is set.
    """
    variables = list(variables)
    n = fr.size
    bits = n * len(variables)
    if bits > cap_bits:
        raise CapExceeded(f"{bits} valuation bits exceeds the cap of {cap_bits}")
    row = (1 << n) - 1
    for code in range(1 << bits):
        yield Model(fr, {v: _members((code >> (j * n)) & row) for j, v in enumerate(variables)})


def validates_schema(fr: Frame, name: SchemaName, i: int) -> bool:
    """Whether the single-variable instance of ``name`` is valid on ``fr``."""
    if name not in (SchemaName.AxT, SchemaName.Ax4, SchemaName.Ax2):
        raise ValueError(f"no frame correspondence is checked for {name.name}")
    inst = instantiate_schema(name, i, Var("p"))
    return all(valid_in(m, inst) for m in enumerate_valuations(fr, ["p"]))


def random_model(n: int, agents: Iterable[int], variables: Iterable[str],
                 cls: FrameClass, seed: int, density: float = 0.3) -> Model:
    """Seeded random model on ``n`` worlds whose relations all lie in ``cls``.

    For weakly directed classes the last world is a final cluster added on
    top of a random relation over the first ``n - 1`` worlds.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    agents = list(agents)
    base = n - 1 if cls.weakly_directed else n
    masks = {}
    for a in agents:
        succ = []
        for w in range(base):
            s = 0
            for v in range(base):
                if rng.random() < density:
                    s |= 1 << v
            succ.append(s)
        if cls.reflexive:
            succ = [s | (1 << w) for w, s in enumerate(succ)]
        if cls.transitive:
            succ = list(_closure_masks(succ, base))
        masks[a] = succ
    if base == 0:
        fr = Frame(1, {a: [(0, 0)] for a in agents})
    else:
        fr = _frame_from_masks(base, masks)
        if cls.weakly_directed:
            fr = _attach_final_world(fr)
    val = {v: [w for w in range(n) if rng.random() < 0.5] for v in variables}
    m = Model(fr, val)
    for a in agents:
        assert class_check(fr, a, cls), "generator produced a frame outside its class"
    return m


# --------------------------------------------------------------------------
# Text format

class ModelFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


_PAIR_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def format_model(m: Model, world: Optional[int] = None) -> str:
    lines = [f"worlds {m.frame.size}"]
    for a in m.frame.agents:
        pairs = " ".join(f"({x},{y})" for x, y in sorted(m.frame.relation(a)))
        lines.append(f"agent {a}: {pairs}".rstrip())
    for name in m.valuation:
        ws = " ".join(str(w) for w in sorted(m.valuation[name]))
        lines.append(f"val {name}: {ws}".rstrip())
    if world is not None:
        lines.append(f"world {world}")
    return "\n".join(lines) + "\n"


def format_pointed(pm: PointedModel) -> str:
    return format_model(pm.model, pm.world)


def parse_model(text: str) -> tuple:
    """Read the line-based model format; returns ``(model, world_or_None)``."""
    size = None
    rel: dict = {}
    val: dict = {}
    world = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "worlds":
            if size is not None:
                raise ModelFormatError(lineno, "duplicate 'worlds' line")
            if not rest.isdigit() or int(rest) < 1:
                raise ModelFormatError(lineno, "expected a positive world count")
            size = int(rest)
        elif head in ("agent", "val"):
            label, colon, body = rest.partition(":")
            label = label.strip()
            if not colon:
                raise ModelFormatError(lineno, f"missing ':' after {head} label")
            if head == "agent":
                if not label.isdigit():
                    raise ModelFormatError(lineno, f"bad agent label {label!r}")
                leftover = _PAIR_RE.sub("", body).strip()
                if leftover:
                    raise ModelFormatError(lineno, f"cannot read pairs near {leftover!r}")
                if int(label) in rel:
                    raise ModelFormatError(lineno, f"duplicate agent {label}")
                rel[int(label)] = [(int(a), int(b)) for a, b in _PAIR_RE.findall(body)]
            else:
                if not re.fullmatch(r"[a-z][a-z0-9_]*", label):
                    raise ModelFormatError(lineno, f"bad variable name {label!r}")
                items = body.split()
                if not all(t.isdigit() for t in items):
                    raise ModelFormatError(lineno, "world ids must be natural numbers")
                val[label] = [int(t) for t in items]
        elif head == "world":
            if not rest.isdigit():
                raise ModelFormatError(lineno, "expected a world id")
            world = int(rest)
        else:
            raise ModelFormatError(lineno, f"unknown directive {head!r}")
    if size is None:
        raise ModelFormatError(1, "missing 'worlds' line")
    try:
        m = Model(Frame(size, rel), val)
        if world is not None:
            PointedModel(m, world)
    except ValueError as exc:
        raise ModelFormatError(0, str(exc)) from None
    return m, world

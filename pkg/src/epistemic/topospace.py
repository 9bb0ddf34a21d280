"""Finite topological models with the interior reading of the box.

The language is mono-modal: ``K0`` plays the role of the interior operator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .formula import And, Bottom, Formula, Imp, Know, Or, Var
from .kripke import Frame, Model

BOX_AGENT = 0


class TopologyError(ValueError):
    """The family of opens violates a topology axiom (named in the message)."""


def _mask(points: Iterable[int]) -> int:
    return sum(1 << p for p in set(points))


def topology_violation(n: int, opens: Iterable[Iterable[int]]) -> Optional[str]:
    """Name the first violated topology axiom, or ``None`` for a topology."""
    masks = set()
    for u in opens:
        u = set(u)
        if any(not 0 <= p < n for p in u):
            return f"open set {sorted(u)} mentions a point outside 0..{n - 1}"
        masks.add(_mask(u))
    full = (1 << n) - 1
    if 0 not in masks:
        return "the empty set is not open"
    if full not in masks:
        return "the whole space is not open"
    ordered = sorted(masks)
    for a in ordered:
        for b in ordered:
            if a | b not in masks:
                return f"not closed under union: {_points(a)} | {_points(b)}"
            if a & b not in masks:
                return f"not closed under intersection: {_points(a)} & {_points(b)}"
    return None


def is_topology(n: int, opens: Iterable[Iterable[int]]) -> bool:
    return topology_violation(n, opens) is None


def _points(mask: int) -> list[int]:
    return [p for p in range(mask.bit_length()) if mask >> p & 1]


@dataclass(frozen=True)
class TopoModel:
    size: int
    opens: frozenset
    valuation: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        opens = frozenset(frozenset(u) for u in self.opens)
        problem = topology_violation(self.size, opens)
        if problem:
            raise TopologyError(problem)
        object.__setattr__(self, "opens", opens)
        val = {}
        for name in sorted(self.valuation):
            pts = frozenset(self.valuation[name])
            if any(not 0 <= p < self.size for p in pts):
                raise ValueError(f"valuation of {name} leaves the point set")
            val[name] = pts
        object.__setattr__(self, "valuation", val)

    __hash__ = None

    @property
    def points(self) -> range:
        return range(self.size)

    @cached_property
    def open_masks(self) -> tuple:
        return tuple(sorted(_mask(u) for u in self.opens))

    @cached_property
    def minimal_open_masks(self) -> tuple:
        """Smallest open neighbourhood of each point."""
        full = (1 << self.size) - 1
        out = []
        for w in range(self.size):
            m = full
            for u in self.open_masks:
                if u >> w & 1:
                    m &= u
            out.append(m)
        return tuple(out)


def topo_extension(t: TopoModel, f: Formula, cache: Optional[dict] = None) -> int:
    """Bitmask of the points where ``f`` holds under the interior semantics."""
    if cache is None:
        cache = {}
    full = (1 << t.size) - 1

    def ext(g) -> int:
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Bottom):
            r = 0
        elif isinstance(g, Var):
            r = _mask(t.valuation.get(g.name, ()))
        elif isinstance(g, And):
            r = ext(g.lhs) & ext(g.rhs)
        elif isinstance(g, Or):
            r = ext(g.lhs) | ext(g.rhs)
        elif isinstance(g, Imp):
            r = (~ext(g.lhs) | ext(g.rhs)) & full
        elif isinstance(g, Know):
            if g.agent != BOX_AGENT:
                raise ValueError(f"topological models interpret only K{BOX_AGENT}, got K{g.agent}")
            body = ext(g.body)
            # interior: union of the opens inside the body's extension
            r = 0
            for u in t.open_masks:
                if u & body == u:
                    r |= u
        else:
            raise TypeError(f"not a formula: {g!r}")
        cache[g] = r
        return r

    return ext(f)


def topo_eval(t: TopoModel, w: int, f: Formula) -> bool:
    if not 0 <= w < t.size:
        raise ValueError(f"point {w} is out of range")
    return bool(topo_extension(t, f) >> w & 1)


def specialization_frame(t: TopoModel) -> Model:
    """Kripke model where each point sees exactly its minimal open set."""
    pairs = [(w, v) for w, m in enumerate(t.minimal_open_masks) for v in _points(m)]
    return Model(Frame(t.size, {BOX_AGENT: pairs}), dict(t.valuation))


def enumerate_topologies(n: int) -> list:
    """Every topology on ``n`` points, as sorted tuples of open bitmasks.

    Brute force over families of subsets; fine up to four points.
    """
    if n > 4:
        raise ValueError("topology enumeration is limited to 4 points")
    full = (1 << n) - 1
    middle = [m for m in range(1, full)]
    out = []
    for code in range(1 << len(middle)):
        fam = {0, full} | {m for k, m in enumerate(middle) if code >> k & 1}
        if all(a | b in fam and a & b in fam for a in fam for b in fam):
            out.append(tuple(sorted(fam)))
    return out


# --------------------------------------------------------------------------
# Text format

class TopoFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def format_topo(t: TopoModel) -> str:
    lines = [f"points {t.size}"]
    for u in t.open_masks:
        lines.append(f"open: {' '.join(map(str, _points(u)))}".rstrip())
    for name, pts in t.valuation.items():
        lines.append(f"val {name}: {' '.join(map(str, sorted(pts)))}".rstrip())
    return "\n".join(lines) + "\n"


def parse_topo(text: str) -> TopoModel:
    size = None
    opens = []
    val = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("points"):
            rest = line[len("points"):].strip()
            if not rest.isdigit() or int(rest) < 1:
                raise TopoFormatError(lineno, "expected a positive point count")
            size = int(rest)
        elif line.startswith("open"):
            _, colon, body = line.partition(":")
            if not colon or not all(tok.isdigit() for tok in body.split()):
                raise TopoFormatError(lineno, "expected 'open: <points>'")
            opens.append([int(tok) for tok in body.split()])
        elif line.startswith("val "):
            name, colon, body = line[4:].partition(":")
            name = name.strip()
            if not colon or not re.fullmatch(r"[a-z][a-z0-9_]*", name):
                raise TopoFormatError(lineno, "expected 'val <name>: <points>'")
            if not all(tok.isdigit() for tok in body.split()):
                raise TopoFormatError(lineno, "points must be natural numbers")
            val[name] = [int(tok) for tok in body.split()]
        else:
            raise TopoFormatError(lineno, f"unknown directive {line.split()[0]!r}")
    if size is None:
        raise TopoFormatError(1, "missing 'points' line")
    try:
        return TopoModel(size, frozenset(frozenset(u) for u in opens), val)
    except ValueError as exc:
        raise TopoFormatError(0, str(exc)) from None

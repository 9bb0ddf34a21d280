"""Independent reference implementations used as test oracles.

These deliberately share no code with the package: relations are plain sets
of pairs and satisfaction is the textbook recursive definition.
"""

import itertools

from epistemic.formula import And, Bottom, Imp, Know, Or, Var


def naive_holds(n, rel, val, w, f):
    """Recursive satisfaction; ``rel`` maps agent -> set of pairs, ``val`` name -> set."""
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Var):
        return w in val.get(f.name, set())
    if isinstance(f, And):
        return naive_holds(n, rel, val, w, f.lhs) and naive_holds(n, rel, val, w, f.rhs)
    if isinstance(f, Or):
        return naive_holds(n, rel, val, w, f.lhs) or naive_holds(n, rel, val, w, f.rhs)
    if isinstance(f, Imp):
        return (not naive_holds(n, rel, val, w, f.lhs)) or naive_holds(n, rel, val, w, f.rhs)
    if isinstance(f, Know):
        return all(naive_holds(n, rel, val, v, f.body)
                   for v in range(n) if (w, v) in rel.get(f.agent, set()))
    raise TypeError(f)


def all_relations(n):
    pairs = [(a, b) for a in range(n) for b in range(n)]
    for code in range(1 << len(pairs)):
        yield {pairs[k] for k in range(len(pairs)) if code >> k & 1}


def is_reflexive(n, r):
    return all((w, w) in r for w in range(n))


def is_transitive(r):
    return all((a, c) in r for (a, b) in r for (b2, c) in r if b == b2)


def is_weakly_directed(n, r):
    succ = {w: {v for (x, v) in r if x == w} for w in range(n)}
    return all(succ[y] & succ[z] for w in range(n) for y in succ[w] for z in succ[w])


def all_valuations(n, names):
    for bits in itertools.product([False, True], repeat=n * len(names)):
        yield {name: {w for w in range(n) if bits[j * n + w]} for j, name in enumerate(names)}


def naive_tautology(f):
    """Truth-table check treating every K-subformula as an opaque atom."""
    atoms = []

    def collect(g):
        if isinstance(g, (Var, Know)):
            if g not in atoms:
                atoms.append(g)
        elif isinstance(g, (And, Or, Imp)):
            collect(g.lhs)
            collect(g.rhs)

    def value(g, env):
        if isinstance(g, Bottom):
            return False
        if isinstance(g, (Var, Know)):
            return env[g]
        if isinstance(g, And):
            return value(g.lhs, env) and value(g.rhs, env)
        if isinstance(g, Or):
            return value(g.lhs, env) or value(g.rhs, env)
        return (not value(g.lhs, env)) or value(g.rhs, env)

    collect(f)
    return all(value(f, dict(zip(atoms, bits)))
               for bits in itertools.product([False, True], repeat=len(atoms)))


FORK = {(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)}
CHAIN = {(0, 0), (1, 1), (0, 1)}


# One line per acceptance criterion, printed at the end of every pytest run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

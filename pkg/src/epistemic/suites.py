"""Property suites run by the CLI ``suite`` command and the acceptance tests.

Each runner returns a :class:`SuiteReport`; a suite passes when it records no
failures and finishes inside its time budget.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .decision import (Countermodel, NoneUpTo, Sat, Unsat, bounded_countermodel,
                       consistent, enumerate_mcs, extend_mcs, tableau_sat)
from .formula import (BOTTOM, TOP, And, Bottom, Formula, Imp, Know, Or, SchemaName, Var,
                      conjunct, imply, instantiate_schema, neg, parse, render,
                      subformula_closure)
from .generators import random_formula, random_proof
from .hilbert import (K, S4, S42, TOPOS4, CheckError, ProofBuilder, TO_CONJUNCT,
                      TO_IMPLY, check_proof, prove_imply_conjunct_equiv,
                      prove_K_conj_imply_factor, prove_K_over_conjunct,
                      prove_K_thm)
from .kripke import (FrameClass, Model, class_check, enumerate_frames,
                     enumerate_valuations, evaluate, extension, random_model,
                     relation_codes, validates_schema, valid_in, _frame_from_masks,
                     _mask_to_succ)
from .theorems import s4_suite, s42_suite, topo_suite
from .topospace import (BOX_AGENT, TopoModel, enumerate_topologies,
                        specialization_frame, topo_extension)
from .toposys import check_topo_proof, s4_to_topo, topo_to_s4

WDP = FrameClass.WEAKLY_DIRECTED_PREORDER


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    seconds: float = 0.0
    budget: Optional[float] = None

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.seconds <= self.budget

    @property
    def ok(self) -> bool:
        return not self.failures and self.within_budget

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        budget = f" (budget {self.budget:.0f}s)" if self.budget is not None else ""
        return (f"{status} {self.name}: {self.checks} checks, {len(self.failures)} failures, "
                f"{self.seconds:.1f}s{budget}")

    def lines(self, max_failures: int = 20) -> list:
        out = [self.summary()]
        out += [f"  note: {n}" for n in self.notes]
        out += [f"  failure: {f}" for f in self.failures[:max_failures]]
        if len(self.failures) > max_failures:
            out.append(f"  ... {len(self.failures) - max_failures} more failures")
        return out


def _timed(name: str, budget: Optional[float] = None):
    def wrap(fn: Callable[..., None]) -> Callable[..., SuiteReport]:
        def run(**kwargs) -> SuiteReport:
            report = SuiteReport(name, budget=budget)
            start = time.perf_counter()
            fn(report, **kwargs)
            report.seconds = time.perf_counter() - start
            return report
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _collapse(f: Formula) -> Formula:
    """Rename every agent to 1 and every variable to ``p``; preserves validity."""
    if isinstance(f, Bottom):
        return f
    if isinstance(f, Var):
        return Var("p")
    if isinstance(f, Know):
        return Know(1, _collapse(f.body))
    return type(f)(_collapse(f.lhs), _collapse(f.rhs))


# --------------------------------------------------------------------------

@_timed("soundness", budget=120.0)
def run_soundness(report: SuiteReport, seeds: int = 1000) -> None:
    """Every bundled S4.2 theorem holds on weakly directed preorders.

    Three routes: the pure evaluator over every frame with up to three worlds
    after collapsing to one agent and one variable; the vectorised search over
    every frame with up to three worlds for the theorem as stated; and the
    pure evaluator on seeded random models.
    """
    formulas = []
    for th in s42_suite():
        try:
            formulas.append((th.name, check_proof(S42, th.proof)))
        except CheckError as exc:
            report.fail(f"{th.name}: kernel rejected the proof ({exc})")
    report.notes.append(f"{len(formulas)} kernel-checked S4.2 theorems")

    small_models = [m for n in range(1, 4)
                    for fr in enumerate_frames(n, [1], WDP)
                    for m in enumerate_valuations(fr, ["p"])]
    for name, f in formulas:
        g = _collapse(f)
        for m in small_models:
            report.checks += 1
            if not valid_in(m, g):
                report.fail(f"{name}: collapsed form fails on a {m.frame.size}-world model")
                break
        report.checks += 1
        found = bounded_countermodel(WDP, f, 3)
        if isinstance(found, Countermodel):
            report.fail(f"{name}: countermodel with {found.witness.model.frame.size} worlds")

    for seed in range(seeds):
        m = random_model(1 + seed % 6, [1, 2], ["p", "q", "r"], WDP, seed)
        for name, f in formulas:
            report.checks += 1
            if not valid_in(m, f):
                report.fail(f"{name}: fails on random_model seed {seed}")
    report.notes.append(f"{len(small_models)} exhaustive one-agent models, {seeds} random models")


def _brute_preorders(n: int) -> list:
    out = []
    for code in range(1 << (n * n)):
        rel = {(a, b) for a in range(n) for b in range(n) if code >> (a * n + b) & 1}
        if all((a, a) in rel for a in range(n)) and all(
                (a, c) in rel for a, b in rel for b2, c in rel if b == b2):
            out.append(code)
    return out


@_timed("correspondence", budget=60.0)
def run_correspondence(report: SuiteReport) -> None:
    """Frame conditions against schema validity on three worlds."""
    n = 3
    brute = _brute_preorders(n)
    enumerated = list(relation_codes(n, FrameClass.PREORDER))
    report.checks += 1
    if len(brute) != 29 or sorted(brute) != sorted(enumerated):
        report.fail(f"preorder count: brute force {len(brute)}, enumerator {len(enumerated)}, expected 29")
    report.notes.append(f"{len(brute)} labeled preorders on 3 worlds")

    def frame(code: int):
        return _frame_from_masks(n, {1: _mask_to_succ(code, n)})

    wd = 0
    for code in brute:
        fr = frame(code)
        report.checks += 1
        has_wd = class_check(fr, 1, FrameClass.WEAKLY_DIRECTED)
        wd += has_wd
        if validates_schema(fr, SchemaName.Ax2, 1) != has_wd:
            report.fail(f"relation {code}: .2 validity differs from weak directedness")
    report.notes.append(f"{wd} of them weakly directed")

    for code in range(1 << (n * n)):
        fr = frame(code)
        report.checks += 2
        if validates_schema(fr, SchemaName.AxT, 1) != class_check(fr, 1, FrameClass.REFLEXIVE):
            report.fail(f"relation {code}: T validity differs from reflexivity")
        if validates_schema(fr, SchemaName.Ax4, 1) != class_check(fr, 1, FrameClass.TRANSITIVE):
            report.fail(f"relation {code}: 4 validity differs from transitivity")


@_timed("witnesses")
def run_witnesses(report: SuiteReport) -> None:
    """Countermodels separating S4, S4.2 and S5."""
    two = instantiate_schema(SchemaName.Ax2, 1, Var("p"))

    report.checks += 1
    fork = bounded_countermodel(FrameClass.PREORDER, two, 3)
    if not isinstance(fork, Countermodel):
        report.fail(f".2 on preorders up to 3 worlds: expected a countermodel, got {fork}")
    else:
        w = fork.witness
        fr = w.model.frame
        if evaluate(w.model, w.world, two) or class_check(fr, 1, FrameClass.WEAKLY_DIRECTED) \
                or not class_check(fr, 1, FrameClass.PREORDER):
            report.fail(".2 countermodel does not refute it on a non-directed preorder")
        report.notes.append(f".2 fork: {sorted(fr.relation(1))} at world {w.world}")

    report.checks += 1
    bound = bounded_countermodel(WDP, two, 4)
    if bound != NoneUpTo(4):
        report.fail(f".2 on weakly directed preorders up to 4 worlds: got {bound}")

    report.checks += 1
    s5 = parse("L1 p -> K1 L1 p")
    gap = bounded_countermodel(WDP, s5, 2)
    if not isinstance(gap, Countermodel) or evaluate(gap.witness.model, gap.witness.world, s5) \
            or not class_check(gap.witness.model.frame, 1, WDP):
        report.fail(f"axiom 5 on weakly directed preorders up to 2 worlds: got {gap}")


@_timed("equivalence")
def run_equivalence(report: SuiteReport, random_proofs: int = 100) -> None:
    """S4 and topoS4 proofs translate both ways with the same conclusion."""
    def s4_way(label, pr):
        report.checks += 1
        try:
            goal = check_proof(S4, pr)
            out = s4_to_topo(pr)
            if check_topo_proof(out) != goal:
                report.fail(f"{label}: S4 to topo changed the conclusion")
            if check_proof(S4, topo_to_s4(out)) != goal:
                report.fail(f"{label}: S4 round trip changed the conclusion")
        except (CheckError, ValueError) as exc:
            report.fail(f"{label}: {exc}")

    def topo_way(label, pr):
        report.checks += 1
        try:
            goal = check_topo_proof(pr)
            out = topo_to_s4(pr)
            if check_proof(S4, out) != goal:
                report.fail(f"{label}: topo to S4 changed the conclusion")
            if check_topo_proof(s4_to_topo(out)) != goal:
                report.fail(f"{label}: topo round trip changed the conclusion")
        except (CheckError, ValueError) as exc:
            report.fail(f"{label}: {exc}")

    for th in s4_suite():
        s4_way(th.name, th.proof)
    for th in topo_suite():
        topo_way(th.name, th.proof)
    for seed in range(random_proofs):
        s4_way(f"random S4 proof {seed}", random_proof(random.Random(seed), S4))
        topo_way(f"random topo proof {seed}", random_proof(random.Random(10_000 + seed), TOPOS4))
    report.notes.append(f"{len(s4_suite())} S4 and {len(topo_suite())} topoS4 curated theorems")


@_timed("builders")
def run_builders(report: SuiteReport, instances: int = 100) -> None:
    """Randomised instances of the list-encoding and K builders."""
    rng = random.Random(2024)
    systems = [K, S4, S42, TOPOS4]
    fml = lambda: random_formula(rng, 3, (1, 2), ("p", "q", "r"))  # noqa: E731

    def run(label, make, expected):
        report.checks += 1
        try:
            got = check_proof(sys, make())
        except (CheckError, ValueError) as exc:
            report.fail(f"{label} in {sys.name}: {exc}")
            return
        if got != expected:
            report.fail(f"{label} in {sys.name}: concluded {render(got)}")

    for k in range(instances):
        sys = systems[k % len(systems)]
        i = rng.choice([1, 2])
        psis = [fml() for _ in range(rng.randint(0, 4))]
        phi = rng.choice(psis) if psis and rng.random() < 0.7 else Or(fml(), TOP)
        direction = rng.choice([TO_CONJUNCT, TO_IMPLY])
        src_formula = imply(psis, phi) if direction == TO_CONJUNCT else Imp(conjunct(psis), phi)
        b = ProofBuilder(sys)
        source = b.build(b.taut(src_formula))
        dst = Imp(conjunct(psis), phi) if direction == TO_CONJUNCT else imply(psis, phi)
        run("imply/conjunct", lambda: prove_imply_conjunct_equiv(sys, psis, phi, direction, source), dst)

        fwd, bwd = prove_K_over_conjunct(sys, i, psis)
        boxed = conjunct(Know(i, x) for x in psis)
        run("K over conjunct", lambda: fwd, Imp(Know(i, conjunct(psis)), boxed))
        run("conjunct under K", lambda: bwd, Imp(boxed, Know(i, conjunct(psis))))

        a, c, t = fml(), fml(), fml()
        run("K_conj_imply_factor", lambda: prove_K_conj_imply_factor(sys, i, a, c, t),
            Imp(Imp(And(Know(i, a), Know(i, c)), t), Imp(Know(i, And(a, c)), t)))
        run("K_thm", lambda: prove_K_thm(sys, i, a, c),
            Imp(And(Know(i, a), neg(Know(i, neg(c)))), neg(Know(i, neg(And(a, c))))))


@_timed("oracle")
def run_oracle(report: SuiteReport, formulas: int = 500, bound: int = 4) -> None:
    """S4 tableau verdicts against exhaustive search over preorders."""
    rng = random.Random(7)
    counts = {"sat": 0, "unsat": 0}
    for k in range(formulas):
        f = random_formula(rng, 4, (1, 2), ("p", "q"))
        report.checks += 1
        verdict = tableau_sat("S4", f)
        # a model of f is a countermodel to ~f
        search = bounded_countermodel(FrameClass.PREORDER, neg(f), bound)
        if isinstance(verdict, Sat):
            counts["sat"] += 1
            w = verdict.witness
            if not evaluate(w.model, w.world, f):
                report.fail(f"#{k} {render(f)}: witness does not satisfy the formula")
            if not all(class_check(w.model.frame, a, FrameClass.PREORDER) for a in w.model.frame.agents):
                report.fail(f"#{k} {render(f)}: witness is not a preorder")
            if not isinstance(search, Countermodel):
                report.fail(f"#{k} {render(f)}: tableau Sat ({w.model.frame.size} worlds) "
                            f"but no model up to {bound} worlds")
        else:
            counts["unsat"] += 1
            if isinstance(search, Countermodel):
                report.fail(f"#{k} {render(f)}: tableau Unsat but search found a model")
    report.notes.append(f"{counts['sat']} satisfiable, {counts['unsat']} unsatisfiable")


def mcs_closures() -> list:
    """Closure suite for the MCS checks; every closure has at most 12 formulas."""
    seeds = ["K1 p", "K1 p -> p", "K1 (p & q)", "K1 p & K1 q", "~K1 ~K1 p -> K1 ~K1 ~p",
             "L1 p & K1 ~p", "K1 p -> K1 K1 p", "K1 p | K2 ~p", "p & (q | ~p)",
             "K1 (p -> q) -> K1 p -> K1 q", "K2 K1 p & ~p"]
    out = [subformula_closure(parse(s)) for s in seeds]
    rng = random.Random(11)
    while len(out) < 40:
        c = subformula_closure(random_formula(rng, 3, (1, 2), ("p", "q")))
        if 2 <= len(c) <= 12:
            out.append(c)
    return out


@_timed("mcs")
def run_mcs(report: SuiteReport) -> None:
    """Finite MCS invariants over the closure suite for K and S4."""
    total = 0
    for closure in mcs_closures():
        for logic in ("K", "S4"):
            sets = list(enumerate_mcs(logic, closure))
            total += len(sets)
            if not sets:
                report.fail(f"{logic} {[render(c) for c in closure]}: no MCS")
            for s in sets:
                report.checks += 1
                members = set(s.members)
                label = f"{logic} {{{', '.join(render(m) for m in s.members)}}}"
                for c in closure:
                    if (c in members) == (neg(c) in members):
                        report.fail(f"{label}: not exactly one of {render(c)} and its negation")
                if not consistent(logic, s.members):
                    report.fail(f"{label}: inconsistent")
                for c in closure:
                    if isinstance(c, And) and c.lhs in members and c.rhs in members and c not in members:
                        report.fail(f"{label}: not closed under conjunction at {render(c)}")
            seeds = [[]] + [[c] for c in closure] + [[neg(c)] for c in closure]
            for seed in seeds:
                if not consistent(logic, seed):
                    continue
                report.checks += 1
                ext = extend_mcs(logic, seed, closure)
                if not set(seed) <= set(ext.members):
                    report.fail(f"{logic} seed {[render(x) for x in seed]}: extension drops the seed")
                if ext not in sets:
                    report.fail(f"{logic} seed {[render(x) for x in seed]}: extension is not enumerated")
    report.notes.append(f"{len(mcs_closures())} closures, {total} maximal consistent sets")


@_timed("topo")
def run_topo(report: SuiteReport, max_points: int = 4, max_depth: int = 4,
             variables: tuple = ("p",)) -> None:
    """Interior semantics against the specialization preorder.

    Formulas of depth at most ``max_depth`` are covered exhaustively up to
    semantic equivalence: both evaluators are compositional, so at each depth
    it suffices to apply every connective to one representative formula per
    pair of (topological, Kripke) extensions reached so far.
    """
    atoms = [BOTTOM] + [Var(v) for v in variables]
    k = len(variables)
    models = 0
    for n in range(1, max_points + 1):
        for opens in enumerate_topologies(n):
            sets = [[w for w in range(n) if m >> w & 1] for m in opens]
            for val in range(1 << (n * k)):
                models += 1
                t = TopoModel(n, sets, {v: [w for w in range(n) if val >> (j * n + w) & 1]
                                        for j, v in enumerate(variables)})
                km = specialization_frame(t)
                tc: dict = {}
                kc: dict = {}
                seen: dict = {}
                frontier = []
                for f in atoms:
                    key = (topo_extension(t, f, tc), extension(km, f, kc))
                    if key[0] != key[1]:
                        report.fail(f"{n} points, opens {opens}: atom {render(f)}")
                    if key not in seen:
                        seen[key] = f
                        frontier.append(f)
                for _ in range(max_depth):
                    reps = list(seen.values())
                    fresh = set(frontier)
                    candidates = [Know(BOX_AGENT, f) for f in frontier]
                    for a, b in itertools.product(reps, repeat=2):
                        if a in fresh or b in fresh:
                            candidates += [And(a, b), Or(a, b), Imp(a, b)]
                    frontier = []
                    for f in candidates:
                        report.checks += 1
                        te, ke = topo_extension(t, f, tc), extension(km, f, kc)
                        if te != ke:
                            report.fail(f"{n} points, opens {opens}, valuation {val:b}: {render(f)}")
                            continue
                        if (te, ke) not in seen:
                            seen[(te, ke)] = f
                            frontier.append(f)
                    if not frontier:
                        break
    report.notes.append(f"{models} topological models over {', '.join(variables)}")


@_timed("roundtrip")
def run_roundtrip(report: SuiteReport, formulas: int = 1000) -> None:
    """``parse(render(f)) == f`` on random formulas with sugar and wide agents."""
    rng = random.Random(99)
    for k in range(formulas):
        f = random_formula(rng, rng.randint(0, 6), (1, 2, 10, 123), ("p", "q", "x_1", "foo9"), sugar=True)
        report.checks += 1
        text = render(f)
        try:
            back = parse(text)
        except ValueError as exc:
            report.fail(f"#{k} {text!r}: {exc}")
            continue
        if back != f:
            report.fail(f"#{k} {text!r} parsed back as {render(back)!r}")


SUITES = {
    "soundness": run_soundness,
    "correspondence": run_correspondence,
    "witnesses": run_witnesses,
    "equivalence": run_equivalence,
    "builders": run_builders,
    "oracle": run_oracle,
    "mcs": run_mcs,
    "topo": run_topo,
    "roundtrip": run_roundtrip,
}

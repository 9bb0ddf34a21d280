"""Command-line front end.

Exit status: 0 on success, 1 on a logical failure (rejected proof, or a
countermodel where none was expected), 2 on usage, parse or file errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .certificate import CertificateError, format_certificate, parse_certificate
from .decision import (Countermodel, Valid, bounded_countermodel, decide_valid,
                       enumerate_mcs, extend_mcs, tableau_sat, Sat)
from .formula import ParseError, parse, render, subformula_closure
from .hilbert import S4, SYSTEMS, TOPOS4, CheckError, check_proof, system_named
from .kripke import (CapExceeded, FrameClass, ModelFormatError, class_check,
                     extension, format_pointed, parse_model,
                     random_model)
from .suites import SUITES
from .theorems import (BELIEF_PRINCIPLES, prove_belief_conjunction,
                       prove_belief_definition)
from .topospace import TopoFormatError, parse_topo, topo_extension
from .toposys import prove_axiom_K_topo, s4_to_topo, topo_to_s4
from . import hilbert

OK, FAILURE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def _read(path: Optional[str], flag: str) -> str:
    if path is None:
        raise UsageError(f"{flag} FILE is required")
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{flag}: {exc.strerror}: {path}") from None


def _frame_class(name: str) -> FrameClass:
    try:
        return FrameClass(name)
    except ValueError:
        choices = ", ".join(c.value for c in FrameClass)
        raise UsageError(f"--class: unknown class {name!r} (choose from {choices})") from None


def _load_model(args):
    """The model named by --model, or a seeded random model when --seed is given."""
    if args.model is None and args.seed is not None:
        agents = range(1, args.agents + 1)
        variables = args.vars.split(",") if args.vars else ["p"]
        m = random_model(args.bound or 3, agents, variables, _frame_class(args.cls or "all"), args.seed)
        return m, None
    text = _read(args.model, "--model")
    try:
        return parse_model(text)
    except ModelFormatError as exc:
        raise UsageError(f"--model: {exc}") from None


def _worlds(mask: int) -> str:
    return " ".join(str(w) for w in range(mask.bit_length()) if mask >> w & 1) or "-"


# --------------------------------------------------------------------------
# Commands

def cmd_parse(args, out) -> int:
    out.write(render(_formula(args.formula)) + "\n")
    return OK


def cmd_eval(args, out) -> int:
    f = _formula(args.formula)
    text = _read(args.model, "--model") if args.model is not None else None
    if text is not None and text.lstrip().startswith("points"):
        try:
            t = parse_topo(text)
        except (TopoFormatError, ValueError) as exc:
            raise UsageError(f"--model: {exc}") from None
        try:
            out.write(f"true at: {_worlds(topo_extension(t, f))}\n")
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return OK
    m, world = _load_model(args)
    ext = extension(m, f)
    if world is None:
        out.write(f"true at: {_worlds(ext)}\n")
    else:
        out.write("TRUE\n" if ext >> world & 1 else "FALSE\n")
    return OK


def cmd_classify(args, out) -> int:
    m, _ = _load_model(args)
    fr = m.frame
    if args.cls is not None:
        cls = _frame_class(args.cls)
        bad = [a for a in fr.agents if not class_check(fr, a, cls)]
        out.write(f"{cls.value}: {'yes' if not bad else 'no (agent ' + ', '.join(map(str, bad)) + ')'}\n")
        return FAILURE if bad else OK
    for a in fr.agents:
        member = [c.value for c in FrameClass if class_check(fr, a, c)]
        out.write(f"agent {a}: {' '.join(member)}\n")
    return OK


def _logic(args) -> str:
    logic = args.logic or "S4"
    if logic not in ("K", "S4"):
        raise UsageError(f"--logic: {logic} has no decision procedure; use 'search' for bounded checks")
    return logic


def cmd_decide(args, out) -> int:
    f = _formula(args.formula)
    logic = _logic(args)
    try:
        if args.sat:
            res = tableau_sat(logic, f)
            if isinstance(res, Sat):
                out.write("SAT\n" + format_pointed(res.witness))
                return OK
            out.write("UNSAT\n")
            return FAILURE
        res = decide_valid(logic, f)
    except CapExceeded as exc:
        raise UsageError(str(exc)) from None
    if isinstance(res, Valid):
        out.write("VALID\n")
        return OK
    out.write("COUNTERMODEL\n" + format_pointed(res.witness))
    return FAILURE


def cmd_search(args, out) -> int:
    f = _formula(args.formula)
    cls = _frame_class(args.cls or "wd-preorder")
    bound = args.bound if args.bound is not None else 4
    try:
        res = bounded_countermodel(cls, f, bound)
    except CapExceeded as exc:
        raise UsageError(str(exc)) from None
    if isinstance(res, Countermodel):
        out.write("COUNTERMODEL\n" + format_pointed(res.witness))
        return FAILURE
    out.write(f"NONE-UP-TO {res.bound}\n")
    return OK


def _certificate(args):
    text = _read(args.proof, "--proof")
    try:
        return parse_certificate(text)
    except CertificateError as exc:
        raise UsageError(f"ERROR line {exc.line}: {exc.message}") from None


def cmd_check(args, out) -> int:
    system, pr = _certificate(args)
    try:
        f = check_proof(system, pr)
    except CheckError as exc:
        out.write(f"ERROR line {exc.step}: {exc.reason}\n")
        return FAILURE
    out.write(f"OK {render(f)}\n")
    return OK


def _derivations() -> dict:
    def with_system(builder):
        return lambda i, system, *fs: builder(system, i, *fs)

    table = {
        "k-thm": (2, with_system(hilbert.prove_K_thm)),
        "k-impl-form": (2, with_system(hilbert.prove_K_impl_form)),
        "k-conj-imply-factor": (3, with_system(hilbert.prove_K_conj_imply_factor)),
        "k-over-conjunct": (-1, lambda i, system, *fs: hilbert.prove_K_over_conjunct(system, i, fs)[0]),
        "conjunct-under-k": (-1, lambda i, system, *fs: hilbert.prove_K_over_conjunct(system, i, fs)[1]),
        "axiom-k-topo": (2, lambda i, system, *fs: prove_axiom_K_topo(i, *fs)),
        "belief-definition": (1, lambda i, system, phi: prove_belief_definition(i, phi)),
        "belief-conjunction": (2, lambda i, system, a, c: prove_belief_conjunction(i, a, c)),
    }
    for name, prover in BELIEF_PRINCIPLES.items():
        table[name.replace(" ", "-")] = (1, lambda i, system, phi, prover=prover: prover(i, phi))
    return table


_FIXED_SYSTEM = {"axiom-k-topo": "TOPOS4", "belief-definition": "S42", "belief-conjunction": "S42",
                 **{n.replace(" ", "-"): "S42" for n in BELIEF_PRINCIPLES}}


def cmd_derive(args, out) -> int:
    table = _derivations()
    if args.name == "list":
        for name, (arity, _) in table.items():
            shape = "FORMULA..." if arity < 0 else " ".join(["FORMULA"] * arity)
            out.write(f"{name} {shape}\n")
        return OK
    if args.name not in table:
        raise UsageError(f"unknown derivation {args.name!r}; try 'derive list'")
    arity, builder = table[args.name]
    fs = [_formula(t) for t in args.formulas]
    if arity >= 0 and len(fs) != arity:
        raise UsageError(f"{args.name} takes {arity} formula argument(s), got {len(fs)}")
    fixed = _FIXED_SYSTEM.get(args.name)
    if fixed and args.logic and args.logic != fixed:
        raise UsageError(f"--logic: {args.name} is derived in {fixed}")
    try:
        system = system_named(fixed or args.logic or "S4")
    except ValueError as exc:
        raise UsageError(f"--logic: {exc}") from None
    try:
        pr = builder(args.agent, system, *fs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(format_certificate(system, pr))
    return OK


def cmd_translate(args, out) -> int:
    system, pr = _certificate(args)
    try:
        if system is S4:
            out.write(format_certificate(TOPOS4, s4_to_topo(pr)))
        elif system is TOPOS4:
            out.write(format_certificate(S4, topo_to_s4(pr)))
        else:
            raise UsageError(f"translate needs an S4 or TOPOS4 certificate, got {system.name}")
    except CheckError as exc:
        out.write(f"ERROR line {exc.step}: {exc.reason}\n")
        return FAILURE
    return OK


def cmd_mcs(args, out) -> int:
    logic = _logic(args)
    fs = [_formula(t) for t in args.formulas]
    closure = list(dict.fromkeys(g for f in fs for g in subformula_closure(f)))
    try:
        if args.extend is not None:
            seed = [_formula(t) for t in args.extend]
            sets = [extend_mcs(logic, seed, closure)]
        else:
            sets = list(enumerate_mcs(logic, closure))
    except (CapExceeded, ValueError) as exc:
        raise UsageError(str(exc)) from None
    for s in sets:
        out.write("{" + ", ".join(render(m) for m in s.members) + "}\n")
    return OK


def cmd_suite(args, out) -> int:
    names = list(SUITES) if args.name == "all" else [args.name]
    if any(n not in SUITES for n in names):
        raise UsageError(f"unknown suite {args.name!r} (choose from all, {', '.join(SUITES)})")
    failed = False
    for n in names:
        report = SUITES[n]()
        out.write("\n".join(report.lines()) + "\n")
        out.flush()
        failed |= not report.ok
    return FAILURE if failed else OK


COMMANDS = {
    "parse": cmd_parse, "eval": cmd_eval, "classify": cmd_classify, "decide": cmd_decide,
    "search": cmd_search, "check": cmd_check, "derive": cmd_derive, "translate": cmd_translate,
    "mcs": cmd_mcs, "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="epistemic", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--logic", choices=sorted(SYSTEMS), help="proof system or decision logic")
    common.add_argument("--class", dest="cls", metavar="CLASS",
                        help="frame class: " + ", ".join(c.value for c in FrameClass))
    common.add_argument("--bound", type=int, metavar="N", help="world bound (search) or model size (random)")
    common.add_argument("--seed", type=int, metavar="N", help="seed for a random model")
    common.add_argument("--model", metavar="FILE", help="Kripke or topological model file")
    common.add_argument("--proof", metavar="FILE", help="proof certificate file")
    common.add_argument("--agents", type=int, default=1, metavar="N", help="agents 1..N of a random model")
    common.add_argument("--vars", metavar="LIST", help="comma-separated variables of a random model")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and pretty-print a formula")
    p.add_argument("formula")
    p = sub.add_parser("eval", parents=[common], help="evaluate a formula in a model")
    p.add_argument("formula")
    sub.add_parser("classify", parents=[common], help="frame classes of a model's relations")
    p = sub.add_parser("decide", parents=[common], help="tableau validity (or --sat) for K and S4")
    p.add_argument("--sat", action="store_true", help="decide satisfiability instead")
    p.add_argument("formula")
    p = sub.add_parser("search", parents=[common], help="exhaustive countermodel search")
    p.add_argument("formula")
    sub.add_parser("check", parents=[common], help="check a proof certificate")
    p = sub.add_parser("derive", parents=[common], help="emit a certificate from a builder")
    p.add_argument("--agent", type=int, default=1, help="agent index of the derivation")
    p.add_argument("name", help="derivation name, or 'list'")
    p.add_argument("formulas", nargs="*")
    sub.add_parser("translate", parents=[common], help="translate between S4 and TOPOS4 certificates")
    p = sub.add_parser("mcs", parents=[common], help="maximal consistent sets over a closure")
    p.add_argument("--extend", action="append", metavar="FORMULA",
                   help="seed formula to extend greedily (repeatable) instead of enumerating")
    p.add_argument("formulas", nargs="+")
    p = sub.add_parser("suite", parents=[common], help="run a property suite")
    p.add_argument("name", help="all, " + ", ".join(SUITES))
    return ap


def run(argv: Sequence[str], out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(list(argv))
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        msg = str(exc)
        print(msg if msg.startswith("ERROR") else f"error: {msg}", file=sys.stderr)
        return USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())

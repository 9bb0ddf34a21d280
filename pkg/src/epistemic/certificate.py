"""Text certificates for Hilbert and topological proofs.

::

    system S4
    1: p -> p ; TAUT
    2: K1 (p -> p) ; NEC 1 1

Rules are ``TAUT``, ``AXK``, ``AXT``, ``AX4``, ``AX2``, ``AXN``, ``AXR``,
``MP j k``, ``NEC i j`` and ``RM i j`` (agent first, then the cited step).
Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from .formula import ParseError, SchemaName, parse, render
from .hilbert import (Axiom, Mp, Nec, Proof, Rm, Step, System, Taut,
                      check_proof, system_named)

_SCHEMAS = {s.value: s for s in SchemaName}


class CertificateError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


def _format_justification(just) -> str:
    if isinstance(just, Taut):
        return "TAUT"
    if isinstance(just, Axiom):
        return just.schema.value
    if isinstance(just, Mp):
        return f"MP {just.major} {just.minor}"
    if isinstance(just, Nec):
        return f"NEC {just.agent} {just.premise}"
    if isinstance(just, Rm):
        return f"RM {just.agent} {just.premise}"
    raise TypeError(f"unknown justification {just!r}")


def format_certificate(system: System, pr: Proof) -> str:
    lines = [f"system {system.name}"]
    for n, step in enumerate(pr.steps, 1):
        lines.append(f"{n}: {render(step.formula)} ; {_format_justification(step.justification)}")
    return "\n".join(lines) + "\n"


def _parse_justification(text: str, n: int):
    words = text.split()
    if not words:
        raise CertificateError(n, "missing justification")
    head, args = words[0].upper(), words[1:]
    arity = {"TAUT": 0, "MP": 2, "NEC": 2, "RM": 2}.get(head, 0 if head in _SCHEMAS else None)
    if arity is None:
        raise CertificateError(n, f"unknown rule {words[0]!r}")
    if len(args) != arity or not all(a.isdigit() for a in args):
        raise CertificateError(n, f"{head} expects {arity} numeric argument(s)")
    nums = [int(a) for a in args]
    if head == "TAUT":
        return Taut()
    if head in _SCHEMAS:
        return Axiom(_SCHEMAS[head])
    if head == "MP":
        return Mp(*nums)
    if head == "NEC":
        return Nec(nums[1], nums[0])
    return Rm(nums[1], nums[0])


def parse_certificate(text: str) -> tuple:
    """Read a certificate; returns ``(system, proof)``."""
    system = None
    steps = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if system is None:
            head, _, name = line.partition(" ")
            if head != "system":
                raise CertificateError(0, "certificate must start with a 'system' line")
            try:
                system = system_named(name.strip())
            except ValueError as exc:
                raise CertificateError(0, str(exc)) from None
            continue
        number, colon, rest = line.partition(":")
        n = len(steps) + 1
        if not colon or not number.strip().isdigit():
            raise CertificateError(n, "expected '<n>: <formula> ; <rule>'")
        if int(number) != n:
            raise CertificateError(n, f"step numbered {number.strip()}, expected {n}")
        body, semi, just = rest.rpartition(";")
        if not semi:
            raise CertificateError(n, "missing ';' before the justification")
        try:
            f = parse(body)
        except ParseError as exc:
            raise CertificateError(n, f"formula: {exc}") from None
        steps.append(Step(f, _parse_justification(just, n)))
    if system is None:
        raise CertificateError(0, "empty certificate")
    if not steps:
        raise CertificateError(1, "certificate has no steps")
    return system, Proof(tuple(steps))


def check_certificate(text: str):
    """Parse and check; returns the conclusion or raises ``CheckError``."""
    system, pr = parse_certificate(text)
    return check_proof(system, pr)

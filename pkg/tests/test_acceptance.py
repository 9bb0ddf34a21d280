"""Acceptance criteria, one test per criterion.

Each test runs the corresponding property suite at full size and fails on any
violation or a blown time budget.  One PASS/FAIL line per criterion is printed
in the pytest terminal summary; ``python tests/test_acceptance.py`` prints the
same lines without pytest.
"""

import sys

import pytest

from conftest import ACCEPTANCE_LINES
from epistemic.suites import SUITES

CRITERIA = [
    ("1 S4.2 soundness on weakly directed preorders", "soundness"),
    ("2 frame correspondence for T, 4 and .2", "correspondence"),
    ("3 countermodels separating S4, S4.2 and S5", "witnesses"),
    ("4 S4 and topoS4 proof translation", "equivalence"),
    ("5 derived-rule builders", "builders"),
    ("6 S4 tableau against bounded search", "oracle"),
    ("7 finite maximal consistent sets", "mcs"),
    ("8 interior semantics against the specialization preorder", "topo"),
    ("9 parser round trip", "roundtrip"),
]


@pytest.mark.parametrize("label, suite", CRITERIA, ids=[s for _, s in CRITERIA])
def test_criterion(label, suite):
    report = SUITES[suite]()
    ACCEPTANCE_LINES.append(_line(label, report))
    print("\n".join(report.lines()))
    assert not report.failures, "\n".join(report.failures[:20])
    assert report.within_budget, f"took {report.seconds:.1f}s, budget {report.budget}s"


def _line(label, report):
    return f"{'PASS' if report.ok else 'FAIL'} criterion {label}: {report.summary()[5:]}"


if __name__ == "__main__":
    failed = False
    for label, suite in CRITERIA:
        report = SUITES[suite]()
        print(_line(label, report), flush=True)
        failed |= not report.ok
    sys.exit(1 if failed else 0)

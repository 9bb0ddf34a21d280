"""Multi-agent epistemic logic: formulas, Kripke and topological semantics,
Hilbert proof checking for K, S4, S4.2 and topoS4, and decision procedures."""

__version__ = "0.1.0"

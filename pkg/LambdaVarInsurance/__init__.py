"""Optimal insurance contracts under Lambda-Value-at-Risk.

``core`` holds loss laws, Λ functions, risk measures and contracts;
``logic`` holds the solvers, oracles and the run engine.
"""

__all__ = ["core", "logic"]

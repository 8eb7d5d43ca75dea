"""Exact-arithmetic calculator for torus-graded unipotent representation
categories: weight filtrations, extension classes, independence axioms,
blended extensions, and mixed-Tate period reports."""

__version__ = "0.1.0"

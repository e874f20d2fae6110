"""Exact invariants, comb decompositions and theorem audits for decorated rooted trees."""

__version__ = "0.1.0"

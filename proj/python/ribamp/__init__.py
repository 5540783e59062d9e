"""Ribbon graph amplitudes over truncated spectra.

Thin wrapper around the compiled extension: parse or load ribbon graphs,
inspect their combinatorial profile, predict divergence orders, evaluate
amplitudes, and verify scaling exponents against those predictions.
"""

from ._ribamp import Error, Graph, load, max_omega, parse

__all__ = ["Error", "Graph", "load", "max_omega", "parse"]

"""
chebytower: exact arithmetic on the tower p_0 = x^2 - 2, p_n = p_(n-1)^2 - 2.

Modules:
    polyseq     generation of p_n / q_n, identities, high-precision residuals
    coeffs      coefficient rows by back-substitution, level recursion, closed forms
    invariants  the n-independent invariants a_{j,k} (recursion and Vandermonde solve)
    trees       labeled ordered trees and weighted Catalan numbers
    verify      cross-validation suite run as a dependency graph
"""

__version__ = "0.1.0"

from .errors import ChebytowerError, ConsistencyError, DomainError, ResourceGuardError
from .polyseq import EvenPoly, gen_p, gen_q
from .coeffs import CoeffVector, coeffs_backsub, coeffs_level_recursion
from .invariants import InvariantTable, invariants_recursive, invariants_vandermonde
from .trees import OrderedTree, enumerate_trees, weighted_catalan

__all__ = [
    "ChebytowerError",
    "CoeffVector",
    "ConsistencyError",
    "DomainError",
    "EvenPoly",
    "InvariantTable",
    "OrderedTree",
    "ResourceGuardError",
    "coeffs_backsub",
    "coeffs_level_recursion",
    "enumerate_trees",
    "gen_p",
    "gen_q",
    "invariants_recursive",
    "invariants_vandermonde",
    "weighted_catalan",
]

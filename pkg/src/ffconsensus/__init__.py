"""Consensus and synchronization of linear agents over prime finite fields."""

from .errors import FFError
from .field import FieldSpec, GF, field_inv
from .ffmatrix import (CharPoly, FMatrix, char_poly, classify, kron, left_nullspace, mat,
                       mat_det, mat_inv)
from .admissibility import (AdmissibilityReport, GraphSpec, check_admissible, consensus_alpha,
                            laplacian, seed_admissible, similar_transform)
from .generators import (CardinalityReport, GenConfig, cardinalities, coset_representatives,
                         enumerate_sets, gen_sar, gen_stabilizer, gen_tf, perm_equiv_lex,
                         perm_equiv_naive)
from .dynamics import (AgentSystem, SimulationTrace, closed_loop, simulate_lti, simulate_scalar,
                       stabilizing_gain, staircase, verify_closed_loop_spectrum)

__all__ = [
    "FFError", "FieldSpec", "GF", "field_inv",
    "CharPoly", "FMatrix", "char_poly", "classify", "kron", "left_nullspace", "mat",
    "mat_det", "mat_inv",
    "AdmissibilityReport", "GraphSpec", "check_admissible", "consensus_alpha", "laplacian",
    "seed_admissible", "similar_transform",
    "CardinalityReport", "GenConfig", "cardinalities", "coset_representatives",
    "enumerate_sets", "gen_sar", "gen_stabilizer", "gen_tf", "perm_equiv_lex",
    "perm_equiv_naive",
    "AgentSystem", "SimulationTrace", "closed_loop", "simulate_lti", "simulate_scalar",
    "stabilizing_gain", "staircase", "verify_closed_loop_spectrum",
]

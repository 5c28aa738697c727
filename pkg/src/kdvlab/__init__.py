"""Traveling-wave solutions of the KdV, KdV2 and KdV3 equations.

Symbolic derivation of ansatz coefficient conditions, exact/numeric
solving with nonexistence certificates, residual verification, and a
pseudo-spectral evolver.
"""

from .ansatz import AnsatzFamily, ConditionSystem, derive_conditions, make_ansatz, substitute, volume_constraint
from .equations import EquationSpec, Term, UnsupportedOrderError, get_equation
from .evolver import EvolutionRun, collision_experiment, evolve, measure_velocity, stable_dt
from .solver import (
    ConsistencyVerdict,
    SolutionParams,
    consistency_analysis,
    solve,
    solve_cnoidal,
    solve_soliton,
    solve_superposition,
)
from .special_functions import EllipticDomainError, complete_E, complete_K, jacobi_cn_sn_dn
from .verifier import GridSpec, WaveField, eval_field, residual, volume_mean

__version__ = "0.1.0"

__all__ = [
    "AnsatzFamily", "ConditionSystem", "derive_conditions", "make_ansatz", "substitute", "volume_constraint",
    "EquationSpec", "Term", "UnsupportedOrderError", "get_equation",
    "EvolutionRun", "collision_experiment", "evolve", "measure_velocity", "stable_dt",
    "ConsistencyVerdict", "SolutionParams", "consistency_analysis", "solve", "solve_cnoidal",
    "solve_soliton", "solve_superposition",
    "EllipticDomainError", "complete_E", "complete_K", "jacobi_cn_sn_dn",
    "GridSpec", "WaveField", "eval_field", "residual", "volume_mean",
]

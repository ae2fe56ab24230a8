"""Truncated algebras of matrix coefficients between two functors, with their Haar state and coaction."""
from .classes import ClassInfo, ClassTable, DecompositionError, decompose_classes, minimal_projection
from .algebra import (
    AlgebraElement, AlgebraError, MixedClassError, TruncatedAlgebra, TruncationOverflow,
    algebra_from_json, build_algebra, build_functor, j_involution, omega_choice_residual,
    omega_evaluation_matrix, resolve_category, solution_change_residual, twisted_solutions,
)
from .coaction import Coaction, coaction_report, fixed_point_dimension, fundamental_identities
from .multiplicity import Multiplicity, SingularConjugation, multiplicity_table, quantum_multiplicity
from .oracle import brute_force_dimension

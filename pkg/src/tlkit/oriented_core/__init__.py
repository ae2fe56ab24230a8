"""Oriented diagram calculus: words in x and its conjugate X."""
from .morphism import (
    OrientationError, OrientedMorphism, R, Rbar, adjoint, basis, check_word, compatible,
    compose, conjugate_word, forget, from_json, identity, oriented_basis, tensor, to_json,
)
from .calculus import (
    bullet, equals, hom_dim, is_negligible, left_inverse, right_inverse, solution, trace,
    trace_form,
)
from .rewriting import (
    MOVES, Move, RewriteError, TermExpression, check_move_table, evaluate_directly,
    normal_form, rewrite,
)

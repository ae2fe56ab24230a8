"""Exact diagram calculus for the unoriented Temperley-Lieb category."""
from .scalars import (
    Backend, BackendError, ComplexBackend, ExactnessRequired, QElem, QuotientRingBackend,
    RationalBackend, RationalFunctionBackend, backend_from_descriptor, root_of_unity_backend,
    to_complex_at,
)
from .diagram import DiagramError, TLDiagram
from .morphism import (
    MorphismError, SignedReductionDisabled, TLMorphism, adjoint, basis, cap, closure_trace,
    compose, cup, cupcap, from_json, identity, left_inverse, markov_trace, scalar_value, tensor,
    to_json,
)
from .forms import (
    RootOfUnityObstruction, annihilates_cups, gram_matrix, hom_dim, is_negligible,
    jones_wenzl, quantum_integers, trace_form,
)
from .linalg import determinant, leading_minors, rank

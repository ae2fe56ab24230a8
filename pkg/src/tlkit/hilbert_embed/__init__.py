"""Matrix embeddings of the diagram categories and the functor-level checks built on them."""
from .spec import EmbeddingSpec, SpecError, implied_d, random_spec, validate
from .embedding import (
    CacheLimitExceeded, Embedding, EmbeddingError, KindMismatch, LoopValueMismatch, QMatrix,
    build_embedding, classification_invariant, diagram_matrix, evaluate, inject_fault,
    markov_functional, q_matrix, q_report, standardness, verify_conjugate,
)
from .category import CategoryError, SingularGram, SourceCategory, category_for
from .functors import DiagrammaticFunctor, Functor, QComposite, TensorFunctor, support_projection
from .quasitensor import (
    conjugation_of_glue, glue_conjugation_residual, lemma_sum_residual, quasitensor_verify,
    support_naturality_residual, triple_glue,
)

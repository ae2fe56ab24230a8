"""Temperley-Lieb diagram calculus, Hilbert space embeddings and the ergodic algebras they induce."""
__version__ = "0.1.0"

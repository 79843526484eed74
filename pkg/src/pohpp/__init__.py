"""Hamiltonian paths and cycles under precedence constraints."""
from .core import (
    CYCLE,
    DECISION,
    MIN,
    PATH,
    CycleInConstraints,
    Embedding,
    Graph,
    Instance,
    InvalidCertificate,
    InvalidEmbedding,
    NotBlockGraph,
    ParseError,
    Poset,
    RangeError,
    Solution,
    TooLarge,
    build_poset,
    read_instance,
    validate_solution,
    write_instance,
)

__version__ = "0.1.0"

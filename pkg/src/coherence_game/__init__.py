"""Simulator for the coherence-without-re-interference communication game."""

from .bloch import BlochObservable, observable_matrix, projector
from .errors import (
    CoherenceGameError,
    ConfigurationError,
    SuperselectionError,
    UnsupportedOccupancyError,
    ValidationError,
)
from .fock import Statistics
from .game import ConditionalDistribution, interference_term, win_probability

__all__ = [
    "BlochObservable",
    "CoherenceGameError",
    "ConditionalDistribution",
    "ConfigurationError",
    "Statistics",
    "SuperselectionError",
    "UnsupportedOccupancyError",
    "ValidationError",
    "interference_term",
    "observable_matrix",
    "projector",
    "win_probability",
]
__version__ = "0.1.0"

"""Extended triangular systems over Borel sets and a finite model of their operator algebras."""

__version__ = "0.1.0"

from .borel import EMPTY, FULL, BorelSet, Interval, RefinementPartition, refinement
from .tsys import (
    AxiomReport,
    ExtTriSystem,
    IndexTemplate,
    TriSystem,
    build_example,
    check_extended,
    check_triangular,
    complete_to_maximal,
    derive_support_system,
    induced_cut_at,
    induced_cuts,
    is_maximal,
)

__all__ = [
    "EMPTY",
    "FULL",
    "AxiomReport",
    "BorelSet",
    "ExtTriSystem",
    "IndexTemplate",
    "Interval",
    "RefinementPartition",
    "TriSystem",
    "build_example",
    "check_extended",
    "check_triangular",
    "complete_to_maximal",
    "derive_support_system",
    "induced_cut_at",
    "induced_cuts",
    "is_maximal",
    "refinement",
]

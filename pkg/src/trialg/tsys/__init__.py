from .system import (
    KINDS,
    AxiomReport,
    ExtTriSystem,
    IndexTemplate,
    TriSystem,
    Violation,
    check_extended,
    check_triangular,
)
from .order import Cut, complete_to_maximal, induced_cut_at, induced_cuts, is_maximal
from .examples import build_example
from .support import derive_support_system

__all__ = [
    "KINDS",
    "AxiomReport",
    "Cut",
    "ExtTriSystem",
    "IndexTemplate",
    "TriSystem",
    "Violation",
    "check_extended",
    "build_example",
    "check_triangular",
    "complete_to_maximal",
    "derive_support_system",
    "induced_cut_at",
    "induced_cuts",
    "is_maximal",
]

"""Finite-model workbench for quantum-Wajsberg algebras."""

from .algebra import FiniteAlgebra, FormatError, Subset, format_algebra, load_algebra, parse_algebra
from .axioms import CLASS_NAMES, ClassReport, check_class, classify
from .builtins import builtin
from .centers import oml_center, wajsberg_center
from .search import SearchSpec, canonical_key, enumerate_models, find_countermodel, isomorphic
from .terms import holds, parse

__version__ = "0.1.0"

__all__ = [
    "CLASS_NAMES", "ClassReport", "FiniteAlgebra", "FormatError", "SearchSpec", "Subset",
    "builtin", "canonical_key", "check_class", "classify", "enumerate_models",
    "find_countermodel", "format_algebra", "holds", "isomorphic", "load_algebra",
    "oml_center", "parse", "parse_algebra", "wajsberg_center",
]

"""Governing extensions and Z/pZ-extensions with prescribed ramification over Q and quadratic fields."""

from .classgroup import class_group, fundamental_unit, is_principal_with_generator, unit_group
from .errors import GoverningError, InvariantFailure, ValidationError
from .estimator import GoverningExtension
from .fields import Field, FieldElement, Ideal, Place, factor_rational_prime, make_field, parse_place, parse_places
from .governing import SymbolNormalization, governing_matrix, power_residue_symbol
from .oracle import ray_class_group, verify_theorem_main
from .relations import (
    count_exact_ramified_classes,
    count_full_support_relations,
    koch_dimension,
    relation_space,
    wiles_greenberg_ledger,
)
from .virtual_units import exact_sequence_report, virtual_unit_basis

__version__ = "0.1.0"

__all__ = [
    "Field",
    "FieldElement",
    "GoverningError",
    "GoverningExtension",
    "Ideal",
    "InvariantFailure",
    "Place",
    "SymbolNormalization",
    "ValidationError",
    "class_group",
    "count_exact_ramified_classes",
    "count_full_support_relations",
    "exact_sequence_report",
    "factor_rational_prime",
    "fundamental_unit",
    "governing_matrix",
    "is_principal_with_generator",
    "koch_dimension",
    "make_field",
    "parse_place",
    "parse_places",
    "power_residue_symbol",
    "ray_class_group",
    "relation_space",
    "unit_group",
    "verify_theorem_main",
    "virtual_unit_basis",
    "wiles_greenberg_ledger",
]

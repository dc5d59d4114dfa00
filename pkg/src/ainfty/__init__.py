"""Exact homotopy transfer, minimal A∞-models and Massey products for small dg algebras."""

from .fields import GF, QQ, Field, PrimeField, Rationals, parse_field
from .graded import GradedMap, GradedSpace, MultiMap, koszul_eval, suspension_sign
from .linalg import solve_linear
from .dga import DGAlgebra, TransferData, cohomology, induced_product, validate
from .ainf import AInfinityMorphism, AInfinityStructure, check_morphism, check_stasheff, find_isotopy
from .transfer import canonical_minimal_model, vary_homotopy
from .massey import brute_force_massey, massey_membership_theorem_check, triple_massey
from .io import parse_algebra

__version__ = "0.1.0"

__all__ = [
    "GF", "QQ", "Field", "PrimeField", "Rationals", "parse_field",
    "GradedMap", "GradedSpace", "MultiMap", "koszul_eval", "suspension_sign",
    "solve_linear",
    "DGAlgebra", "TransferData", "cohomology", "induced_product", "validate",
    "AInfinityMorphism", "AInfinityStructure", "check_morphism", "check_stasheff", "find_isotopy",
    "canonical_minimal_model", "vary_homotopy",
    "brute_force_massey", "massey_membership_theorem_check", "triple_massey",
    "parse_algebra",
]

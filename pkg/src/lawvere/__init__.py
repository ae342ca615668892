"""Abstract clones with their Lawvere theories, finite models and free algebras."""

from .clone import Clone, CloneMorphism, LawReport, check_clone_laws
from .completion import LawvereTheoryCat, complete, one_object_restriction, verify_tensor
from .errors import LawvereError
from .finfun import EnumerableSet, FinitaryFunctor, FinMap, coend_quotient_oracle, diamond_action, tensor
from .fpcat import FinSetCategory, R, V, compare_RV
from .kan import check_adjunction, free_algebra, module_to_presheaf, presheaf_to_module, relative_tensor
from .kernels import backend
from .library import builtin_clone, builtin_clones
from .semantics import alg_mod_equivalence, enumerate_algebras, enumerate_models

__version__ = "0.1.0"

__all__ = [
    "Clone",
    "CloneMorphism",
    "EnumerableSet",
    "FinMap",
    "FinSetCategory",
    "FinitaryFunctor",
    "LawReport",
    "LawvereError",
    "LawvereTheoryCat",
    "R",
    "V",
    "alg_mod_equivalence",
    "backend",
    "builtin_clone",
    "builtin_clones",
    "check_adjunction",
    "check_clone_laws",
    "coend_quotient_oracle",
    "compare_RV",
    "complete",
    "diamond_action",
    "enumerate_algebras",
    "enumerate_models",
    "free_algebra",
    "module_to_presheaf",
    "one_object_restriction",
    "presheaf_to_module",
    "relative_tensor",
    "tensor",
    "verify_tensor",
]

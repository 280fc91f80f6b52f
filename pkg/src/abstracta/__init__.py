"""Finite-model workbench for abstraction principles."""

from .abstraction import (
    AbstractionModel,
    AbstractionOperator,
    DualModel,
    enumerate_duals,
    enumerate_models,
    enumerate_operators,
    induced_structure,
    is_natural_iso,
    natural_bijection,
    operator_exists,
)
from .core import Concept, Domain, ObjectMap, cardinality, enumerate_concepts, enumerate_permutations, image
from .equivalences import BUILTINS, EquivalenceSpec, compute_classes, eval_equiv, validate_equivalence

__version__ = "0.1.0"

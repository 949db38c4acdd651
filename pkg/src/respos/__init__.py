"""Finite residuated semigroups, their positive idempotents, and their
decompositions into sums of integrally closed residuated monoids."""

from .corpus import BUILTIN_NAMES, builtin, complex_algebra, group_antichain
from .enumeration import EnumerationSpec, enumerate_structures
from .errors import ResposError
from .io import load, save_structure, save_system
from .poset import FinitePoset, JoinSemilattice
from .report import PropertyReport
from .residuated import ResiduatedStructure, check_residuation, derive_residuals
from .structure import compose, decompose, iterated_decompose, roundtrip, steadiest_index

__all__ = [
    "BUILTIN_NAMES", "builtin", "complex_algebra", "group_antichain",
    "EnumerationSpec", "enumerate_structures", "ResposError",
    "load", "save_structure", "save_system",
    "FinitePoset", "JoinSemilattice", "PropertyReport",
    "ResiduatedStructure", "check_residuation", "derive_residuals",
    "compose", "decompose", "iterated_decompose", "roundtrip", "steadiest_index",
]

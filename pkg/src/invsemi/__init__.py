"""Finite inverse semigroups: structure, Munn semigroups, subsemigroup
lattices, partial automorphism monoids, and brute-force checks of when
these determine the semigroup up to isomorphism."""

from .errors import CapExceeded, InputError, InvariantFailure, InvSemiError, TheoryViolation
from .pbij import PartialBijection, compose, invert, symmetric_inverse_monoid
from .semigroup import (
    FiniteInverseSemigroup, Semigroup, generate_closure, load_semigroup, monogenic, wagner_preston,
)
from .isomorphism import are_isomorphic, automorphisms, find_isomorphism, isomorphisms
from .munn import Semilattice, chain, munn_representation, munn_semigroup
from .connectivity import (
    find_short_bypass, find_tight_bypass, is_shortly_connected, is_tightly_connected,
)
from .lattice import enumerate_subsemigroups, lattice_isomorphisms, verify_lattice_determinability
from .pa import build_pa, pa_isomorphisms, verify_pa_determinability, verify_psa_determinability
from .catalog import build_catalog, bundled_catalog

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "InputError", "InvariantFailure", "InvSemiError", "TheoryViolation",
    "PartialBijection", "compose", "invert", "symmetric_inverse_monoid",
    "FiniteInverseSemigroup", "Semigroup", "generate_closure", "load_semigroup", "monogenic",
    "wagner_preston", "are_isomorphic", "automorphisms", "find_isomorphism", "isomorphisms",
    "Semilattice", "chain", "munn_representation", "munn_semigroup",
    "find_short_bypass", "find_tight_bypass", "is_shortly_connected", "is_tightly_connected",
    "enumerate_subsemigroups", "lattice_isomorphisms", "verify_lattice_determinability",
    "build_pa", "pa_isomorphisms", "verify_pa_determinability", "verify_psa_determinability",
    "build_catalog", "bundled_catalog",
]

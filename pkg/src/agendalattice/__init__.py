"""Concept lattices under crisp and non-crisp interrogative agendas."""

from .agendas import combine_dempster, combine_disjunctive, combine_unnormalized
from .fca import ConceptLattice, FormalConcept, FormalContext, brute_force_concepts, build_lattice
from .mass import MassFunction, bel, pignistic, pl, plausibility_transform, q
from .orders import decide, implication_chain_check
from .scaling import ManyValuedContext, ScalingSpec, interval_scale
from .stability import beta_lattice, stability_index

__version__ = "0.1.0"

__all__ = [
    "ConceptLattice",
    "FormalConcept",
    "FormalContext",
    "ManyValuedContext",
    "MassFunction",
    "ScalingSpec",
    "bel",
    "beta_lattice",
    "brute_force_concepts",
    "build_lattice",
    "combine_dempster",
    "combine_disjunctive",
    "combine_unnormalized",
    "decide",
    "implication_chain_check",
    "interval_scale",
    "pignistic",
    "pl",
    "plausibility_transform",
    "q",
    "stability_index",
]

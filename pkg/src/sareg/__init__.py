"""Regularity, cuttings and Ramsey-type searches for semi-algebraic relations, in exact arithmetic."""

from .algebra import (
    InputError,
    Polynomial,
    RelationFamily,
    SemiAlgebraicRelation,
    relation_holds,
    validate_family,
)
from .colorings import build_layered, find_layered_set, is_s_layered, verify_pq
from .cutting import cut_1d, cut_adaptive
from .distances import build_Q, distance_bound_audit, distance_profile
from .ramsey import CliqueQuery, brute_ramsey_check, mono_clique_search
from .regularity import equitable_refine, partition_homogeneous, verify_homogeneity
from .rtconstruct import compose_rt, segments_intersect

__version__ = "0.1.0"

__all__ = [
    "InputError",
    "Polynomial",
    "RelationFamily",
    "SemiAlgebraicRelation",
    "relation_holds",
    "validate_family",
    "build_layered",
    "find_layered_set",
    "is_s_layered",
    "verify_pq",
    "cut_1d",
    "cut_adaptive",
    "build_Q",
    "distance_bound_audit",
    "distance_profile",
    "CliqueQuery",
    "brute_ramsey_check",
    "mono_clique_search",
    "equitable_refine",
    "partition_homogeneous",
    "verify_homogeneity",
    "compose_rt",
    "segments_intersect",
]

"""Canonical forms and isomorphism of finite relations in the Szymczak category."""

from .relcore import Hom, Rel, ParseError, compose, inverse, power, parse_matrix, format_matrix
from .graphdyn import Decomposition, EventualPeriod, decompose, eventual_period, is_eventual_period
from .canon import CanonicalObject, CanonWitness, canonize, is_canonical, sim_partition
from .szymiso import (
    Certificate,
    ClassifyingGraph,
    SzymMorphism,
    brute_force_szym_iso,
    certificate,
    classifying_graph,
    classifying_graphs_isomorphic,
    conjugate,
    szym_equivalent,
    szym_isomorphic,
    szym_isomorphism_witness,
    verify_szym_inverse,
)

__version__ = "0.1.0"

"""Evidential fusion on hyper-power sets.

Build a Frame, pick a Model (free, shafer, or hybrid with constraints),
assign mass to lattice elements, and combine sources with the rule that
fits the situation. Imprecise masses (unions of subintervals of [0,1])
and neutrosophic (truth, indeterminacy, falsehood) triples ride the same
machinery.
"""

from .decision import (
    DecisionResult,
    PignisticDistribution,
    bel,
    bel_improved,
    cpt,
    decide,
    gpt,
    pl,
    pl_improved,
)
from .errors import DsmError, ParseError, TotalConflict, ValidationError
from .lattice import (
    MAX_FRAME_SIZE,
    Frame,
    LatticeElement,
    Model,
    canonical_form,
    component_union,
    dsm_cardinality,
    enumerate_hyper_power_set,
    exclusivity,
    total_ignorance,
    upward_closure,
)
from .mass import (
    ImpreciseMass,
    Piece,
    PreciseMass,
    SubunitarySet,
    admissibility_witness,
    format_set,
    is_admissible,
    lift,
    parse_set,
    to_precise,
)
from .neutro import (
    NeutrosophicTriple,
    TripleMass,
    nconorm_fusion,
    nl_conjunction,
    nl_disjunction,
    nl_negation,
    nnorm_fusion,
    normalize_triple,
    ns_complement,
    ns_difference,
    ns_intersection,
    ns_union,
)
from .rules import (
    S3_COMPONENTS,
    S3_UNION,
    FusionReport,
    degree_of_inclusion,
    degree_of_intersection,
    degree_of_union,
    dempster,
    disjunctive,
    disjunctive_improved,
    dsm_classic,
    dsm_classic_imprecise,
    dsm_hybrid,
    dsm_hybrid_imprecise,
    dsmc_improved,
    dsmh_improved,
    dubois_prade,
    smets,
    tconorm_fusion,
    tnorm_fusion,
    yager,
)
from .scenario import Scenario, Task, emit_scenario, load_scenario, parse_element, parse_scenario, run

__version__ = "0.1.0"

__all__ = [
    "MAX_FRAME_SIZE",
    "DecisionResult",
    "DsmError",
    "Frame",
    "FusionReport",
    "ImpreciseMass",
    "LatticeElement",
    "Model",
    "NeutrosophicTriple",
    "ParseError",
    "Piece",
    "PignisticDistribution",
    "PreciseMass",
    "S3_COMPONENTS",
    "S3_UNION",
    "Scenario",
    "SubunitarySet",
    "Task",
    "TotalConflict",
    "TripleMass",
    "ValidationError",
    "admissibility_witness",
    "bel",
    "bel_improved",
    "canonical_form",
    "component_union",
    "cpt",
    "decide",
    "degree_of_inclusion",
    "degree_of_intersection",
    "degree_of_union",
    "dempster",
    "disjunctive",
    "disjunctive_improved",
    "dsm_cardinality",
    "dsm_classic",
    "dsm_classic_imprecise",
    "dsm_hybrid",
    "dsm_hybrid_imprecise",
    "dsmc_improved",
    "dsmh_improved",
    "dubois_prade",
    "emit_scenario",
    "enumerate_hyper_power_set",
    "exclusivity",
    "format_set",
    "gpt",
    "is_admissible",
    "lift",
    "load_scenario",
    "nconorm_fusion",
    "nl_conjunction",
    "nl_disjunction",
    "nl_negation",
    "nnorm_fusion",
    "normalize_triple",
    "ns_complement",
    "ns_difference",
    "ns_intersection",
    "ns_union",
    "parse_element",
    "parse_scenario",
    "parse_set",
    "pl",
    "pl_improved",
    "run",
    "smets",
    "tconorm_fusion",
    "tnorm_fusion",
    "to_precise",
    "total_ignorance",
    "upward_closure",
    "yager",
]

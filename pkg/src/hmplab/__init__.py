"""Simulation lab for the hidden-matching communication game: matching
families with girth control, the quantum fingerprint protocol, exact
classical one-way protocol search, and information accounting."""

from .classical import (
    BruteforceResult,
    ErrorReport,
    MessageBundle,
    OneWayProtocol,
    SearchSpaceError,
    SeedReductionResult,
    bruteforce_min_cost,
    build_message_bundle,
    constant_protocol,
    derandomize_senders,
    evaluate_protocol,
    parity_protocol,
    protocol_from_doc,
    protocol_to_doc,
    random_table_protocol,
    reduce_seed_set,
    table_protocol,
    verbatim_protocol,
)
from .families import (
    EdgeSpanReport,
    GirthSearchResult,
    MatchingFamily,
    cyclic_family,
    edge_span_check,
    family_from_dict,
    family_from_matchings,
    family_to_dict,
    load_family,
    projective_plane_family,
    random_girth_family,
    save_family,
)
from .graphs import (
    Graph,
    decompose_regular_bipartite,
    edge_count_bound,
    girth,
    maximum_bipartite_matching,
    verify_girth,
)
from .information import (
    ExtractionRecord,
    FactsReport,
    InformationReport,
    JointDistribution,
    check_information_facts,
    conditional_entropy_bits,
    entropy_bits,
    extract_pairs,
    information_accounting,
    markov_bound_check,
    mutual_information_bits,
    span_floor,
)
from .model import (
    Answer,
    HmpInstance,
    PlayerView,
    decode_matching_index,
    encode_matching_index,
    relation_holds,
    special_inputs,
    view_of,
)
from .quantum import (
    CostReport,
    FingerprintState,
    cost_report,
    encode_fingerprint,
    matching_basis,
    measure_in_matching_basis,
    outcome_distribution,
    run_quantum_smp,
)
from .seeding import derive_seed

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "BruteforceResult",
    "CostReport",
    "EdgeSpanReport",
    "ErrorReport",
    "ExtractionRecord",
    "FactsReport",
    "FingerprintState",
    "GirthSearchResult",
    "Graph",
    "HmpInstance",
    "InformationReport",
    "JointDistribution",
    "MatchingFamily",
    "MessageBundle",
    "OneWayProtocol",
    "PlayerView",
    "SearchSpaceError",
    "SeedReductionResult",
    "bruteforce_min_cost",
    "build_message_bundle",
    "check_information_facts",
    "conditional_entropy_bits",
    "constant_protocol",
    "cost_report",
    "cyclic_family",
    "decode_matching_index",
    "decompose_regular_bipartite",
    "derandomize_senders",
    "derive_seed",
    "edge_count_bound",
    "edge_span_check",
    "encode_fingerprint",
    "encode_matching_index",
    "entropy_bits",
    "evaluate_protocol",
    "extract_pairs",
    "family_from_dict",
    "family_from_matchings",
    "family_to_dict",
    "girth",
    "information_accounting",
    "load_family",
    "markov_bound_check",
    "matching_basis",
    "maximum_bipartite_matching",
    "measure_in_matching_basis",
    "mutual_information_bits",
    "outcome_distribution",
    "parity_protocol",
    "projective_plane_family",
    "protocol_from_doc",
    "protocol_to_doc",
    "random_girth_family",
    "random_table_protocol",
    "reduce_seed_set",
    "relation_holds",
    "run_quantum_smp",
    "save_family",
    "special_inputs",
    "span_floor",
    "table_protocol",
    "verbatim_protocol",
    "verify_girth",
    "view_of",
]

"""Strings, bands and generic Jordan forms for gentle quivers, and decision
procedures for recovering modules from their generic Jordan data."""

from .dsl import JordanFormData, emit_quiver, module_from_text, parse_jf, parse_module, parse_quiver, parse_string
from .fields import QQ, PrimeField
from .jordan import (
    construct_shift_endo,
    dominance_leq,
    end_space,
    genjf,
    genjf_oracle,
    genjf_structural,
    jordan_type,
)
from .quiver import Arrow, GentleQuiver, Letter, algebra_basis, check_admissible, validate_gentle
from .recoverability import condition_flags, decide, find_witness, recover, verify_witness
from .representations import (
    band_module,
    decompose_ledgered,
    direct_sum,
    hom_dim_combinatorial,
    hom_space,
    string_module,
)
from .strings import (
    StringWord,
    brenner_compare,
    delta,
    enumerate_bands,
    is_valid_string,
    maximal_strings_through,
    strings_through,
    substring_occurrences,
)

__version__ = "0.1.0"

__all__ = [
    "Arrow",
    "GentleQuiver",
    "JordanFormData",
    "Letter",
    "PrimeField",
    "QQ",
    "StringWord",
    "algebra_basis",
    "band_module",
    "brenner_compare",
    "check_admissible",
    "condition_flags",
    "construct_shift_endo",
    "decide",
    "decompose_ledgered",
    "delta",
    "direct_sum",
    "dominance_leq",
    "emit_quiver",
    "end_space",
    "enumerate_bands",
    "find_witness",
    "genjf",
    "genjf_oracle",
    "genjf_structural",
    "hom_dim_combinatorial",
    "hom_space",
    "is_valid_string",
    "jordan_type",
    "maximal_strings_through",
    "module_from_text",
    "parse_jf",
    "parse_module",
    "parse_quiver",
    "parse_string",
    "recover",
    "string_module",
    "strings_through",
    "substring_occurrences",
    "validate_gentle",
    "verify_witness",
]

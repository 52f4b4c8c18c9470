"""Finite loops: tables, identities, enumeration and isomorphism classes."""

from .catalog import builtin, cayley_basis_loop
from .enumerate import EnumerationSpec, census, enumerate_loops, verify_existence
from .identities import check_identity, check_property, lookup, parse_identity, property_report
from .io import emit_report, read_table, read_tables, write_table
from .iso import are_isomorphic, canonical_form, classify, fingerprint
from .table import (
    LoopTable,
    all_subloops,
    axiom_profile,
    build_table,
    structural_profile,
    transpose,
)

__all__ = [
    "LoopTable", "build_table", "axiom_profile", "structural_profile", "transpose",
    "all_subloops", "parse_identity", "check_identity", "check_property", "lookup",
    "property_report", "EnumerationSpec", "enumerate_loops", "census",
    "verify_existence", "are_isomorphic", "canonical_form", "classify", "fingerprint",
    "builtin", "cayley_basis_loop", "read_table", "read_tables", "write_table",
    "emit_report",
]

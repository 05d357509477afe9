"""Python bindings for the cspack reduction toolkit."""

from ._cspack import (
    CnfFormula,
    FormatError,
    SetPackingInstance,
    WitnessError,
    WitnessMap,
    audit_compactness,
    brute_force_sat,
    check_sparsity,
    evaluate,
    gen_random_3cnf,
    lift_packing_to_assignment,
    lower_assignment_to_packing,
    parse_dimacs,
    parse_instance,
    parse_witness,
    reduce,
    roundtrip,
    solve_exact,
    verify_packing,
)

__all__ = [
    "CnfFormula",
    "FormatError",
    "SetPackingInstance",
    "WitnessError",
    "WitnessMap",
    "audit_compactness",
    "brute_force_sat",
    "check_sparsity",
    "evaluate",
    "gen_random_3cnf",
    "lift_packing_to_assignment",
    "lower_assignment_to_packing",
    "parse_dimacs",
    "parse_instance",
    "parse_witness",
    "reduce",
    "roundtrip",
    "solve_exact",
    "verify_packing",
]

"""Exact construction and certification of the 2I family of ((n,2,3)) codes."""

from .codefile import CodeFile, MalformedCodeFile, code_file_from_spin, display
from .cyclo import CycloField, CycloScalar, NumericConfig, make_field
from .forge import (
    EXCEPTIONAL_N,
    EvenN,
    KLReport,
    NoIrrepAvailable,
    SpinCode,
    build_family,
    extract_codewords,
    gamma_scan,
    spin_kl_check,
)
from .groups import (
    Character2D,
    FiniteSubgroup,
    GroupElement,
    classify_hierarchy,
    faithful_2d_characters,
    group_by_label,
    two_i,
)
from .qubit import (
    QubitCode,
    certify_transversal_group,
    logical_action,
    pauli_kl_oracle,
    symmetrized_kl_check,
    to_multiqubit,
    weight_enumerators,
)

__version__ = "0.1.0"


def __getattr__(name):
    # sklearn is slow to import; only pull it in when the encoder is asked for
    if name == "FamilyCodeEncoder":
        from .estimator import FamilyCodeEncoder

        return FamilyCodeEncoder
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "CodeFile", "MalformedCodeFile", "code_file_from_spin", "display",
    "CycloField", "CycloScalar", "NumericConfig", "make_field",
    "FamilyCodeEncoder",
    "EXCEPTIONAL_N", "EvenN", "KLReport", "NoIrrepAvailable", "SpinCode",
    "build_family", "extract_codewords", "gamma_scan", "spin_kl_check",
    "Character2D", "FiniteSubgroup", "GroupElement", "classify_hierarchy",
    "faithful_2d_characters", "group_by_label", "two_i",
    "QubitCode", "certify_transversal_group", "logical_action", "pauli_kl_oracle",
    "symmetrized_kl_check", "to_multiqubit", "weight_enumerators",
]

"""Finite logical matrices, Płonka sums and containment companions."""

__version__ = "0.1.0"

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    Identity,
    Semilattice,
    ValidationReport,
    Verdict,
    check_homomorphism,
    check_identity,
    check_partition_function,
    evaluate_term,
    is_regular_identity,
    partition_equations,
    trivial_algebra,
    validate_semilattice,
)
from .builtins import builtin
from .containment import (
    BaseLogic,
    EquivalenceReport,
    check_companion_equivalence,
    containment_entails,
    formula_space,
    verify_r_partition_function,
)
from .errors import (
    BoundExceeded,
    EvaluationError,
    InvalidSystemError,
    ParseError,
    PartitionFunctionError,
    PlonkalogError,
    PreconditionError,
    SignatureError,
    UnknownName,
)
from .hilbert import (
    By,
    Calculus,
    Derivation,
    Premise,
    Rule,
    RuleSchema,
    Step,
    check_derivation,
    derive_bounded,
    transform_to_containment,
)
from .matrix import (
    Countermodel,
    LogicalMatrix,
    MatrixFamily,
    entails,
    find_countermodel,
    is_antitheorem,
    is_model_of,
    is_trivial_matrix,
)
from .plonka import (
    DirectSystem,
    FiberedMatrix,
    PlonkaSum,
    RDirectSystem,
    check_regular_identity_preservation,
    decompose,
    fiber_index,
    plonka_sum_algebras,
    plonka_sum_matrices,
    validate_direct_system,
    validate_r_direct_system,
)
from .syntax import (
    App,
    Notation,
    Sequent,
    Signature,
    Var,
    format_formula,
    match_formula,
    parse_formula,
    parse_sequent,
    substitute,
    vars_of,
)
from .textformat import Workspace

__all__ = [
    "App",
    "BaseLogic",
    "BoundExceeded",
    "By",
    "Calculus",
    "Countermodel",
    "Derivation",
    "DirectSystem",
    "EquivalenceReport",
    "EvaluationError",
    "FiberedMatrix",
    "FiniteAlgebra",
    "Homomorphism",
    "Identity",
    "InvalidSystemError",
    "LogicalMatrix",
    "MatrixFamily",
    "Notation",
    "ParseError",
    "PartitionFunctionError",
    "PlonkaSum",
    "PlonkalogError",
    "PreconditionError",
    "Premise",
    "RDirectSystem",
    "Rule",
    "RuleSchema",
    "Semilattice",
    "Sequent",
    "Signature",
    "SignatureError",
    "Step",
    "UnknownName",
    "ValidationReport",
    "Var",
    "Verdict",
    "Workspace",
    "builtin",
    "check_companion_equivalence",
    "check_derivation",
    "check_homomorphism",
    "check_identity",
    "check_partition_function",
    "check_regular_identity_preservation",
    "containment_entails",
    "decompose",
    "derive_bounded",
    "entails",
    "evaluate_term",
    "fiber_index",
    "find_countermodel",
    "format_formula",
    "formula_space",
    "is_antitheorem",
    "is_model_of",
    "is_regular_identity",
    "is_trivial_matrix",
    "match_formula",
    "parse_formula",
    "parse_sequent",
    "partition_equations",
    "plonka_sum_algebras",
    "plonka_sum_matrices",
    "substitute",
    "transform_to_containment",
    "trivial_algebra",
    "validate_direct_system",
    "validate_r_direct_system",
    "validate_semilattice",
    "vars_of",
    "verify_r_partition_function",
]

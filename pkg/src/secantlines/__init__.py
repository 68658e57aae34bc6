"""Secant line varieties of reducible plane curves: closed-form classification
plus an exact finite-field rank oracle that verifies every prediction."""

from .formulas import (
    CaseLabel,
    ClassificationReport,
    NegativeDegreeError,
    classify,
    classify_case,
    defect,
    dim_IZ_theory,
    dim_sigma2_theory,
    dim_variety,
    expected_dim_IZ,
    expected_dim_sigma2,
    fills_ambient,
    hilbert_function_theory,
    is_defective,
)
from .gfpoly import (
    DEFAULT_PRIME,
    Form,
    MonomialIndex,
    PrimeField,
    SeedStream,
    cofactor_products,
    derive_seed,
    is_prime,
    monomial_index,
    monomial_multiples,
    multiply,
    num_monomials,
    random_form,
)
from .oracle import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    BoundCheck,
    NotApplicableError,
    OracleReport,
    SecantTrial,
    SpecializationReport,
    TangentSliceBasis,
    nullspace,
    oracle_dim_IF,
    oracle_dim_IZ,
    oracle_dim_sigma2,
    oracle_hilbert,
    rank,
    secant_trials,
    specialization_check,
    tangent_slice,
    verify,
)
from .partitions import (
    DerivedQuantities,
    EmptyPartitionError,
    NonPositivePartError,
    Partition,
    PartitionError,
    TooFewPartsError,
    derived,
    enumerate_partitions,
)

__version__ = "0.1.0"

__all__ = [
    "BoundCheck",
    "CaseLabel",
    "ClassificationReport",
    "DEFAULT_PRIME",
    "DEFAULT_SEED",
    "DEFAULT_TRIALS",
    "DerivedQuantities",
    "EmptyPartitionError",
    "Form",
    "MonomialIndex",
    "NegativeDegreeError",
    "NonPositivePartError",
    "NotApplicableError",
    "OracleReport",
    "Partition",
    "PartitionError",
    "PrimeField",
    "SecantTrial",
    "SeedStream",
    "SpecializationReport",
    "TangentSliceBasis",
    "TooFewPartsError",
    "classify",
    "classify_case",
    "cofactor_products",
    "defect",
    "derive_seed",
    "derived",
    "dim_IZ_theory",
    "dim_sigma2_theory",
    "dim_variety",
    "enumerate_partitions",
    "expected_dim_IZ",
    "expected_dim_sigma2",
    "fills_ambient",
    "hilbert_function_theory",
    "is_defective",
    "is_prime",
    "monomial_index",
    "monomial_multiples",
    "multiply",
    "nullspace",
    "num_monomials",
    "oracle_dim_IF",
    "oracle_dim_IZ",
    "oracle_dim_sigma2",
    "oracle_hilbert",
    "random_form",
    "rank",
    "secant_trials",
    "specialization_check",
    "tangent_slice",
    "verify",
]

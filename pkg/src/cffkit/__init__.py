"""Cover-free families from finite-field towers and combinatorial designs.

The package constructs d-cover-free incidence matrices by evaluating bounded
degree polynomials over prime-power fields, grows them into nested families
through quadratic field extensions (optionally raising d and the degree cap
along the way), converts orthogonal/packing arrays into the same matrices via
separating hash families, verifies every claimed property exhaustively or by
a pairwise-intersection certificate, and decodes group-testing outcomes.
"""

from . import errors
from .cff import (
    CffWitness,
    IncidenceMatrix,
    Outcome,
    build_polynomial_cff,
    decode,
    max_d,
    restrict_blocks,
    simulate_outcomes,
    verify_cff_exhaustive,
    verify_intersection_certificate,
)
from .designs import (
    DesignArray,
    SepHashFamily,
    bush_oa,
    nested_bush_sequence,
    pa_embedding_lift,
    pa_restrict_columns,
    pa_to_shf,
    shf_to_cff,
    verify_design,
    verify_shf,
)
from .embedding import (
    EmbeddingSequence,
    LevelParams,
    SequenceLevel,
    Violation,
    build_embedding_family,
    build_monotone_family,
    check_embedding_family,
    check_monotone,
    check_nested,
    reorder_embedding,
    schedule_priority_d,
    schedule_priority_ratio,
)
from .fields import (
    DensePolynomial,
    FieldElement,
    FieldLevel,
    field_create,
    field_extend,
    is_prime,
    prime_power,
)
from .metrics import (
    BigRatio,
    RatioTable,
    TableRow,
    actual_ratio_with_partial_columns,
    compression_ratio,
    emit_table,
    info_bound,
    level_params,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "CffWitness",
    "IncidenceMatrix",
    "Outcome",
    "build_polynomial_cff",
    "decode",
    "max_d",
    "restrict_blocks",
    "simulate_outcomes",
    "verify_cff_exhaustive",
    "verify_intersection_certificate",
    "DesignArray",
    "SepHashFamily",
    "bush_oa",
    "nested_bush_sequence",
    "pa_embedding_lift",
    "pa_restrict_columns",
    "pa_to_shf",
    "shf_to_cff",
    "verify_design",
    "verify_shf",
    "EmbeddingSequence",
    "LevelParams",
    "SequenceLevel",
    "Violation",
    "build_embedding_family",
    "build_monotone_family",
    "check_embedding_family",
    "check_monotone",
    "check_nested",
    "reorder_embedding",
    "schedule_priority_d",
    "schedule_priority_ratio",
    "DensePolynomial",
    "FieldElement",
    "FieldLevel",
    "field_create",
    "field_extend",
    "is_prime",
    "prime_power",
    "BigRatio",
    "RatioTable",
    "TableRow",
    "actual_ratio_with_partial_columns",
    "compression_ratio",
    "emit_table",
    "info_bound",
    "level_params",
]

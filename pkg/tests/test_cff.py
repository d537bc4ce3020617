"""Core incidence-matrix tests.

The 9x9 evaluation matrix over GF(3) is frozen here row by row (hand-checked
against the polynomial evaluations), and cover-freeness is cross-checked with
an independent set-based oracle that never touches the bitmask code paths.
"""

import itertools
import random

import pytest

from cffkit.cff import (
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
from cffkit.errors import (
    BudgetExceeded,
    ColumnWeightNotConstant,
    InconsistentOutcome,
    IndexOutOfRange,
    MatrixTooLarge,
    NotBlockStructured,
    ParamViolation,
    TooFewBlocks,
    TooManyCandidates,
)
from cffkit.fields import field_create, field_extend
from cffkit.fixtures import (
    WALKTHROUGH_OUTCOME,
    walkthrough_matrix,
    walkthrough_outcome,
)

# Evaluation matrix of the nine degree<=1 polynomials over GF(3): columns in
# canonical order 0,1,2,x,x+1,x+2,2x,2x+1,2x+2; rows (i,j) block-major.
TABLE_9X9 = [
    "100100100",
    "010010010",
    "001001001",
    "100001010",
    "010100001",
    "001010100",
    "100010001",
    "010001100",
    "001100010",
]


def matrix_from_strings(rows, d=0):
    t, n = len(rows), len(rows[0])
    bits = tuple(sum(1 << j for j, ch in enumerate(r) if ch == "1") for r in rows)
    return IncidenceMatrix(t, n, bits, d_claimed=d)


def row_strings(matrix):
    return [
        "".join("1" if matrix.entry(i, j) else "0" for j in range(matrix.n))
        for i in range(matrix.t)
    ]


def column_sets(matrix):
    return [
        frozenset(i for i in range(matrix.t) if matrix.entry(i, j))
        for j in range(matrix.n)
    ]


def oracle_first_witness(matrix, d):
    """Set-based reference: ascending (d+1)-subsets, ascending target inside."""
    sets = column_sets(matrix)
    for subset in itertools.combinations(range(matrix.n), d + 1):
        for target in subset:
            union = set()
            for j in subset:
                if j != target:
                    union |= sets[j]
            if sets[target] <= union:
                return (target, tuple(j for j in subset if j != target))
    return None


# --- construction ---


def test_gf3_matrix_matches_frozen_table():
    m = build_polynomial_cff(field_create(3, 1), 1)
    assert (m.t, m.n, m.d_claimed) == (9, 9, 2)
    assert row_strings(m) == TABLE_9X9
    assert m.row_labels == [(i, j) for i in range(3) for j in range(3)]


def test_gf2_matrix_hand_enumerated():
    # four polynomials over GF(2): 0, 1, x, x+1 evaluated at x=0,1
    m = build_polynomial_cff(field_create(2, 1), 1)
    assert (m.t, m.n, m.d_claimed) == (4, 4, 1)
    assert row_strings(m) == ["1010", "0101", "1001", "0110"]


def test_gf4_k2_dimensions_and_certificate():
    f4 = field_create(2, 2)
    m = build_polynomial_cff(f4, 2)
    assert (m.t, m.n, m.d_claimed) == (16, 64, 1)
    assert all(m.col_weight(j) == 4 for j in range(64))
    assert verify_intersection_certificate(m, k=2, b=4) is None


def test_size_limits_enforced():
    f4 = field_create(2, 2)
    with pytest.raises(MatrixTooLarge):
        build_polynomial_cff(f4, 2, max_columns=63)
    with pytest.raises(MatrixTooLarge):
        build_polynomial_cff(f4, 2, max_cells=100)
    with pytest.raises(ParamViolation):
        build_polynomial_cff(f4, 0)


def test_polynomial_column_weight_equals_blocks():
    m = build_polynomial_cff(field_create(3, 1), 1)
    for b in (1, 2, 3):
        r = restrict_blocks(m, b)
        assert all(r.col_weight(j) == b for j in range(r.n))


# --- block restriction ---


def test_restrict_blocks_two_of_three():
    m = build_polynomial_cff(field_create(3, 1), 1)
    r = restrict_blocks(m, 2)
    assert (r.t, r.n, r.d_claimed) == (6, 9, 1)
    assert row_strings(r) == TABLE_9X9[:6]
    assert verify_cff_exhaustive(r, 1) is None


def test_restrict_blocks_identity():
    m = build_polynomial_cff(field_create(3, 1), 1)
    r = restrict_blocks(m, 3)
    assert r == m and r.d_claimed == 2


def test_restrict_blocks_gf4_k2():
    m = build_polynomial_cff(field_create(2, 2), 2)
    r = restrict_blocks(m, 3)
    assert (r.t, r.n, r.d_claimed) == (12, 64, 1)


def test_restrict_blocks_errors():
    m = build_polynomial_cff(field_create(3, 1), 1)
    with pytest.raises(TooFewBlocks):
        restrict_blocks(m, 4)
    with pytest.raises(TooFewBlocks):
        restrict_blocks(m, 0)
    plain = matrix_from_strings(TABLE_9X9)
    with pytest.raises(NotBlockStructured):
        restrict_blocks(plain, 2)


# --- exhaustive verification ---


def test_9x9_is_2_cover_free():
    m = matrix_from_strings(TABLE_9X9)
    assert verify_cff_exhaustive(m, 2) is None


def test_9x9_witness_at_d3():
    m = matrix_from_strings(TABLE_9X9)
    witness = verify_cff_exhaustive(m, 3)
    assert witness == CffWitness(target=3, covers=(0, 1, 2))
    assert witness.holds_for(m)
    assert oracle_first_witness(m, 3) == (3, (0, 1, 2))


def test_duplicate_column_breaks_1_cover_freeness():
    rows = ["110", "110", "001"]
    m = matrix_from_strings(rows)
    witness = verify_cff_exhaustive(m, 1)
    assert witness is not None and set((witness.target, *witness.covers)) == {0, 1}


def test_exhaustive_budget_trips():
    m = matrix_from_strings(TABLE_9X9)
    with pytest.raises(BudgetExceeded):
        verify_cff_exhaustive(m, 2, budget=5)


def test_exhaustive_param_checks():
    m = matrix_from_strings(TABLE_9X9)
    with pytest.raises(ParamViolation):
        verify_cff_exhaustive(m, 0)
    with pytest.raises(ParamViolation):
        verify_cff_exhaustive(m, 9)


def test_exhaustive_matches_oracle_on_random_matrices():
    rng = random.Random(7)
    for trial in range(40):
        t = rng.randrange(3, 7)
        n = rng.randrange(3, 8)
        rows = ["".join(rng.choice("01") for _ in range(n)) for _ in range(t)]
        m = matrix_from_strings(rows)
        for d in range(1, min(3, n - 1) + 1):
            got = verify_cff_exhaustive(m, d)
            expected = oracle_first_witness(m, d)
            if expected is None:
                assert got is None
            else:
                assert (got.target, got.covers) == expected


# --- intersection certificate ---


def test_certificate_on_9x9():
    m = build_polynomial_cff(field_create(3, 1), 1)
    assert verify_intersection_certificate(m, k=1, b=3) is None


def test_certificate_failing_pair_on_duplicates():
    rows = ["111", "101", "010"]  # columns 0 and 2 are identical, weight 2
    m = matrix_from_strings(rows)
    assert verify_intersection_certificate(m, k=1, b=2) == (0, 2)


def test_certificate_rejects_uneven_weights():
    rows = ["11", "01"]
    m = matrix_from_strings(rows)
    with pytest.raises(ColumnWeightNotConstant):
        verify_intersection_certificate(m, k=1, b=2)


def test_certificate_parallel_agrees():
    m = build_polynomial_cff(field_create(2, 2), 2)
    assert verify_intersection_certificate(m, k=2, b=4, workers=2) is None
    bad = matrix_from_strings(["111", "101", "010"])
    assert verify_intersection_certificate(bad, k=1, b=2, workers=2) == (0, 2)


CERT_IMPLIES_EXHAUSTIVE = [
    (2, 1),  # n = 4
    (3, 1),  # n = 9
    (3, 2),  # n = 27
    (4, 1),  # n = 16
    (4, 2),  # n = 64
    (5, 1),  # n = 25
]


@pytest.mark.parametrize("q,k", CERT_IMPLIES_EXHAUSTIVE)
def test_certificate_implies_exhaustive(q, k):
    field = {2: lambda: field_create(2, 1), 3: lambda: field_create(3, 1),
             4: lambda: field_create(2, 2), 5: lambda: field_create(5, 1)}[q]()
    m = build_polynomial_cff(field, k)
    assert verify_intersection_certificate(m, k=k, b=q) is None
    for d in range(1, max_d(q, k) + 1):
        assert verify_cff_exhaustive(m, d) is None


def test_certificate_consistent_with_exhaustive_on_random_weighted_matrices():
    # random constant-weight matrices: the tightest passing certificate must
    # imply exhaustive cover-freeness at its certified d, and tightening k by
    # one must make the certificate fail
    rng = random.Random(31337)
    for _ in range(25):
        t, n, b = 8, 10, 3
        rows = [0] * t
        for j in range(n):
            for i in rng.sample(range(t), b):
                rows[i] |= 1 << j
        m = IncidenceMatrix(t, n, tuple(rows))
        worst = max(
            (m.col_mask(i) & m.col_mask(j)).bit_count()
            for i in range(n - 1)
            for j in range(i + 1, n)
        )
        if worst >= b:
            continue  # duplicate columns certify nothing
        assert verify_intersection_certificate(m, k=worst, b=b) is None
        if worst > 0:
            assert verify_intersection_certificate(m, k=worst - 1, b=b) is not None
        d = (b - 1) // worst if worst else n - 1
        d = min(d, n - 1)
        if d >= 1:
            assert verify_cff_exhaustive(m, d) is None


TIGHTNESS = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 1), (5, 2), (5, 3), (5, 4)]


@pytest.mark.parametrize("q,k", TIGHTNESS)
def test_bound_is_tight_for_small_orders(q, k):
    field = {2: lambda: field_create(2, 1), 3: lambda: field_create(3, 1),
             4: lambda: field_create(2, 2), 5: lambda: field_create(5, 1)}[q]()
    m = build_polynomial_cff(field, k)
    witness = verify_cff_exhaustive(m, max_d(q, k) + 1)
    assert witness is not None and witness.holds_for(m)


# --- max_d ---


def test_max_d_values():
    assert max_d(16, 2) == 7
    assert max_d(16, 3) == 5
    assert max_d(9, 1) == 8
    for q in (2, 3, 4, 5, 9):
        assert max_d(q, q - 1) == 1
    with pytest.raises(ParamViolation):
        max_d(1, 1)
    with pytest.raises(ParamViolation):
        max_d(3, 0)


# --- outcome simulation ---


def test_walkthrough_outcome_reproduced():
    m = walkthrough_matrix()
    out = simulate_outcomes(m, {2, 11})  # items 3 and 12, 0-based
    assert str(out) == WALKTHROUGH_OUTCOME
    assert out.failing_rows() == [2, 4, 6, 7, 8]


def test_no_defectives_all_pass():
    m = walkthrough_matrix()
    out = simulate_outcomes(m, set())
    assert out.bits == 0


def test_single_defective_reproduces_column():
    m = matrix_from_strings(TABLE_9X9)
    for j in range(m.n):
        assert simulate_outcomes(m, {j}).bits == m.col_mask(j)


def test_simulate_rejects_bad_index():
    m = matrix_from_strings(TABLE_9X9)
    with pytest.raises(IndexOutOfRange):
        simulate_outcomes(m, {9})


# --- decoding ---


def test_walkthrough_decode():
    m = walkthrough_matrix()
    assert decode(m, walkthrough_outcome(), 2) == [2, 11]


def test_decode_all_pass_gives_empty():
    m = walkthrough_matrix()
    assert decode(m, Outcome(0, 9), 2) == []


def test_decode_roundtrip_exhaustive_9x9():
    m = matrix_from_strings(TABLE_9X9)
    for size in (0, 1, 2):
        for defectives in itertools.combinations(range(9), size):
            out = simulate_outcomes(m, defectives)
            assert decode(m, out, 2) == sorted(defectives)


def test_decode_roundtrip_exhaustive_walkthrough():
    m = walkthrough_matrix()
    for size in (0, 1, 2):
        for defectives in itertools.combinations(range(12), size):
            out = simulate_outcomes(m, defectives)
            assert decode(m, out, 2) == sorted(defectives)


def test_decode_too_many_candidates():
    m = matrix_from_strings(TABLE_9X9)
    out = simulate_outcomes(m, {0, 1, 2})  # constants cover every row
    with pytest.raises(TooManyCandidates):
        decode(m, out, 2)


def test_decode_inconsistent_outcome():
    m = matrix_from_strings(TABLE_9X9)
    out = Outcome(1 << 4, 9)  # single failing test explained by nothing
    with pytest.raises(InconsistentOutcome):
        decode(m, out, 2)


def test_decode_length_mismatch():
    m = matrix_from_strings(TABLE_9X9)
    with pytest.raises(IndexOutOfRange):
        decode(m, Outcome(0, 8), 2)


def test_decode_simulate_identity_random_instances():
    rng = random.Random(1234)
    f9 = field_extend(field_create(3, 1))
    instances = [
        (build_polynomial_cff(field_create(3, 1), 1), 2),
        (restrict_blocks(build_polynomial_cff(field_create(3, 1), 1), 2), 1),
        (build_polynomial_cff(field_create(2, 1), 1), 1),
        (build_polynomial_cff(field_create(2, 2), 2), 1),
        (build_polynomial_cff(f9, 2), 4),
        (walkthrough_matrix(), 2),
    ]
    trials = 0
    for m, d in instances:
        for _ in range(200):
            size = rng.randrange(d + 1)
            defectives = sorted(rng.sample(range(m.n), size))
            out = simulate_outcomes(m, defectives)
            assert decode(m, out, d) == defectives
            trials += 1
    assert trials >= 1000


# --- text format ---


def test_text_roundtrip():
    m = build_polynomial_cff(field_create(3, 1), 1)
    text = m.to_text()
    assert text.splitlines()[0] == "CFF 9 9 2"
    back = IncidenceMatrix.from_text(text)
    assert back == m and back.d_claimed == 2


def test_text_rejects_garbage():
    with pytest.raises(ValueError):
        IncidenceMatrix.from_text("nonsense\n01\n")
    with pytest.raises(ValueError):
        IncidenceMatrix.from_text("CFF 2 2 0\n01\n")
    with pytest.raises(ValueError):
        IncidenceMatrix.from_text("CFF 1 2 0\n0x\n")


def test_sidecar_contains_provenance():
    m = build_polynomial_cff(field_create(3, 1), 1)
    side = m.sidecar()
    assert side["provenance"]["construction"] == "polynomial"
    assert side["provenance"]["q"] == 3
    assert side["row_labels"][3] == [1, 0]

"""Nesting-family tests.

The reordered growth step is checked entry-by-entry against the canonical
block-major construction through the returned permutations, and the nested
block structure is checked bit-for-bit at every level.
"""

import json

import pytest

from cffkit.cff import (
    build_polynomial_cff,
    max_d,
    restrict_blocks,
    verify_cff_exhaustive,
    verify_intersection_certificate,
)
from cffkit.embedding import (
    EmbeddingSequence,
    build_embedding_family,
    build_monotone_family,
    check_embedding_family,
    check_monotone,
    check_nested,
    reorder_embedding,
    schedule_priority_d,
    schedule_priority_ratio,
)
from cffkit.errors import CffkitError, ParamViolation
from cffkit.fields import field_create, field_extend

from test_cff import TABLE_9X9, matrix_from_strings, row_strings


def gf(q):
    return {
        2: lambda: field_create(2, 1),
        3: lambda: field_create(3, 1),
        4: lambda: field_create(2, 2),
        5: lambda: field_create(5, 1),
    }[q]()


# --- single growth step ---


def test_grown_81x729_top_left_is_9x9_table():
    m, row_perm, col_perm = reorder_embedding(gf(3), 1, 2, 2, 4)
    assert (m.t, m.n, m.d_claimed) == (81, 729, 4)
    assert row_strings(m.submatrix(9, 9)) == TABLE_9X9


def test_grown_81x729_zero_block():
    # rows pairing a base point with a strictly-new second coordinate are
    # all zero on the first 9 columns (old polynomials evaluate old points
    # into the old subfield)
    m, _, _ = reorder_embedding(gf(3), 1, 2, 2, 4)
    for i in range(9, 27):
        for j in range(9):
            assert m.entry(i, j) == 0
    # and some entry beyond that block is nonzero
    assert any(m.entry(i, j) for i in range(27, 81) for j in range(9))


def test_grown_81x729_certifies_d4():
    m, _, _ = reorder_embedding(gf(3), 1, 2, 2, 4)
    assert verify_intersection_certificate(m, k=2, b=9) is None
    assert max_d(9, 2) == 4


def test_grown_matrix_is_permutation_of_canonical():
    # oracle: canonical block-major matrix over the squared field, compared
    # entry by entry through the returned permutations
    base = gf(3)
    m, row_perm, col_perm = reorder_embedding(base, 1, 2, 2, 4)
    canonical = build_polynomial_cff(field_extend(base), 2)
    assert sorted(row_perm) == list(range(81))
    assert sorted(col_perm) == list(range(729))
    for r in range(81):
        for c in range(729):
            assert m.entry(r, c) == canonical.entry(row_perm[r], col_perm[c])


def test_pure_field_extension_step():
    # no parameter growth: 9x9 sits inside 27x81 with 72 new columns
    m, _, col_perm = reorder_embedding(gf(3), 1, 2, 1, 2)
    assert (m.t, m.n, m.d_claimed) == (27, 81, 2)
    assert row_strings(m.submatrix(9, 9)) == TABLE_9X9
    assert col_perm[:9] == [0, 1, 2, 9, 10, 11, 18, 19, 20]  # digits re-encoded base 9


def test_reorder_param_violations():
    with pytest.raises(ParamViolation):
        reorder_embedding(gf(3), 1, 3, 1, 3)  # q=3 < d*k+1=4
    with pytest.raises(ParamViolation):
        reorder_embedding(gf(3), 2, 1, 1, 1)  # k may not shrink
    with pytest.raises(ParamViolation):
        reorder_embedding(gf(2), 1, 1, 3, 5)  # q^2=4 < d'k'+1=16


def test_reorder_size_limit():
    from cffkit.errors import MatrixTooLarge

    with pytest.raises(MatrixTooLarge):
        reorder_embedding(gf(3), 1, 2, 2, 4, max_columns=100)


# --- chained families ---


def test_two_level_family_matches_single_step():
    seq = build_embedding_family(gf(3), [(1, 2), (2, 4)])
    assert [lv.params.t for lv in seq.levels] == [9, 81]
    assert [lv.params.n for lv in seq.levels] == [9, 729]
    step, row_perm, col_perm = reorder_embedding(gf(3), 1, 2, 2, 4)
    assert seq.levels[1].matrix == step
    assert seq.levels[1].row_perm == row_perm
    assert seq.levels[1].col_perm == col_perm
    assert check_embedding_family(seq) is None


def test_level0_equals_restricted_polynomial_matrix():
    seq = build_embedding_family(gf(3), [(1, 2), (2, 4)])
    expected = restrict_blocks(build_polynomial_cff(gf(3), 1), 3)
    assert seq.levels[0].matrix == expected


def test_binary_two_level_family_exhaustive():
    seq = build_embedding_family(gf(2), [(1, 1), (1, 1)])
    dims = [(lv.params.t, lv.params.n) for lv in seq.levels]
    assert dims == [(4, 4), (8, 16)]
    assert check_embedding_family(seq) is None
    for lv in seq.levels:
        assert verify_cff_exhaustive(lv.matrix, 1) is None


def test_three_level_chain_nests_at_every_pair():
    seq = build_embedding_family(gf(2), [(1, 1), (1, 1), (1, 1)])
    dims = [(lv.params.t, lv.params.n) for lv in seq.levels]
    assert dims == [(4, 4), (8, 16), (32, 256)]
    assert check_embedding_family(seq) is None
    assert verify_intersection_certificate(seq.levels[2].matrix, k=1, b=2) is None


def test_growing_d_family_certificates():
    # d grows 1 -> 7 while k stays 2: level 1 is 240 x 4096
    seq = build_embedding_family(gf(4), [(2, 1), (2, 7)])
    assert [(lv.params.t, lv.params.n) for lv in seq.levels] == [(12, 64), (240, 4096)]
    assert check_embedding_family(seq) is None
    assert verify_intersection_certificate(seq.levels[0].matrix, k=2, b=3) is None


def test_family_schedule_validation():
    with pytest.raises(ParamViolation):
        build_embedding_family(gf(3), [])
    with pytest.raises(ParamViolation):
        build_embedding_family(gf(3), [(1, 2), (1, 1)])  # d shrinks
    with pytest.raises(ParamViolation):
        build_embedding_family(gf(2), [(1, 2)])  # q=2 < d*k+1=3
    with pytest.raises(ParamViolation):
        build_embedding_family(gf(2), [(1, 1), (5, 4)])  # q^2=4 < 21


# --- parameter-only levels and on-demand columns ---


def test_large_levels_keep_exact_params_only():
    seq = build_embedding_family(gf(4), schedule_priority_d(4, 2, 1, 4))
    t_expected = [3 * 4, 15 * 16, 255 * 256, 65535 * 65536]
    n_expected = [4**3, 16**3, 256**3, 65536**3]
    assert [lv.params.t for lv in seq.levels] == t_expected
    assert [lv.params.n for lv in seq.levels] == n_expected
    assert seq.levels[0].matrix is not None
    assert seq.levels[1].matrix is not None
    assert seq.levels[2].matrix is None and seq.levels[3].matrix is None
    assert check_embedding_family(seq) is None  # dims-only where not materialized


def test_on_demand_column_agrees_with_materialized_level():
    seq = build_embedding_family(gf(3), [(1, 2), (2, 4)])
    m = seq.levels[1].matrix
    for pos in (0, 1, 8, 9, 100, 728):
        poly = seq.levels[1].col_perm[pos]
        assert seq.column_for_poly(1, poly) == m.col_mask(pos)


def test_on_demand_column_for_unmaterialized_level():
    seq = build_embedding_family(gf(4), schedule_priority_d(4, 2, 1, 3))
    level = 2  # 65280 x 16777216, far beyond materialization
    assert seq.levels[level].matrix is None
    mask = seq.column_for_poly(level, 0)  # the zero polynomial
    assert mask.bit_count() == 255  # one row per block
    # its ones sit exactly at rows (i, 0) for every block i
    expected = 0
    for i in range(255):
        expected |= 1 << seq.row_position(level, i, 0)
    assert mask == expected


def test_row_position_matches_materialized_order():
    seq = build_embedding_family(gf(3), [(1, 2), (2, 4)])
    labels = seq.levels[1].matrix.row_labels
    for pos, (i, j) in enumerate(labels):
        assert seq.row_position(1, i, j) == pos


# --- schedules ---


def test_schedule_priority_d_values():
    assert schedule_priority_d(4, 2, 1, 4) == [(2, 1), (2, 7), (2, 127), (2, 32767)]
    assert schedule_priority_d(4, 3, 1, 4) == [(3, 1), (3, 5), (3, 85), (3, 21845)]
    qi = 4
    for i, (k, d) in enumerate(schedule_priority_d(4, 2, 1, 4)):
        assert d * k < qi  # per-level feasibility, by the ceiling identity
        qi *= qi
    with pytest.raises(ParamViolation):
        schedule_priority_d(4, 2, 2, 2)  # q=4 is not > d0*k=4


def test_schedule_priority_ratio_values():
    assert schedule_priority_ratio(4, 2, 1, 4) == [(1, 2), (7, 2), (127, 2), (32767, 2)]
    assert schedule_priority_ratio(4, 3, 1, 4) == [(1, 3), (5, 3), (85, 3), (21845, 3)]
    qi = 4
    for k, d in schedule_priority_ratio(4, 2, 1, 4):
        assert k * d < qi
        qi *= qi
    with pytest.raises(ParamViolation):
        schedule_priority_ratio(3, 3, 1, 2)


# --- monotone families ---


def test_monotone_family_gf3_shapes_and_zero_block():
    seq = build_monotone_family(gf(3), 1, 2, 2)
    assert [(lv.params.t, lv.params.n) for lv in seq.levels] == [(9, 9), (27, 81)]
    lo, hi = seq.levels[0].matrix, seq.levels[1].matrix
    assert check_monotone(lo, hi) is None
    assert verify_cff_exhaustive(lo, 2) is None
    assert verify_cff_exhaustive(hi, 2) is None
    assert hi.n / hi.t == pytest.approx(3.0)  # sqrt(81)/3


def test_monotone_level0_is_block_restriction():
    seq = build_monotone_family(gf(3), 1, 2, 2)
    assert seq.levels[0].matrix == restrict_blocks(build_polynomial_cff(gf(3), 1), 3)


def test_monotone_family_gf2_exhaustive():
    seq = build_monotone_family(gf(2), 1, 1, 2)
    assert [(lv.params.t, lv.params.n) for lv in seq.levels] == [(4, 4), (8, 16)]
    assert check_monotone(seq.levels[0].matrix, seq.levels[1].matrix) is None
    for lv in seq.levels:
        assert verify_cff_exhaustive(lv.matrix, 1) is None


def test_monotone_families_are_embedding_families():
    seq = build_monotone_family(gf(3), 1, 2, 2)
    assert check_embedding_family(seq) is None


def test_monotone_levels_pass_certificate():
    seq = build_monotone_family(gf(3), 1, 2, 3)
    assert [lv.params.t for lv in seq.levels] == [9, 27, 243]
    assert [lv.params.n for lv in seq.levels] == [9, 81, 6561]
    assert check_embedding_family(seq) is None
    for lv in seq.levels[:2]:
        assert verify_intersection_certificate(lv.matrix, k=1, b=3) is None
    # level 2 is large; check its constant column weight, which is the
    # certificate precondition, on a sample
    big = seq.levels[2].matrix
    assert all(big.col_weight(j) == 3 for j in range(0, big.n, 97))


# --- checkers on broken input ---


def test_check_family_detects_swapped_columns():
    seq = build_embedding_family(gf(3), [(1, 2), (2, 4)])
    hi = seq.levels[1].matrix
    swapped_rows = []
    for i in range(hi.t):
        row = hi.rows[i]
        b0, b1 = (row >> 0) & 1, (row >> 1) & 1
        row &= ~0b11
        row |= b0 << 1 | b1
        swapped_rows.append(row)
    broken = matrix_from_strings(
        ["".join("1" if (r >> j) & 1 else "0" for j in range(hi.n)) for r in swapped_rows]
    )
    seq2 = EmbeddingSequence.from_matrices([seq.levels[0].matrix, broken], ds=[2, 4])
    violation = check_embedding_family(seq2)
    assert violation is not None and violation.clause == "submatrix_mismatch"


def test_check_monotone_rejects_grown_step_with_all_blocks():
    # keeping every block of the grown matrix puts nonzero entries under the
    # old columns once the first coordinate leaves the base field
    lo = restrict_blocks(build_polynomial_cff(gf(3), 1), 3)
    hi, _, _ = reorder_embedding(gf(3), 1, 2, 2, 4)
    violation = check_monotone(lo, hi)
    assert violation is not None
    assert violation.clause == "z_nonzero"
    assert violation.detail["row"] >= 27


def test_check_nested_accepts_monotone_and_repeated_rows():
    seq = build_monotone_family(gf(3), 1, 2, 2)
    lo, hi = seq.levels[0].matrix, seq.levels[1].matrix
    assert check_nested(lo, hi) is None
    # synthetic: new rows repeat old rows verbatim
    rows = list(lo.rows) + [lo.rows[0], lo.rows[4], (1 << lo.n) - 1, 0]
    hi2 = matrix_from_strings(
        ["".join("1" if (r >> j) & 1 else "0" for j in range(lo.n)) for r in rows]
    )
    assert check_nested(lo, hi2) is None


def test_check_nested_rejects_novel_mixed_row():
    lo = matrix_from_strings(TABLE_9X9)
    novel = sum(1 << j for j in (0, 1))  # not an old row, not constant
    rows = list(lo.rows) + [novel]
    hi = matrix_from_strings(
        ["".join("1" if (r >> j) & 1 else "0" for j in range(9)) for r in rows]
    )
    violation = check_nested(lo, hi)
    assert violation is not None and violation.clause == "z_row_novel"
    assert violation.detail["row"] == 9


def test_single_level_family_ok():
    seq = build_embedding_family(gf(2), [(1, 1)])
    assert len(seq) == 1
    assert check_embedding_family(seq) is None


def test_dims_violations_reported():
    a = matrix_from_strings(["10", "01"])
    b = matrix_from_strings(["1"])
    assert check_monotone(a, b).clause == "dims_not_nested"
    assert check_nested(a, b).clause == "dims_not_nested"
    seq = EmbeddingSequence.from_matrices([a, b], ds=[1, 1])
    assert check_embedding_family(seq).clause in ("rows_decrease", "cols_decrease")


def test_grown_matrix_random_4cover_spot_check():
    # certificate-independent evidence: no randomly sampled 5 columns admit
    # a cover of one by the other four
    import random

    m, _, _ = reorder_embedding(gf(3), 1, 2, 2, 4)
    cols = m.col_masks()
    rng = random.Random(424242)
    for _ in range(20_000):
        subset = rng.sample(range(729), 5)
        union = 0
        for j in subset[1:]:
            union |= cols[j]
        assert cols[subset[0]] & ~union != 0


def test_level_dimensions_match_closed_form():
    # every materialized matrix agrees with the exact parameter arithmetic
    from cffkit.metrics import level_params

    cases = [
        (3, build_embedding_family(gf(3), [(1, 2), (2, 4)])),
        (3, build_monotone_family(gf(3), 1, 2, 2)),
        (2, build_embedding_family(gf(2), [(1, 1), (1, 1), (1, 1)])),
        (4, build_embedding_family(gf(4), schedule_priority_d(4, 2, 1, 3))),
    ]
    for q0, seq in cases:
        for lv in seq.levels:
            t, n = level_params(q0, lv.params.k, lv.params.d, lv.params.i)
            assert (t, n) == (lv.params.t, lv.params.n)
            if lv.matrix is not None:
                assert (lv.matrix.t, lv.matrix.n) == (t, n)


# --- manifest ---


def test_manifest_roundtrips_through_json():
    seq = build_embedding_family(gf(3), [(1, 2), (2, 4)])
    manifest = seq.manifest(matrix_files=["level0.txt", "level1.txt"])
    text = json.dumps(manifest, sort_keys=True)
    back = json.loads(text)
    assert back["kind"] == "embedding"
    assert back["base_field"]["p"] == 3
    assert [lv["t"] for lv in back["levels"]] == [9, 81]
    assert back["levels"][1]["matrix_file"] == "level1.txt"
    assert len(back["levels"][1]["row_perm"]) == 81

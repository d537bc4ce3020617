"""Grow a cover-free matrix without invalidating work already done.

Squaring the field order grows the matrix; listing old rows and columns
first makes the old matrix the literal top-left block of the new one, so
pools and aggregates computed at the small size stay valid.  The growth
step may simultaneously raise d (identify more defectives) and the degree
cap k (more columns per test).
"""

from cffkit import (
    build_embedding_family,
    check_embedding_family,
    field_create,
    max_d,
    reorder_embedding,
    schedule_priority_d,
    schedule_priority_ratio,
    verify_intersection_certificate,
)

f3 = field_create(3, 1)

# One step: the 9x9 matrix (q=3, k=1, d=2) grows into an 81x729 matrix over
# the 9-element field with k'=2, d'=4.
grown, row_perm, col_perm = reorder_embedding(f3, k=1, d=2, k2=2, d2=4)
print(f"grown matrix: {grown.t} x {grown.n}, claims d={grown.d_claimed}")
print("top-left 9x9 equals the small matrix: rows/columns were listed old-first")
print("certificate (pairwise intersections <= 2, column weight 9):",
      verify_intersection_certificate(grown, k=2, b=9) or "ok",
      f"=> d-cover-free for every d <= {max_d(9, 2)}")

# The rows pairing an old point with a new second coordinate are all zero on
# old columns: old polynomials cannot evaluate an old point to a new value.
zero_rows = range(9, 27)
assert all(grown.entry(i, j) == 0 for i in zero_rows for j in range(9))
print("rows 9..26 x columns 0..8 are a zero block")

# A whole family in one call; every level nests in the next.
family = build_embedding_family(f3, [(1, 2), (2, 4)])
print("\ntwo-level family:",
      [(lv.params.t, lv.params.n, lv.params.d) for lv in family.levels])
print("nesting check:", check_embedding_family(family) or "ok")

# Ready-made schedules.  Fixing k and maxing out d per level prioritizes
# identification capability; fixing d and maxing out k prioritizes the
# compression ratio n/t.
print("\nd-priority schedule (q=4, k=2):", schedule_priority_d(4, 2, 1, 4))
print("ratio-priority schedule (q=4, d=2):", schedule_priority_ratio(4, 2, 1, 4))

# Levels too large to hold in memory keep exact parameters, and single
# columns remain computable on demand from their polynomial index.
big = build_embedding_family(field_create(2, 2), schedule_priority_d(4, 2, 1, 3))
for lv in big.levels:
    tag = "materialized" if lv.matrix is not None else "params only"
    print(f"  level {lv.params.i}: {lv.params.t} x {lv.params.n}  d={lv.params.d}  [{tag}]")
col = big.column_for_poly(2, 12345)
print("on-demand column weight at level 2:", col.bit_count(), "(one 1 per block)")

"""Monotone growth: new tests never touch old items.

Keeping (k, d) fixed and retaining only the d*k+1 base-field row blocks
makes the block below the old matrix all zeros.  In aggregation settings
that means the already-discarded per-item data is never needed again: every
appended test involves new items only.  The price is a smaller d; the gain
is a compression ratio that still grows like n**(1 - 1/(k+1)).
"""

from cffkit import (
    build_monotone_family,
    check_monotone,
    check_nested,
    compression_ratio,
    field_create,
    verify_cff_exhaustive,
)

family = build_monotone_family(field_create(3, 1), k=1, d=2, levels=3)
print("levels (t x n):", [(lv.params.t, lv.params.n) for lv in family.levels])

lo, mid, hi = (lv.matrix for lv in family.levels)
print("monotone check level 0 -> 1:", check_monotone(lo, mid) or "ok")
print("monotone check level 1 -> 2:", check_monotone(mid, hi) or "ok")
print("(zero rows also satisfy the weaker nested shape:",
      (check_nested(lo, mid) or "ok"), ")")

print("exhaustive 2-cover-free, level 0:", verify_cff_exhaustive(lo, 2) or "ok")
print("exhaustive 2-cover-free, level 1:", verify_cff_exhaustive(mid, 2) or "ok")

for lv in family.levels:
    ratio = compression_ratio(lv.params.t, lv.params.n)
    print(f"  level {lv.params.i}: ratio n/t = {ratio.value}"
          f"  (t = {lv.params.t}, n = {lv.params.n})")
print("level-1 ratio equals sqrt(n)/3 = 81**0.5 / 3 = 3")

# Contrast: a growth step that keeps all row blocks of the larger field is
# NOT monotone; entries appear under old columns as soon as the first
# coordinate leaves the base field.
from cffkit import reorder_embedding

full, _, _ = reorder_embedding(field_create(3, 1), 1, 2, 2, 4)
violation = check_monotone(lo, full)
print("\nfull-block growth vs monotone shape:", violation.as_dict())

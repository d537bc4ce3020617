"""Exact parameter arithmetic at any scale.

All bookkeeping is integer/Decimal exact, so levels whose matrices could
never be materialized (n beyond 10**100000) still report correct dimensions
and compression ratios.
"""

from cffkit import (
    actual_ratio_with_partial_columns,
    compression_ratio,
    emit_table,
    info_bound,
    level_params,
)

for name, blurb in (
    ("k2", "raise d per level, degree cap fixed at 2"),
    ("k3", "raise d per level, degree cap fixed at 3"),
    ("d2", "raise the degree cap per level, d fixed at 2"),
    ("d3", "raise the degree cap per level, d fixed at 3"),
):
    table = emit_table(name)
    print(f"--- {name}: {blurb}")
    print(table.to_text())

print("--- transition: d = floor(log4 n) while n doubles")
print(emit_table("transition").to_text())

# Closed-form level dimensions, exact at any size.
t, n = level_params(4, 3, 21845, 3)
print("level (q=4, k=3, d=21845, i=3):", f"t = {t}, n = 65536^4 = {n}")

# The ratio of a single astronomically wide level.
r = compression_ratio(4294901760, 65536**32768)
print("ratio n/t at the widest tabulated level:", r.value)

# The counting bound marks how much of the possible compression a given
# (n, d) leaves on the table.
print("\ncounting bound n/((d^2/log d) log n):")
for n_items, d in ((4096, 2), (4096, 4), (2**20, 2)):
    print(f"  n={n_items}, d={d}: {info_bound(n_items, d):.2f}")

# Transition cost of moving to the next field before filling its columns:
# with only 65 of 4096 columns used, the ratio collapses until n catches up.
print("\npartially filled level (q=16, k=2, d=1):")
for used in (65, 500, 4096):
    ratio = actual_ratio_with_partial_columns(16, 2, 1, used)
    print(f"  n_used={used}: ratio {ratio.value}")

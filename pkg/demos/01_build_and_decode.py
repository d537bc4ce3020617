"""Build a cover-free matrix and run one round of group testing.

A d-cover-free t x n matrix pools n items into t tests so that any up to d
defective items are identified from the pass/fail pattern alone.  Columns
are items, rows are tests; a test fails exactly when it contains a
defective item.
"""

from cffkit import (
    build_polynomial_cff,
    decode,
    field_create,
    max_d,
    restrict_blocks,
    simulate_outcomes,
    verify_cff_exhaustive,
)
from cffkit.fixtures import walkthrough_matrix, walkthrough_outcome


def show(matrix, title):
    print(f"\n{title}  ({matrix.t} tests x {matrix.n} items, d={matrix.d_claimed})")
    for i in range(matrix.t):
        row = "".join("1" if matrix.entry(i, j) else "0" for j in range(matrix.n))
        print("   ", row)


# Evaluating all nine degree<=1 polynomials over the 3-element field at all
# three points gives a 9x9 matrix that tolerates d = (3-1)/1 = 2 defectives.
f3 = field_create(3, 1)
matrix = build_polynomial_cff(f3, 1)
show(matrix, "polynomial evaluation matrix over GF(3)")
print("exhaustive 2-cover-free check:", verify_cff_exhaustive(matrix, 2) or "ok")

# Need only d=1?  Drop a block of rows: the first (d*k+1) blocks already
# form a smaller cover-free matrix, so tests can stop early.
smaller = restrict_blocks(matrix, 2)
show(smaller, "first two row blocks")
print("exhaustive 1-cover-free check:", verify_cff_exhaustive(smaller, 1) or "ok")

# One full round: plant defectives, observe outcomes, decode.
defectives = [3, 7]
outcome = simulate_outcomes(matrix, defectives)
print("\nplanted defectives:", defectives)
print("outcome vector (1 = test fails):", outcome)
print("decoded:", decode(matrix, outcome, 2))

# The bundled 9x12 walkthrough matrix: twelve items, nine tests, items 3
# and 12 (1-based) defective.
walk = walkthrough_matrix()
show(walk, "bundled 9x12 walkthrough matrix")
out = walkthrough_outcome()
print("observed outcome:", out)
found = decode(walk, out, 2)
print("decoded (1-based):", [j + 1 for j in found])

print("\nlargest d the construction certifies, per (q, k):")
for q in (3, 4, 5, 9, 16):
    row = [f"k={k}: d={max_d(q, k)}" for k in range(1, 4)]
    print(f"  q={q:>2}:  " + "   ".join(row))

"""From orthogonal arrays to cover-free matrices, and back to the same bits.

Any strength-t array over v symbols (rows pairwise agreeing in at most t-1
columns) transposes into a family of functions separating one column from up
to (k-1)/(t-1) others; writing each symbol as a one-hot block turns that
family into a cover-free matrix.  Fed with the polynomial-evaluation array,
the chain lands bit-for-bit on the direct polynomial construction.
"""

import numpy as np

from cffkit import (
    SepHashFamily,
    build_monotone_family,
    build_polynomial_cff,
    bush_oa,
    field_create,
    nested_bush_sequence,
    pa_embedding_lift,
    pa_restrict_columns,
    pa_to_shf,
    shf_to_cff,
    verify_cff_exhaustive,
    verify_design,
    verify_shf,
)

f3 = field_create(3, 1)

oa = bush_oa(f3, 2)
print(f"evaluation array: {oa.n} rows x {oa.k} columns over {oa.v} symbols, strength {oa.strength}")
print("orthogonal-array check:", verify_design(oa) or "ok")

shf = pa_to_shf(oa, w=2)
print(f"transposed: {shf.N} functions on {shf.n} inputs onto {shf.m} values, separating {{1, {shf.w}}}")
print("separation check:", verify_shf(shf) or "ok")

expanded = shf_to_cff(shf)
direct = build_polynomial_cff(f3, 1)
print("one-hot expansion equals the direct polynomial matrix:", expanded == direct)

# A tiny hand-made separating family over four symbols: two functions on
# six inputs; every input owns a value unique to it in one of the rows.
fig = SepHashFamily(cells=np.array([[0, 1, 2, 3, 3, 3], [3, 3, 3, 0, 1, 2]]), m=4, w=2)
print("\nhand-made family separates {1,2}:", verify_shf(fig) or "ok")
small = shf_to_cff(fig)
print(f"expands to {small.t} x {small.n}; exhaustive 2-cover-free:",
      verify_cff_exhaustive(small, 2) or "ok")

# Restricting the array to i*(t-1)+1 columns trades separation for rows,
# mirroring the row-block restriction of the polynomial matrix.
narrow = pa_restrict_columns(bush_oa(field_create(2, 2), 2), 2)
m = shf_to_cff(pa_to_shf(narrow, 2))
print(f"\nrestricted chain over GF(4): {m.t} x {m.n} matrix,",
      "exhaustive 2-cover-free:", verify_cff_exhaustive(m, 2) or "ok")

# Nested arrays lift to nested cover-free families.  The tower of
# evaluation arrays (rows ordered subfield-polynomials-first) reproduces
# the monotone family exactly.
seq = [pa_restrict_columns(a, 2) for a in nested_bush_sequence(f3, 2, 2)]
lifted = pa_embedding_lift(seq, [2, 2])
reference = build_monotone_family(f3, 1, 2, 2)
print("\nlifted nested arrays == monotone family levels:",
      all(a.matrix == b.matrix for a, b in zip(lifted.levels, reference.levels)))

"""Incidence matrices, polynomial cover-free constructions, verification, decoding.

A t x n incidence matrix is kept as one Python int per row (bit j = column j),
with column bitmasks derived on demand for the set operations that dominate
verification and decoding.  A matrix is d-cover-free when no column is
contained in the union of any d others; that property is what makes one-round
identification of up to d defectives possible.

The text format is stable and byte-reproducible::

    CFF <t> <n> <d>
    <t lines of n characters from {0,1}>

Row i of the file is row i of the matrix; character j is column j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
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
from .fields import FieldLevel, _digits

DEFAULT_MAX_COLUMNS = 1 << 20
DEFAULT_MAX_CELLS = 1 << 26
DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class Outcome:
    """Result vector of t tests; bit i set means test i failed."""

    bits: int
    t: int

    @classmethod
    def from_bools(cls, flags) -> "Outcome":
        bits = 0
        flags = list(flags)
        for i, f in enumerate(flags):
            if f:
                bits |= 1 << i
        return cls(bits, len(flags))

    @classmethod
    def from_string(cls, s: str) -> "Outcome":
        """Parse '001011' or '0,0,1,0,1,1'; character/entry i is test i."""
        s = s.strip()
        parts = s.split(",") if "," in s else list(s)
        vals = [p.strip() for p in parts]
        if not all(v in ("0", "1") for v in vals):
            raise ValueError(f"outcome string must be 0/1 entries, got {s!r}")
        return cls.from_bools(v == "1" for v in vals)

    def failing_rows(self) -> list[int]:
        return [i for i in range(self.t) if (self.bits >> i) & 1]

    def __str__(self):
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.t))


@dataclass(frozen=True)
class CffWitness:
    """A cover-freeness counterexample: column `target` is covered by `covers`."""

    target: int
    covers: tuple[int, ...]

    def holds_for(self, matrix: "IncidenceMatrix") -> bool:
        union = 0
        for j in self.covers:
            union |= matrix.col_mask(j)
        return matrix.col_mask(self.target) & ~union == 0

    def as_dict(self) -> dict:
        return {"target": self.target, "covers": list(self.covers)}


@dataclass(eq=False)
class IncidenceMatrix:
    """Bit-packed t x n binary matrix with an optional cover-free claim."""

    t: int
    n: int
    rows: tuple[int, ...]
    d_claimed: int = 0
    row_labels: list | None = None
    col_labels: list | None = None
    provenance: dict | None = None
    _cols: list | None = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.rows) != self.t:
            raise MatrixTooLarge(f"expected {self.t} rows, got {len(self.rows)}")
        limit = 1 << self.n
        for r in self.rows:
            if r >= limit or r < 0:
                raise IndexOutOfRange("row has bits beyond column count")

    # bit-exact identity: labels and provenance are metadata
    def __eq__(self, other):
        if not isinstance(other, IncidenceMatrix):
            return NotImplemented
        return (self.t, self.n, self.rows) == (other.t, other.n, other.rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def col_masks(self) -> list[int]:
        if self._cols is None:
            cols = [0] * self.n
            for i, row in enumerate(self.rows):
                bit = 1 << i
                while row:
                    low = row & -row
                    cols[low.bit_length() - 1] |= bit
                    row ^= low
            self._cols = cols
        return self._cols

    def col_mask(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise IndexOutOfRange(f"column {j} outside [0, {self.n})")
        return self.col_masks()[j]

    def col_weight(self, j: int) -> int:
        return self.col_mask(j).bit_count()

    def submatrix(self, t: int, n: int) -> "IncidenceMatrix":
        """Top-left t x n corner."""
        mask = (1 << n) - 1
        return IncidenceMatrix(t, n, tuple(r & mask for r in self.rows[:t]))

    # --- text format ---

    def to_text(self) -> str:
        lines = [f"CFF {self.t} {self.n} {self.d_claimed}"]
        for row in self.rows:
            lines.append("".join("1" if (row >> j) & 1 else "0" for j in range(self.n)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IncidenceMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) != 4 or head[0] != "CFF":
            raise ValueError("matrix file must start with 'CFF t n d'")
        t, n, d = int(head[1]), int(head[2]), int(head[3])
        if len(lines) - 1 != t:
            raise ValueError(f"expected {t} rows, file has {len(lines) - 1}")
        rows = []
        for ln in lines[1 : t + 1]:
            if len(ln) != n or set(ln) - {"0", "1"}:
                raise ValueError(f"bad matrix row: {ln!r}")
            rows.append(sum(1 << j for j, ch in enumerate(ln) if ch == "1"))
        return cls(t, n, tuple(rows), d_claimed=d)

    def sidecar(self) -> dict:
        """Provenance/label metadata for the optional JSON sidecar."""
        out: dict = {"t": self.t, "n": self.n, "d": self.d_claimed}
        if self.provenance is not None:
            out["provenance"] = self.provenance
        if self.row_labels is not None:
            out["row_labels"] = [list(lbl) for lbl in self.row_labels]
        if self.col_labels is not None:
            out["col_labels"] = list(self.col_labels)
        return out


def max_d(q: int, k: int) -> int:
    """Largest d for which the degree-k construction over order q is d-cover-free."""
    if q < 2 or k < 1:
        raise ParamViolation(f"need q >= 2 and k >= 1, got q={q}, k={k}")
    return (q - 1) // k


def build_polynomial_cff(
    field: FieldLevel,
    k: int,
    max_columns: int = DEFAULT_MAX_COLUMNS,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> IncidenceMatrix:
    """Evaluation matrix of all degree <= k polynomials over `field`.

    Rows are the q*q point pairs (x_i, x_j) in block-major order (i, then j);
    column c is the polynomial with canonical index c; an entry is 1 exactly
    when the polynomial sends x_i to x_j.  Any two distinct columns share at
    most k rows, which certifies d-cover-freeness for every d <= (q-1)/k.
    """
    if k < 1:
        raise ParamViolation("polynomial degree cap k must be >= 1")
    q = field.q
    n = q ** (k + 1)
    t = q * q
    if n > max_columns:
        raise MatrixTooLarge(f"{n} columns exceed limit {max_columns}")
    if t * n > max_cells:
        raise MatrixTooLarge(f"{t}x{n} cells exceed limit {max_cells}")
    rows = [0] * t
    for c in range(n):
        coeffs = _digits(c, q, k + 1)
        for i in range(q):
            acc = 0
            for cf in reversed(coeffs):
                acc = field.add(field.mul(acc, i), cf)
            rows[i * q + acc] |= 1 << c
    return IncidenceMatrix(
        t,
        n,
        tuple(rows),
        d_claimed=max_d(q, k),
        row_labels=[(i, j) for i in range(q) for j in range(q)],
        col_labels=list(range(n)),
        provenance={
            "construction": "polynomial",
            "q": q,
            "k": k,
            "blocks": q,
            "field": field.descriptor(),
        },
    )


def restrict_blocks(matrix: IncidenceMatrix, b: int) -> IncidenceMatrix:
    """Keep the first b row blocks (b*q rows) of a polynomial-construction matrix.

    With b = d*k + 1 blocks the result is d-cover-free; the claim recorded on
    the result is floor((b-1)/k).
    """
    prov = matrix.provenance or {}
    if prov.get("construction") != "polynomial":
        raise NotBlockStructured("matrix lacks polynomial block provenance")
    q, k, blocks = prov["q"], prov["k"], prov["blocks"]
    if b < 1 or b > blocks:
        raise TooFewBlocks(f"requested {b} of {blocks} blocks")
    t = b * q
    d = (b - 1) // k
    return IncidenceMatrix(
        t,
        matrix.n,
        matrix.rows[:t],
        d_claimed=d,
        row_labels=matrix.row_labels[:t] if matrix.row_labels else None,
        col_labels=matrix.col_labels,
        provenance={**prov, "blocks": b},
    )


def verify_cff_exhaustive(
    matrix: IncidenceMatrix, d: int, budget: int = DEFAULT_BUDGET
) -> CffWitness | None:
    """Check the d-cover-free property by brute force.

    Enumerates (d+1)-subsets of columns in ascending order and, inside each
    subset, tries every member as the covered column; the first violation
    found under that order is returned.  None means the property holds.

    Work is metered in nominal bit-row operations (d+1 per containment
    check); crossing `budget` raises BudgetExceeded, so verification of a
    large valid matrix should use the intersection certificate instead.
    """
    if d < 1:
        raise ParamViolation("d must be >= 1")
    if d > matrix.n - 1:
        raise ParamViolation(f"d={d} needs at least d+1 columns, matrix has {matrix.n}")
    cols = matrix.col_masks()
    size = d + 1
    work = 0
    for subset in itertools.combinations(range(matrix.n), size):
        masks = [cols[j] for j in subset]
        # prefix/suffix unions give each leave-one-out union in O(1)
        prefixes = [0] * size
        acc = 0
        for idx in range(size):
            prefixes[idx] = acc
            acc |= masks[idx]
        suffixes = [0] * size
        acc = 0
        for idx in range(size - 1, -1, -1):
            suffixes[idx] = acc
            acc |= masks[idx]
        work += size * size
        if work > budget:
            raise BudgetExceeded(f"work {work} exceeds budget {budget}")
        for idx in range(size):
            if masks[idx] & ~(prefixes[idx] | suffixes[idx]) == 0:
                target = subset[idx]
                covers = tuple(j for j in subset if j != target)
                return CffWitness(target, covers)
    return None


def verify_intersection_certificate(
    matrix: IncidenceMatrix, k: int, b: int, workers: int = 1
) -> tuple[int, int] | None:
    """Constant-weight pairwise-intersection certificate.

    Requires every column to have exactly b ones; succeeds when every pair of
    distinct columns shares at most k rows.  Success certifies the matrix is
    d-cover-free for every d <= (b-1)/k, because a covered column would need
    its b ones absorbed by d columns contributing at most k each.

    Returns None on success or the first failing column pair (ascending).
    """
    cols = matrix.col_masks()
    for j, mask in enumerate(cols):
        if mask.bit_count() != b:
            raise ColumnWeightNotConstant(
                f"column {j} has weight {mask.bit_count()}, expected {b}"
            )
    n = matrix.n
    if workers > 1 and n >= 4:
        return _certificate_parallel(cols, k, workers)
    for i in range(n - 1):
        ci = cols[i]
        for j in range(i + 1, n):
            if (ci & cols[j]).bit_count() > k:
                return (i, j)
    return None


def _cert_chunk(args):
    cols, k, lo, hi = args
    n = len(cols)
    for i in range(lo, hi):
        ci = cols[i]
        for j in range(i + 1, n):
            if (ci & cols[j]).bit_count() > k:
                return (i, j)
    return None


def _certificate_parallel(cols, k, workers):
    from concurrent.futures import ProcessPoolExecutor

    n = len(cols)
    chunk = max(1, (n + workers - 1) // workers)
    ranges = [(cols, k, lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for result in pool.map(_cert_chunk, ranges):
            if result is not None:
                return result
    return None


def simulate_outcomes(matrix: IncidenceMatrix, defectives) -> Outcome:
    """Outcome vector when exactly the given columns are defective."""
    bits = 0
    for j in defectives:
        if not 0 <= j < matrix.n:
            raise IndexOutOfRange(f"defective index {j} outside [0, {matrix.n})")
        bits |= matrix.col_mask(j)
    return Outcome(bits, matrix.t)


def decode(matrix: IncidenceMatrix, outcome: Outcome, d: int) -> list[int]:
    """Identify defective columns from test outcomes.

    Every column appearing in a passing test is valid; if at most d columns
    survive and they explain every failing test, they are exactly the
    defectives (guaranteed when the matrix is d-cover-free and at most d
    items are defective).  Raises TooManyCandidates or InconsistentOutcome
    otherwise.
    """
    if outcome.t != matrix.t:
        raise IndexOutOfRange(
            f"outcome length {outcome.t} does not match {matrix.t} tests"
        )
    cols = matrix.col_masks()
    pass_mask = ~outcome.bits & ((1 << matrix.t) - 1)
    survivors = [j for j in range(matrix.n) if cols[j] & pass_mask == 0]
    if len(survivors) > d:
        raise TooManyCandidates(survivors, d)
    union = 0
    for j in survivors:
        union |= cols[j]
    unexplained = outcome.bits & ~union
    if unexplained:
        raise InconsistentOutcome(unexplained.bit_length() - 1, survivors)
    return survivors

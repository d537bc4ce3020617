"""Orthogonal arrays, packing arrays, separating hash families, and the
conversion chain from them to cover-free matrices.

An n x k array over v symbols has strength t when every t-column projection
contains each t-tuple at most once (packing array) or exactly once
(orthogonal array, which forces n = v**t).  Any two distinct rows of a
strength-t packing array agree in at most t-1 columns, so the transposed
array is a hash family separating one column from any w <= (k-1)/(t-1)
others.  One-hot expansion of a separating family with parameter w yields a
w-cover-free matrix, and applied to the polynomial-evaluation array the
chain reproduces the polynomial construction bit for bit.

Text formats::

    DESIGN <kind> <n> <k> <v> <t>     then n rows of k integers
    SHF <N> <n> <m> <w>               then N rows of n integers
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cff import IncidenceMatrix
from .embedding import EmbeddingSequence, LevelParams, SequenceLevel
from .errors import (
    ArrayTooLarge,
    BudgetExceeded,
    NotNested,
    ParamViolation,
    TooFewColumns,
    WTooLarge,
)
from .fields import FieldLevel, _digits, _undigits, field_extend

DEFAULT_MAX_DESIGN_CELLS = 1 << 24


@dataclass(eq=False)
class DesignArray:
    """n x k array over [0, v) of claimed strength t; kind 'OA' or 'PA'."""

    cells: np.ndarray
    v: int
    strength: int
    kind: str = "PA"

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.int64)
        if self.cells.ndim != 2:
            raise ParamViolation("design cells must be a 2-d array")
        if self.kind not in ("OA", "PA"):
            raise ParamViolation(f"kind must be OA or PA, got {self.kind!r}")
        if self.cells.size and (self.cells.min() < 0 or self.cells.max() >= self.v):
            raise ParamViolation(f"cell values must lie in [0, {self.v})")

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def k(self) -> int:
        return self.cells.shape[1]

    def __eq__(self, other):
        if not isinstance(other, DesignArray):
            return NotImplemented
        return (
            self.v == other.v
            and self.strength == other.strength
            and self.kind == other.kind
            and np.array_equal(self.cells, other.cells)
        )

    def to_text(self) -> str:
        lines = [f"DESIGN {self.kind} {self.n} {self.k} {self.v} {self.strength}"]
        for row in self.cells:
            lines.append(" ".join(str(int(x)) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DesignArray":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) != 6 or head[0] != "DESIGN":
            raise ValueError("design file must start with 'DESIGN kind n k v t'")
        kind, n, k, v, t = head[1], int(head[2]), int(head[3]), int(head[4]), int(head[5])
        cells = np.array([[int(x) for x in ln.split()] for ln in lines[1 : n + 1]])
        if cells.shape != (n, k):
            raise ValueError(f"expected {n}x{k} cells, got {cells.shape}")
        return cls(cells=cells, v=v, strength=t, kind=kind)


@dataclass(eq=False)
class SepHashFamily:
    """N functions from n inputs onto [0, m), separating type {1, w}."""

    cells: np.ndarray
    m: int
    w: int

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.int64)
        if self.cells.ndim != 2:
            raise ParamViolation("hash family cells must be a 2-d array")
        if self.cells.size and (self.cells.min() < 0 or self.cells.max() >= self.m):
            raise ParamViolation(f"cell values must lie in [0, {self.m})")

    @property
    def N(self) -> int:
        return self.cells.shape[0]

    @property
    def n(self) -> int:
        return self.cells.shape[1]

    def __eq__(self, other):
        if not isinstance(other, SepHashFamily):
            return NotImplemented
        return (
            self.m == other.m
            and self.w == other.w
            and np.array_equal(self.cells, other.cells)
        )

    def to_text(self) -> str:
        lines = [f"SHF {self.N} {self.n} {self.m} {self.w}"]
        for row in self.cells:
            lines.append(" ".join(str(int(x)) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SepHashFamily":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) != 5 or head[0] != "SHF":
            raise ValueError("hash family file must start with 'SHF N n m w'")
        N, n, m, w = (int(x) for x in head[1:])
        cells = np.array([[int(x) for x in ln.split()] for ln in lines[1 : N + 1]])
        if cells.shape != (N, n):
            raise ValueError(f"expected {N}x{n} cells, got {cells.shape}")
        return cls(cells=cells, m=m, w=w)


def bush_oa(
    field: FieldLevel, t: int, max_cells: int = DEFAULT_MAX_DESIGN_CELLS
) -> DesignArray:
    """Orthogonal array of strength t from polynomial evaluation.

    Rows are the q**t polynomials of degree < t in canonical order, columns
    the field elements; a cell holds the evaluation's element index.  Any t
    evaluation points determine the polynomial uniquely, which is exactly
    the exactly-once property.
    """
    if t < 2:
        raise ParamViolation("strength t must be >= 2")
    q = field.q
    n = q**t
    if n * q > max_cells:
        raise ArrayTooLarge(f"{n}x{q} cells exceed limit {max_cells}")
    cells = np.empty((n, q), dtype=np.int64)
    for r in range(n):
        coeffs = _digits(r, q, t)
        for c in range(q):
            acc = 0
            for cf in reversed(coeffs):
                acc = field.add(field.mul(acc, c), cf)
            cells[r, c] = acc
    return DesignArray(cells=cells, v=q, strength=t, kind="OA")


def verify_design(array: DesignArray):
    """Exhaustive projection check.

    Counts t-tuples in every t-column projection: at most once for PA,
    exactly once for OA.  Returns None on success, else (columns, tuple)
    naming the duplicated (or, for an OA, missing) tuple.
    """
    t = array.strength
    cells = array.cells
    exactly = array.kind == "OA"
    if exactly and array.n != array.v**t:
        # wrong row count: some tuple is missing from any projection
        cols = tuple(range(t))
        seen = {tuple(int(x) for x in cells[r, :t]) for r in range(array.n)}
        for tup in itertools.product(range(array.v), repeat=t):
            if tup not in seen:
                return (cols, tup)
    for cols in itertools.combinations(range(array.k), t):
        seen = set()
        for r in range(array.n):
            tup = tuple(int(cells[r, c]) for c in cols)
            if tup in seen:
                return (cols, tup)
            seen.add(tup)
        if exactly and len(seen) != array.v**t:
            for tup in itertools.product(range(array.v), repeat=t):
                if tup not in seen:
                    return (cols, tup)
    return None


def pa_to_shf(array: DesignArray, w: int) -> SepHashFamily:
    """Transpose a strength-t array into a type {1, w} separating family.

    Two distinct rows agree in at most t-1 columns, so removing the
    agreement columns of w rows still leaves k - w(t-1) >= 1 separating
    functions; hence the bound w <= (k-1)/(t-1).
    """
    if w < 1:
        raise ParamViolation("w must be >= 1")
    if w * (array.strength - 1) > array.k - 1:
        raise WTooLarge(
            f"w={w} exceeds (k-1)/(t-1) = {(array.k - 1)}/{array.strength - 1}"
        )
    return SepHashFamily(cells=array.cells.T.copy(), m=array.v, w=w)


def verify_shf(family: SepHashFamily, budget: int = 10**9):
    """Exhaustive {1, w} check.

    For every column c0 and every w-set of other columns, some row must give
    c0 a value none of the others take.  Returns None on success, else the
    violating (c0, others).  Each (c0, w-set) pair costs one budget unit.
    """
    cells = [tuple(int(x) for x in row) for row in family.cells]
    n = family.n
    w = family.w
    rows = range(family.N)
    work = 0
    for c0 in range(n):
        others = [c for c in range(n) if c != c0]
        for combo in itertools.combinations(others, w):
            work += 1
            if work > budget:
                raise BudgetExceeded(f"work {work} exceeds budget {budget}")
            separated = False
            for r in rows:
                val = cells[r][c0]
                if all(cells[r][c] != val for c in combo):
                    separated = True
                    break
            if not separated:
                return (c0, combo)
    return None


def shf_to_cff(family: SepHashFamily) -> IncidenceMatrix:
    """One-hot expansion of a separating family into a cover-free matrix.

    Each function contributes a block of m rows; column j gets a 1 in row
    (i, x) exactly when function i maps j to x.  Separation of {1, w} turns
    into w-cover-freeness: the separating row becomes a 1 in the target
    column facing 0s in all w others.
    """
    N, n, m = family.N, family.n, family.m
    rows = [0] * (N * m)
    cells = family.cells
    for j in range(n):
        bit = 1 << j
        for i in range(N):
            rows[i * m + int(cells[i, j])] |= bit
    return IncidenceMatrix(
        N * m,
        n,
        tuple(rows),
        d_claimed=family.w,
        row_labels=[(i, x) for i in range(N) for x in range(m)],
        col_labels=list(range(n)),
        provenance={"construction": "shf_one_hot", "blocks": N, "block_size": m, "w": family.w},
    )


def pa_restrict_columns(array: DesignArray, i: int) -> DesignArray:
    """First i*(t-1) + 1 columns; strength survives, separation drops to {1, i}."""
    if i < 1:
        raise ParamViolation("block parameter i must be >= 1")
    need = i * (array.strength - 1) + 1
    if need > array.k:
        raise TooFewColumns(f"need {need} columns, array has {array.k}")
    return DesignArray(
        cells=array.cells[:, :need].copy(),
        v=array.v,
        strength=array.strength,
        kind=array.kind,
    )


def nested_bush_sequence(
    base: FieldLevel,
    t: int,
    levels: int,
    max_cells: int = DEFAULT_MAX_DESIGN_CELLS,
) -> list[DesignArray]:
    """Tower of polynomial-evaluation arrays nesting as top-left blocks.

    Rows of each level list the previous level's polynomials first (their
    coefficient digits survive the index-preserving field embedding), then
    the remaining polynomials in canonical order; columns are field elements,
    whose subfield prefix nests automatically.
    """
    if levels < 1:
        raise ParamViolation("need at least one level")
    out = []
    field = base
    row_polys: list[int] = []
    q_prev = None
    for lvl in range(levels):
        if lvl:
            field = field_extend(field)
        q = field.q
        n = q**t
        if n * q > max_cells:
            raise ArrayTooLarge(f"{n}x{q} cells exceed limit {max_cells}")
        if lvl == 0:
            row_polys = list(range(n))
        else:
            lifted = [
                _undigits(_digits(c, q_prev, t), q) for c in row_polys
            ]
            seen = set(lifted)
            row_polys = lifted + [c for c in range(n) if c not in seen]
        cells = np.empty((n, q), dtype=np.int64)
        for pos, r in enumerate(row_polys):
            coeffs = _digits(r, q, t)
            for c in range(q):
                acc = 0
                for cf in reversed(coeffs):
                    acc = field.add(field.mul(acc, c), cf)
                cells[pos, c] = acc
        out.append(DesignArray(cells=cells, v=q, strength=t, kind="OA"))
        q_prev = q
    return out


def pa_embedding_lift(arrays, ds) -> EmbeddingSequence:
    """Nested packing arrays lifted to a nested family of cover-free matrices.

    Requires consecutive arrays to contain each other as top-left blocks and
    each d_l to respect (k_l-1)/(t_l-1).  The transpose swaps the roles of
    the off-diagonal blocks, and the one-hot row order lists the previous
    level's (function, value) rows first, so the resulting matrices nest.
    """
    arrays = list(arrays)
    ds = list(ds)
    if not arrays or len(arrays) != len(ds):
        raise ParamViolation("need one d per array")
    for lvl, (a, d) in enumerate(zip(arrays, ds)):
        if d < 1:
            raise ParamViolation(f"level {lvl}: d must be >= 1")
        if d * (a.strength - 1) > a.k - 1:
            raise ParamViolation(
                f"level {lvl}: d={d} exceeds (k-1)/(t-1) = ({a.k - 1})/({a.strength - 1})"
            )
        if lvl:
            prev = arrays[lvl - 1]
            if ds[lvl - 1] > d:
                raise ParamViolation(f"level {lvl}: d may not decrease")
            if (
                a.n < prev.n
                or a.k < prev.k
                or a.v < prev.v
                or a.strength < prev.strength
            ):
                raise ParamViolation(f"level {lvl}: dimensions may not decrease")
            if not np.array_equal(a.cells[: prev.n, : prev.k], prev.cells):
                raise NotNested(f"level {lvl} does not contain level {lvl - 1} top-left")

    levels = []
    row_labels: list = []
    prev_kv = None
    for lvl, (a, d) in enumerate(zip(arrays, ds)):
        if lvl == 0:
            row_labels = [(i, x) for i in range(a.k) for x in range(a.v)]
        else:
            pk, pv = prev_kv
            row_labels = list(row_labels) + [
                (i, x)
                for i in range(a.k)
                for x in range(a.v)
                if not (i < pk and x < pv)
            ]
        pos = {lbl: r for r, lbl in enumerate(row_labels)}
        rows = [0] * len(row_labels)
        for j in range(a.n):
            bit = 1 << j
            for i in range(a.k):
                rows[pos[(i, int(a.cells[j, i]))]] |= bit
        matrix = IncidenceMatrix(
            len(row_labels),
            a.n,
            tuple(rows),
            d_claimed=d,
            row_labels=list(row_labels),
            col_labels=list(range(a.n)),
            provenance={
                "construction": "pa_one_hot",
                "blocks": a.k,
                "block_size": a.v,
                "strength": a.strength,
            },
        )
        levels.append(
            SequenceLevel(
                LevelParams(i=lvl, q=a.v, k=None, d=d, t=a.k * a.v, n=a.n),
                matrix=matrix,
            )
        )
        prev_kv = (a.k, a.v)
    return EmbeddingSequence(kind="design", levels=levels)

"""Families of cover-free matrices that nest as top-left blocks.

Grow a matrix by squaring the field order: rows and columns of the smaller
matrix are listed first (in the smaller matrix's own order), so each level is
literally the top-left corner of the next.  Because subfield elements keep
their indices in the tower and polynomial evaluation commutes with the
embedding, the shared block has identical entries at every level.

Row order of a grown level:

1. the previous level's rows, in the previous level's order;
2. every remaining row (point pair (x_i, x_j) with x_i among the first b
   block elements), in ascending (i, j) order.

Column order: the previous level's polynomials (same coefficient digits,
re-encoded in the larger field), then all remaining polynomials ascending by
canonical index.  Both orders are fixed so outputs are byte-reproducible.

Schedules may raise d (more defectives identifiable) and/or k (more columns
per row) as the field grows, subject to per-level feasibility
``q**(2**i) >= d_i*k_i + 1``.  A constant (k, d) schedule with a fixed block
prefix yields a monotone family: every new-row/old-column entry is zero,
since old polynomials evaluate into the old subfield.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .cff import (
    DEFAULT_MAX_CELLS,
    DEFAULT_MAX_COLUMNS,
    IncidenceMatrix,
)
from .errors import (
    CffkitError,
    FieldTooLarge,
    IndexOutOfRange,
    MatrixTooLarge,
    ParamViolation,
)
from .fields import FieldLevel, _digits, _undigits, field_extend


@dataclass(frozen=True)
class LevelParams:
    """Exact parameters of one family level (arbitrary precision)."""

    i: int
    d: int
    t: int
    n: int
    q: int | None = None
    k: int | None = None

    def as_dict(self) -> dict:
        return {"i": self.i, "q": self.q, "k": self.k, "d": self.d, "t": self.t, "n": self.n}


@dataclass
class SequenceLevel:
    params: LevelParams
    matrix: IncidenceMatrix | None = None
    row_perm: list[int] | None = None
    col_perm: list[int] | None = None


@dataclass
class Violation:
    """First structural clause a family check found broken."""

    clause: str
    level: int | None = None
    detail: dict = dc_field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"clause": self.clause}
        if self.level is not None:
            out["level"] = self.level
        out.update(self.detail)
        return out


@dataclass
class EmbeddingSequence:
    kind: str
    levels: list[SequenceLevel]
    base_field: FieldLevel | None = None
    fields: list[FieldLevel | None] | None = None

    def __len__(self):
        return len(self.levels)

    def matrices(self) -> list[IncidenceMatrix | None]:
        return [lv.matrix for lv in self.levels]

    def _row_rect(self, level: int) -> tuple[int, int]:
        """(b, q): this level's rows are the pairs i < b, j < q."""
        p = self.levels[level].params
        if p.q is None or p.t % p.q:
            raise CffkitError("level lacks (blocks x alphabet) row structure")
        return p.t // p.q, p.q

    def row_position(self, level: int, i: int, j: int) -> int:
        """Position of row (i, j) in the level's embedding row order."""
        b, q = self._row_rect(level)
        if not (0 <= i < b and 0 <= j < q):
            raise IndexOutOfRange(f"row ({i}, {j}) outside {b}x{q} rectangle")
        if level == 0:
            return i * q + j
        b0, q0 = self._row_rect(level - 1)
        if i < b0 and j < q0:
            return self.row_position(level - 1, i, j)
        # rank of (i, j) among this level's new rows, (i, j)-ascending
        if i <= b0:
            rank = i * (q - q0)
        else:
            rank = b0 * (q - q0) + (i - b0) * q
        rank += (j - q0) if i < b0 else j
        return self.levels[level - 1].params.t + rank

    def column_for_poly(self, level: int, poly_index: int) -> int:
        """Column bitmask of one polynomial, computed on demand.

        Available whenever the level's field fits the materialization bound,
        even when the full matrix does not; the bit for row (i, j) sits at
        :meth:`row_position`.
        """
        params = self.levels[level].params
        if params.k is None:
            raise CffkitError("level is not polynomial-indexed")
        f = self.fields[level] if self.fields else None
        if f is None:
            raise FieldTooLarge("field for this level was not materialized")
        if not 0 <= poly_index < params.n:
            raise IndexOutOfRange(f"polynomial index {poly_index} outside [0, {params.n})")
        coeffs = _digits(poly_index, params.q, params.k + 1)
        b = params.t // params.q
        mask = 0
        for i in range(b):
            acc = 0
            for cf in reversed(coeffs):
                acc = f.add(f.mul(acc, i), cf)
            mask |= 1 << self.row_position(level, i, acc)
        return mask

    def manifest(self, matrix_files: list[str | None] | None = None) -> dict:
        out: dict = {"kind": self.kind, "levels": []}
        if self.base_field is not None:
            out["base_field"] = self.base_field.descriptor()
        for idx, lv in enumerate(self.levels):
            entry = lv.params.as_dict()
            if matrix_files and idx < len(matrix_files) and matrix_files[idx]:
                entry["matrix_file"] = matrix_files[idx]
            if lv.row_perm is not None:
                entry["row_perm"] = list(lv.row_perm)
            if lv.col_perm is not None:
                entry["col_perm"] = list(lv.col_perm)
            out["levels"].append(entry)
        return out

    @classmethod
    def from_matrices(cls, matrices, ds=None, kind="external") -> "EmbeddingSequence":
        """Wrap plain matrices (d taken from each claim unless given)."""
        levels = []
        for i, m in enumerate(matrices):
            d = ds[i] if ds is not None else m.d_claimed
            levels.append(SequenceLevel(LevelParams(i=i, d=d, t=m.t, n=m.n), matrix=m))
        return cls(kind=kind, levels=levels)


def _lift_poly_index(c: int, q_lo: int, k_lo: int, q_hi: int, k_hi: int) -> int:
    ds = _digits(c, q_lo, k_lo + 1) + [0] * (k_hi - k_lo)
    return _undigits(ds, q_hi)


def _materialize_rows(f: FieldLevel, k: int, col_polys, row_labels) -> tuple[int, ...]:
    """Bit rows for the given column polynomials over the given row labels."""
    row_pos = {lbl: r for r, lbl in enumerate(row_labels)}
    points = sorted({i for i, _ in row_labels})
    q = f.q
    rows = [0] * len(row_labels)
    for pos, cidx in enumerate(col_polys):
        coeffs = _digits(cidx, q, k + 1)
        bit = 1 << pos
        for i in points:
            acc = 0
            for cf in reversed(coeffs):
                acc = f.add(f.mul(acc, i), cf)
            r = row_pos.get((i, acc))
            if r is not None:
                rows[r] |= bit
    return tuple(rows)


def reorder_embedding(
    base: FieldLevel,
    k: int,
    d: int,
    k2: int,
    d2: int,
    max_columns: int = DEFAULT_MAX_COLUMNS,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> tuple[IncidenceMatrix, list[int], list[int]]:
    """One growth step: the block-restricted matrix over the squared field,
    re-ordered so its top-left corner is the base-field matrix.

    Returns (matrix, row_perm, col_perm) where perm[pos] is the canonical
    position (block-major row index, resp. polynomial index) occupying
    embedding position pos.
    """
    q = base.q
    if q < d * k + 1:
        raise ParamViolation(f"base level needs q >= d*k+1, got q={q}, d={d}, k={k}")
    if k2 < k or d2 < d:
        raise ParamViolation("parameters may only grow")
    q2 = q * q
    if q2 < d2 * k2 + 1:
        raise ParamViolation(f"grown level needs q^2 >= d'*k'+1, got {q2} < {d2 * k2 + 1}")
    ext = field_extend(base)
    b, b2 = d * k + 1, d2 * k2 + 1
    row_labels = [(i, j) for i in range(b) for j in range(q)]
    row_labels += [
        (i, j)
        for i in range(b2)
        for j in range(q2)
        if not (i < b and j < q)
    ]
    n_lo = q ** (k + 1)
    n2 = q2 ** (k2 + 1)
    if n2 > max_columns:
        raise MatrixTooLarge(f"{n2} columns exceed limit {max_columns}")
    if len(row_labels) * n2 > max_cells:
        raise MatrixTooLarge(f"{len(row_labels)}x{n2} cells exceed limit {max_cells}")
    col_polys = [_lift_poly_index(c, q, k, q2, k2) for c in range(n_lo)]
    seen = set(col_polys)
    col_polys += [c for c in range(n2) if c not in seen]
    rows = _materialize_rows(ext, k2, col_polys, row_labels)
    matrix = IncidenceMatrix(
        len(row_labels),
        n2,
        rows,
        d_claimed=d2,
        row_labels=list(row_labels),
        col_labels=list(col_polys),
        provenance={
            "construction": "embedded",
            "q": q2,
            "k": k2,
            "blocks": b2,
            "base": {"q": q, "k": k, "d": d},
            "field": ext.descriptor(),
        },
    )
    row_perm = [i * q2 + j for i, j in row_labels]
    return matrix, row_perm, list(col_polys)


def build_embedding_family(
    base: FieldLevel,
    schedule,
    kind: str = "embedding",
    max_columns: int = DEFAULT_MAX_COLUMNS,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> EmbeddingSequence:
    """Chain of nested cover-free matrices following a (k_i, d_i) schedule.

    Level i lives over the field of order q**(2**i) and keeps the first
    d_i*k_i + 1 row blocks.  Levels whose matrix would blow the size limits
    are kept as exact parameters only; their columns stay reachable through
    :meth:`EmbeddingSequence.column_for_poly` while the tower field itself
    is materializable.
    """
    schedule = [(int(k), int(d)) for k, d in schedule]
    if not schedule:
        raise ParamViolation("schedule must contain at least one (k, d) level")
    q0 = base.q
    qi = q0
    prev = None
    for i, (k, d) in enumerate(schedule):
        if k < 1 or d < 1:
            raise ParamViolation(f"level {i}: k and d must be >= 1")
        if prev is not None and (k < prev[0] or d < prev[1]):
            raise ParamViolation(f"level {i}: k and d may not decrease")
        if qi < d * k + 1:
            raise ParamViolation(
                f"level {i}: field order {qi} below d*k+1 = {d * k + 1}"
            )
        prev = (k, d)
        qi *= qi

    fields: list[FieldLevel | None] = [base]
    cur: FieldLevel | None = base
    for _ in range(len(schedule) - 1):
        if cur is not None:
            try:
                cur = field_extend(cur)
            except FieldTooLarge:
                cur = None
        fields.append(cur)

    levels: list[SequenceLevel] = []
    row_labels: list | None = None
    col_polys: list | None = None
    qi = q0
    q_prev = k_prev = b_prev = None
    for i, (k, d) in enumerate(schedule):
        b = d * k + 1
        t = b * qi
        n = qi ** (k + 1)
        params = LevelParams(i=i, q=qi, k=k, d=d, t=t, n=n)
        f = fields[i]
        can_materialize = (
            f is not None and n <= max_columns and t * n <= max_cells
        )
        if can_materialize:
            if i == 0:
                row_labels = [(x, j) for x in range(b) for j in range(qi)]
                col_polys = list(range(n))
            else:
                row_labels = list(row_labels) + [
                    (x, j)
                    for x in range(b)
                    for j in range(qi)
                    if not (x < b_prev and j < q_prev)
                ]
                lifted = [_lift_poly_index(c, q_prev, k_prev, qi, k) for c in col_polys]
                seen = set(lifted)
                col_polys = lifted + [c for c in range(n) if c not in seen]
            rows = _materialize_rows(f, k, col_polys, row_labels)
            construction = "polynomial" if i == 0 else "embedded"
            matrix = IncidenceMatrix(
                t,
                n,
                rows,
                d_claimed=d,
                row_labels=list(row_labels),
                col_labels=list(col_polys),
                provenance={
                    "construction": construction,
                    "q": qi,
                    "k": k,
                    "blocks": b,
                    "field": f.descriptor(),
                },
            )
            levels.append(
                SequenceLevel(
                    params,
                    matrix=matrix,
                    row_perm=[x * qi + j for x, j in row_labels],
                    col_perm=list(col_polys),
                )
            )
        else:
            # params-only level; columns stay monotone so later levels cannot
            # re-materialize either
            row_labels = col_polys = None
            levels.append(SequenceLevel(params))
        q_prev, k_prev, b_prev = qi, k, b
        qi *= qi
    return EmbeddingSequence(kind=kind, levels=levels, base_field=base, fields=fields)


def build_monotone_family(
    base: FieldLevel,
    k: int,
    d: int,
    levels: int,
    max_columns: int = DEFAULT_MAX_COLUMNS,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> EmbeddingSequence:
    """Constant-parameter family whose new-row/old-column block is all zeros.

    Level i keeps the d*k+1 base-field blocks and all degree <= k polynomials
    over the level field, so t_i = (d*k+1) * q**(2**i) and
    n_i = q**(2**i * (k+1)).  Old columns evaluate inside the old subfield,
    which forces the zero block and makes appended tests involve new columns
    only.
    """
    if levels < 1:
        raise ParamViolation("need at least one level")
    return build_embedding_family(
        base,
        [(k, d)] * levels,
        kind="monotone",
        max_columns=max_columns,
        max_cells=max_cells,
    )


# --- schedules ---


def schedule_priority_d(q: int, k: int, d0: int, levels: int) -> list[tuple[int, int]]:
    """Fixed k; d jumps to its per-level maximum ceil(q**(2**i)/k) - 1."""
    if levels < 1 or d0 < 1 or k < 1:
        raise ParamViolation("need levels >= 1, d0 >= 1, k >= 1")
    if q <= d0 * k:
        raise ParamViolation(f"need q > d0*k, got q={q}, d0*k={d0 * k}")
    out = [(k, d0)]
    qi = q
    for _ in range(1, levels):
        qi *= qi
        out.append((k, -(-qi // k) - 1))
    return out


def schedule_priority_ratio(q: int, d: int, k0: int, levels: int) -> list[tuple[int, int]]:
    """Fixed d; k jumps to its per-level maximum ceil(q**(2**i)/d) - 1."""
    if levels < 1 or k0 < 1 or d < 1:
        raise ParamViolation("need levels >= 1, k0 >= 1, d >= 1")
    if q <= d * k0:
        raise ParamViolation(f"need q > d*k0, got q={q}, d*k0={d * k0}")
    out = [(k0, d)]
    qi = q
    for _ in range(1, levels):
        qi *= qi
        out.append((-(-qi // d) - 1, d))
    return out


# --- structure checks ---


def _first_diff_col(a: int, b: int) -> int:
    return ((a ^ b) & -(a ^ b)).bit_length() - 1


def _top_left_mismatch(lo: IncidenceMatrix, hi: IncidenceMatrix):
    mask = (1 << lo.n) - 1
    for i in range(lo.t):
        got = hi.rows[i] & mask
        if got != lo.rows[i]:
            return i, _first_diff_col(got, lo.rows[i])
    return None


def check_embedding_family(seq) -> Violation | None:
    """Monotone dimensions and d, plus exact top-left nesting per pair."""
    if isinstance(seq, EmbeddingSequence):
        levels = seq.levels
    else:
        levels = EmbeddingSequence.from_matrices(list(seq)).levels
    if not levels:
        return Violation("empty_sequence")
    for lo, hi in zip(levels, levels[1:]):
        lvl = hi.params.i
        if hi.params.t < lo.params.t:
            return Violation("rows_decrease", lvl, {"low": lo.params.t, "high": hi.params.t})
        if hi.params.n < lo.params.n:
            return Violation("cols_decrease", lvl, {"low": lo.params.n, "high": hi.params.n})
        if hi.params.d < lo.params.d:
            return Violation("d_decrease", lvl, {"low": lo.params.d, "high": hi.params.d})
        if lo.matrix is not None and hi.matrix is not None:
            bad = _top_left_mismatch(lo.matrix, hi.matrix)
            if bad is not None:
                return Violation("submatrix_mismatch", lvl, {"row": bad[0], "col": bad[1]})
    return None


def check_monotone(lo: IncidenceMatrix, hi: IncidenceMatrix) -> Violation | None:
    """Top-left equality plus an all-zero new-row/old-column block."""
    if hi.t < lo.t or hi.n < lo.n:
        return Violation("dims_not_nested", detail={"low": (lo.t, lo.n), "high": (hi.t, hi.n)})
    bad = _top_left_mismatch(lo, hi)
    if bad is not None:
        return Violation("submatrix_mismatch", detail={"row": bad[0], "col": bad[1]})
    mask = (1 << lo.n) - 1
    for i in range(lo.t, hi.t):
        z = hi.rows[i] & mask
        if z:
            return Violation(
                "z_nonzero", detail={"row": i, "col": (z & -z).bit_length() - 1}
            )
    return None


def check_nested(lo: IncidenceMatrix, hi: IncidenceMatrix) -> Violation | None:
    """Top-left equality; every new row restricted to old columns must repeat
    an old row or be constant (all zeros / all ones)."""
    if hi.t < lo.t or hi.n < lo.n:
        return Violation("dims_not_nested", detail={"low": (lo.t, lo.n), "high": (hi.t, hi.n)})
    bad = _top_left_mismatch(lo, hi)
    if bad is not None:
        return Violation("submatrix_mismatch", detail={"row": bad[0], "col": bad[1]})
    mask = (1 << lo.n) - 1
    allowed = set(lo.rows) | {0, mask}
    for i in range(lo.t, hi.t):
        if hi.rows[i] & mask not in allowed:
            return Violation("z_row_novel", detail={"row": i})
    return None

"""Exact parameter arithmetic, compression ratios, and built-in tables.

Everything here is integer or Decimal arithmetic; no matrix is ever
materialized.  Ratios keep their exact numerator/denominator and render as
fixed point below 10**15, switching to scientific "a.bc x 10^E" above, where
the mantissa/exponent split is computed at high Decimal precision so that
astronomically large parameters (or their logs) stay trustworthy.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext

from .embedding import schedule_priority_d, schedule_priority_ratio
from .errors import DUndefined, ParamViolation, UnknownTable
from .fields import prime_power

#: Ratios at or above this magnitude render in scientific notation.
SCIENTIFIC_THRESHOLD = 10**15

TABLE_NAMES = ("k2", "k3", "d2", "d3", "transition")


@dataclass(frozen=True)
class BigRatio:
    """Exact quotient n/t with a table-friendly decimal rendering."""

    n: int
    t: int

    def __post_init__(self):
        if self.t < 1:
            raise ParamViolation("denominator t must be >= 1")
        if self.n < 0:
            raise ParamViolation("numerator n must be >= 0")

    def mantissa_exponent(self) -> tuple[Decimal, int]:
        """(m, e) with n/t = m * 10**e and 1 <= m < 10."""
        with localcontext() as ctx:
            ctx.prec = 40
            r = Decimal(self.n) / Decimal(self.t)
            e = r.adjusted()
            return r.scaleb(-e), e

    def log10(self) -> Decimal:
        mant, exp = self.mantissa_exponent()
        with localcontext() as ctx:
            ctx.prec = 40
            return mant.log10() + exp

    @property
    def value(self) -> str:
        if self.n < self.t * SCIENTIFIC_THRESHOLD:
            return self._fixed()
        return self._scientific()

    def _fixed(self) -> str:
        n, t = self.n, self.t
        # exact short decimals print minimally: 16, 3.2, 2621.44
        if n % t == 0:
            return str(n // t)
        if (10 * n) % t == 0:
            return _place(10 * n // t, 1)
        if (100 * n) % t == 0:
            return _place(100 * n // t, 2)
        with localcontext() as ctx:
            ctx.prec = 40
            r = Decimal(n) / Decimal(t)
            return str(r.quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))

    def _scientific(self) -> str:
        mant, exp = self.mantissa_exponent()
        m = mant.quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN)
        if m >= 10:  # rounding crossed a decade
            m = (m / 10).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN)
            exp += 1
        return f"{m} × 10^{exp}"

    def __float__(self):
        mant, exp = self.mantissa_exponent()
        return float(mant) * 10.0**exp

    def __str__(self):
        return self.value


def _place(scaled: int, places: int) -> str:
    digits = str(scaled)
    if len(digits) <= places:
        digits = "0" * (places + 1 - len(digits)) + digits
    return digits[:-places] + "." + digits[-places:]


def level_params(q: int, k: int, d: int, i: int) -> tuple[int, int]:
    """Exact (t, n) of family level i: t = (dk+1)*q**(2**i), n = q**(2**i*(k+1))."""
    if prime_power(q) is None:
        raise ParamViolation(f"q={q} is not a prime power")
    if k < 1 or d < 1 or i < 0:
        raise ParamViolation("need k >= 1, d >= 1, i >= 0")
    qi = q ** (2**i)
    if d * k + 1 > qi:
        raise ParamViolation(f"level {i}: d*k+1 = {d * k + 1} exceeds field order {qi}")
    return (d * k + 1) * qi, qi ** (k + 1)


def compression_ratio(t: int, n: int) -> BigRatio:
    """How many items one test pays for: n/t."""
    return BigRatio(n=n, t=t)


def info_bound(n: int, d: int, base: int = 2) -> Decimal:
    """Counting bound on the ratio: n / ((d**2 / log d) * log n), logs base 2.

    Singular at d = 1 (log d = 0), hence the d >= 2 requirement.
    """
    if d < 2:
        raise DUndefined("bound needs d >= 2 (log d vanishes at d = 1)")
    if n < 2:
        raise ParamViolation("need n >= 2")
    with localcontext() as ctx:
        ctx.prec = 40
        ln_base = Decimal(base).ln()
        log_d = Decimal(d).ln() / ln_base
        log_n = Decimal(n).ln() / ln_base
        return Decimal(n) * log_d / (Decimal(d) ** 2 * log_n)


#: Integers at or above this render as a power (the decimal expansion of the
#: largest table entries runs to six figures of digits).
_POWER_FORM_THRESHOLD = 10**16


@dataclass(frozen=True)
class TableRow:
    i: int
    q: int
    k: int
    d: int
    n: int
    t: int
    ratio: BigRatio

    @property
    def n_str(self) -> str:
        if self.n < _POWER_FORM_THRESHOLD:
            return str(self.n)
        return f"{self.q}^{self.k + 1}"  # n is q**(k+1) by construction


@dataclass
class RatioTable:
    name: str
    rows: list[TableRow]

    HEADER = ("i", "q", "k", "d", "n", "t", "ratio")

    def to_csv(self) -> str:
        lines = [",".join(self.HEADER)]
        for r in self.rows:
            lines.append(f"{r.i},{r.q},{r.k},{r.d},{r.n_str},{r.t},{r.ratio.value}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        cells = [list(self.HEADER)]
        for r in self.rows:
            cells.append([str(r.i), str(r.q), str(r.k), str(r.d), r.n_str, str(r.t), r.ratio.value])
        widths = [max(len(row[c]) for row in cells) for c in range(len(self.HEADER))]
        lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells]
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "rows": [
                {
                    "i": r.i,
                    "q": r.q,
                    "k": r.k,
                    "d": r.d,
                    "n": r.n if r.n < _POWER_FORM_THRESHOLD else r.n_str,
                    "t": r.t,
                    "ratio": r.ratio.value,
                }
                for r in self.rows
            ],
        }


def _schedule_rows(q0: int, schedule) -> list[TableRow]:
    rows = []
    qi = q0
    for i, (k, d) in enumerate(schedule):
        t, n = level_params(q0, k, d, i)
        rows.append(TableRow(i=i, q=qi, k=k, d=d, n=n, t=t, ratio=BigRatio(n=n, t=t)))
        qi *= qi
    return rows


def _transition_rows() -> list[TableRow]:
    """Doubling n from 2**7 to 2**27 with d = floor(log4 n).

    (q, k) steps through (16, k) then (256, k) with k monotone in 1..3,
    taking the first pair satisfying q**(k+1) >= n and q >= d*k + 1.
    """
    qs = (16, 256)
    q_idx = 0
    k_prev = 1
    rows = []
    for i, e in enumerate(range(7, 28)):
        n = 1 << e
        d = e // 2
        chosen = None
        idx = q_idx
        while idx < len(qs) and chosen is None:
            q = qs[idx]
            for k in range(k_prev, 4):
                if q ** (k + 1) >= n and q >= d * k + 1:
                    chosen = (q, k)
                    break
            if chosen is None:
                idx += 1
        if chosen is None:
            raise ParamViolation(f"no (q, k) accommodates n={n}, d={d}")
        q, k = chosen
        q_idx, k_prev = idx, k
        t = (d * k + 1) * q
        rows.append(TableRow(i=i + 1, q=q, k=k, d=d, n=n, t=t, ratio=BigRatio(n=n, t=t)))
    return rows


def emit_table(name: str) -> RatioTable:
    """Built-in parameter tables.

    k2/k3: growing d with fixed k = 2 or 3;  d2/d3: growing k with fixed
    d = 2 or 3 (all four over the tower 4, 16, 256, 65536);  transition:
    the d = floor(log4 n) schedule across doubling n.
    """
    if name == "k2":
        rows = _schedule_rows(4, schedule_priority_d(4, 2, 1, 4))
    elif name == "k3":
        rows = _schedule_rows(4, schedule_priority_d(4, 3, 1, 4))
    elif name == "d2":
        rows = _schedule_rows(4, schedule_priority_ratio(4, 2, 1, 4))
    elif name == "d3":
        rows = _schedule_rows(4, schedule_priority_ratio(4, 3, 1, 4))
    elif name == "transition":
        rows = _transition_rows()
    else:
        raise UnknownTable(f"no table {name!r}; pick one of {', '.join(TABLE_NAMES)}")
    return RatioTable(name=name, rows=rows)


def actual_ratio_with_partial_columns(q: int, k: int, d: int, n_used: int) -> BigRatio:
    """Ratio when only n_used of the q**(k+1) columns are populated."""
    if n_used < 0 or n_used > q ** (k + 1):
        raise ParamViolation(f"n_used must lie in [0, q**(k+1) = {q ** (k + 1)}]")
    if d * k + 1 > q:
        raise ParamViolation(f"d*k+1 = {d * k + 1} exceeds q = {q}")
    return BigRatio(n=n_used, t=(d * k + 1) * q)

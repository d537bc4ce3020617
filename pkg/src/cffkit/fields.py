"""Exact arithmetic for prime-power fields and their iterated quadratic extensions.

A tower starts at GF(p**m) (level 0) and grows by quadratic steps, so level i
has order ``(p**m) ** (2**i)``.  Every element is addressed by a canonical
index in ``[0, order)``:

* index 0 is the additive identity, index 1 the multiplicative identity;
* at level 0 the index is the coefficient vector over GF(p) read as a
  little-endian base-p number;
* at level i >= 1 an element is a pair (a, b) of level i-1 elements standing
  for ``a + b*y``, with index ``a + b * order(i-1)``.

The pair encoding makes the first ``order(i-1)`` indices of level i exactly
the embedded copy of level i-1, and the embedding is index preserving.  The
prefix alignment is what the matrix constructions elsewhere in the package
rely on, so it is fixed here once and checked by the test suite.

Moduli are chosen deterministically (first irreducible in canonical scan
order), which makes every tower bit-reproducible across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegreeZero,
    DivisionByZero,
    FieldTooLarge,
    LevelMismatch,
    NotPrime,
)

#: Largest field order materialized by default.  Arithmetic is computed on
#: demand, so the bound only guards against accidentally huge towers.
DEFAULT_MAX_ORDER = 1 << 20

#: Orders up to this bound get full add/mul lookup tables, built lazily on
#: first use.  Exhaustive verification leans on these heavily.
_TABLE_MAX_ORDER = 256


def is_prime(n: int) -> bool:
    """Trial-division primality check; inputs here are always small."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, m) with p prime and p**m == q, or None if q is not a prime power."""
    if q < 2:
        return None
    p = q
    for f in range(2, q + 1):
        if f * f > q:
            break
        if q % f == 0:
            p = f
            break
    m = 0
    r = q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        return None
    return (p, m)


def _digits(x: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        out.append(x % base)
        x //= base
    return out


def _undigits(ds, base: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * base + d
    return x


# --- polynomial helpers over GF(p), coefficients little-endian int lists ---

def _poly_eval_modp(coeffs, x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _poly_rem_modp(f, g, p: int):
    """Remainder of f modulo monic-leading g over GF(p)."""
    r = list(f)
    dg = len(g) - 1
    lead_inv = pow(g[-1], p - 2, p) if g[-1] != 1 else 1
    while len(r) - 1 >= dg and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dg:
            break
        c = (r[-1] * lead_inv) % p
        shift = len(r) - 1 - dg
        for i, gc in enumerate(g):
            r[shift + i] = (r[shift + i] - c * gc) % p
    while r and r[-1] == 0:
        r.pop()
    return r


def _irreducible_over_prime(coeffs, p: int) -> bool:
    """Full factor-free check for a monic polynomial over GF(p).

    Degree 1 is always irreducible; for degree 2 and 3 root absence is
    sufficient; beyond that we also trial-divide by every monic polynomial
    of degree up to deg/2 (sizes here are small by construction).
    """
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    for x in range(p):
        if _poly_eval_modp(coeffs, x, p) == 0:
            return False
    if deg <= 3:
        return True
    for d in range(2, deg // 2 + 1):
        for t in range(p**d):
            g = _digits(t, p, d) + [1]
            if not _poly_rem_modp(coeffs, g, p):
                return False
    return True


class FieldLevel:
    """One level of an extension tower; arithmetic works on canonical indices.

    Construction is single-threaded; afterwards instances never change
    observably and concurrent reads are safe (small orders cache their
    operation tables on first use, idempotently).  Use :func:`field_create`
    and :func:`field_extend` instead of the constructor.
    """

    __slots__ = (
        "p", "m", "q", "level", "base", "modulus", "max_order", "_sig",
        "_add_table", "_mul_table", "_neg_table", "_inv_table",
    )

    def __init__(self, p, m, q, level, base, modulus, max_order):
        self.p = p
        self.m = m
        self.q = q
        self.level = level
        self.base = base
        self.modulus = tuple(modulus)
        self.max_order = max_order
        base_sig = base._sig if base is not None else None
        self._sig = (p, m, level, self.modulus, base_sig)
        self._add_table = None
        self._mul_table = None
        self._neg_table = None
        self._inv_table = None

    # --- identity / comparison ---

    def __eq__(self, other):
        return isinstance(other, FieldLevel) and self._sig == other._sig

    def __hash__(self):
        return hash(self._sig)

    def __repr__(self):
        return f"FieldLevel(GF({self.p}^{self.m}), order={self.q}, level={self.level})"

    def extends(self, other: "FieldLevel") -> bool:
        """True if `other` appears in this level's tower chain (or equals it)."""
        node = self
        while node is not None:
            if node == other:
                return True
            node = node.base
        return False

    # --- canonical coordinates ---

    def coeffs(self, a: int):
        """Coefficient tuple of element index `a` over the level below.

        Level 0 returns the GF(p) digit vector of length m; higher levels
        return the pair (lo, hi) of subfield indices for ``lo + hi*y``.
        """
        if self.base is None:
            return tuple(_digits(a, self.p, self.m))
        return (a % self.base.q, a // self.base.q)

    def from_coeffs(self, cs) -> int:
        if self.base is None:
            return _undigits(list(cs), self.p)
        lo, hi = cs
        return lo + hi * self.base.q

    def element(self, a: int) -> "FieldElement":
        if not 0 <= a < self.q:
            raise IndexError(f"element index {a} outside [0, {self.q})")
        return FieldElement(self, a)

    def elements(self):
        """All elements in canonical order (0 first, then 1, then the rest)."""
        return (FieldElement(self, a) for a in range(self.q))

    def __call__(self, a: int) -> "FieldElement":
        return self.element(a)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    # --- arithmetic on canonical indices ---

    def _build_tables(self):
        q = self.q
        self._neg_table = [self._raw_neg(a) for a in range(q)]
        self._add_table = [self._raw_add(a, b) for a in range(q) for b in range(q)]
        self._mul_table = [self._raw_mul(a, b) for a in range(q) for b in range(q)]
        self._inv_table = [0] + [self._raw_inv(a) for a in range(1, q)]

    def add(self, a: int, b: int) -> int:
        t = self._add_table
        if t is None:
            if self.q > _TABLE_MAX_ORDER:
                return self._raw_add(a, b)
            self._build_tables()
            t = self._add_table
        return t[a * self.q + b]

    def neg(self, a: int) -> int:
        t = self._neg_table
        if t is None:
            if self.q > _TABLE_MAX_ORDER:
                return self._raw_neg(a)
            self._build_tables()
            t = self._neg_table
        return t[a]

    def mul(self, a: int, b: int) -> int:
        t = self._mul_table
        if t is None:
            if self.q > _TABLE_MAX_ORDER:
                return self._raw_mul(a, b)
            self._build_tables()
            t = self._mul_table
        return t[a * self.q + b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        t = self._inv_table
        if t is None:
            if self.q > _TABLE_MAX_ORDER:
                return self._raw_inv(a)
            self._build_tables()
            t = self._inv_table
        return t[a]

    def _raw_add(self, a: int, b: int) -> int:
        if self.base is None:
            p = self.p
            if self.m == 1:
                return (a + b) % p
            out = 0
            mult = 1
            while a or b:
                out += ((a + b) % p) * mult
                a //= p
                b //= p
                mult *= p
            return out
        qb = self.base.q
        return self.base.add(a % qb, b % qb) + self.base.add(a // qb, b // qb) * qb

    def _raw_neg(self, a: int) -> int:
        if self.base is None:
            p = self.p
            if self.m == 1:
                return (-a) % p
            out = 0
            mult = 1
            while a:
                out += ((-a) % p) * mult
                a //= p
                mult *= p
            return out
        qb = self.base.q
        return self.base.neg(a % qb) + self.base.neg(a // qb) * qb

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _raw_mul(self, a: int, b: int) -> int:
        if self.base is None:
            p = self.p
            if self.m == 1:
                return (a * b) % p
            m = self.m
            da = _digits(a, p, m)
            db = _digits(b, p, m)
            prod = [0] * (2 * m - 1)
            for i, ca in enumerate(da):
                if ca:
                    for j, cb in enumerate(db):
                        prod[i + j] = (prod[i + j] + ca * cb) % p
            # reduce modulo the monic level-0 modulus
            mod = self.modulus
            for i in range(2 * m - 2, m - 1, -1):
                c = prod[i]
                if c:
                    prod[i] = 0
                    for j in range(m):
                        prod[i - m + j] = (prod[i - m + j] - c * mod[j]) % p
            return _undigits(prod[:m], p)
        B = self.base
        qb = B.q
        a0, a1 = a % qb, a // qb
        b0, b1 = b % qb, b // qb
        if a1 == 0 and b1 == 0:
            return B.mul(a0, b0)
        # y**2 = -beta*y - gamma for modulus y**2 + beta*y + gamma
        gamma, beta = self.modulus[0], self.modulus[1]
        hi = B.mul(a1, b1)
        c0 = B.sub(B.mul(a0, b0), B.mul(gamma, hi))
        c1 = B.sub(B.add(B.mul(a0, b1), B.mul(a1, b0)), B.mul(beta, hi))
        return c0 + c1 * qb

    def _raw_inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        if self.base is None:
            if self.m == 1:
                return pow(a, self.p - 2, self.p)
            return self.pow(a, self.q - 2)
        B = self.base
        qb = B.q
        a0, a1 = a % qb, a // qb
        if a1 == 0:
            return B.inv(a0)
        # norm (a0 + a1*y)(a0 + a1*conj(y)) = a0^2 - beta*a0*a1 + gamma*a1^2
        gamma, beta = self.modulus[0], self.modulus[1]
        n = B.add(
            B.sub(B.mul(a0, a0), B.mul(beta, B.mul(a0, a1))),
            B.mul(gamma, B.mul(a1, a1)),
        )
        ninv = B.inv(n)
        c0 = B.mul(B.sub(a0, B.mul(beta, a1)), ninv)
        c1 = B.neg(B.mul(a1, ninv))
        return c0 + c1 * qb

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # --- serialization ---

    def descriptor(self) -> dict:
        """JSON-ready description: enough to rebuild the identical tower."""
        chain = []
        node = self
        while node is not None:
            chain.append(list(node.modulus))
            node = node.base
        chain.reverse()
        return {"p": self.p, "m": self.m, "level": self.level, "moduli": chain}

    @classmethod
    def from_descriptor(cls, desc: dict, max_order: int = DEFAULT_MAX_ORDER) -> "FieldLevel":
        level = desc["level"]
        m0 = desc["m"] >> level
        if m0 << level != desc["m"]:
            raise LevelMismatch("descriptor degree inconsistent with level")
        field = field_create(desc["p"], m0, max_order=max_order)
        for _ in range(level):
            field = field_extend(field)
        rebuilt = field.descriptor()["moduli"]
        if rebuilt != [list(mod) for mod in desc["moduli"]]:
            raise LevelMismatch("descriptor moduli do not match deterministic tower")
        return field


@dataclass(frozen=True)
class FieldElement:
    """Element wrapper with operator overloading; `index` is canonical."""

    field: FieldLevel
    index: int

    def _peer(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise LevelMismatch("operands belong to different field levels")
            return other.index
        if isinstance(other, int):
            # prime fields reduce integers mod p; elsewhere an int must be a
            # valid canonical index
            if self.field.level == 0 and self.field.m == 1:
                return other % self.field.q
            if not 0 <= other < self.field.q:
                raise IndexError(f"index {other} outside [0, {self.field.q})")
            return other
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.index, self._peer(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.index, self._peer(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.index, self._peer(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.index, self._peer(other)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.index, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.index))

    @property
    def coeffs(self):
        return self.field.coeffs(self.index)

    def __int__(self):
        return self.index

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.index == other.index
        if isinstance(other, int):
            return self.index == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.index))

    def __repr__(self):
        return f"<{self.index} in GF({self.q_str()})>"

    def q_str(self) -> str:
        f = self.field
        return str(f.p) if f.m == 1 else f"{f.p}^{f.m}"


def field_create(p: int, m: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldLevel:
    """Level-0 field GF(p**m) with the first monic irreducible as modulus.

    The modulus scan runs over non-leading coefficient vectors in ascending
    canonical (little-endian base-p) order, so the result is deterministic.
    """
    if m < 1:
        raise DegreeZero("extension degree must be >= 1")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    q = p**m
    if q > max_order:
        raise FieldTooLarge(f"order {q} exceeds bound {max_order}")
    if m == 1:
        modulus = (0, 1)  # the polynomial x; never used for reduction
    else:
        modulus = None
        for t in range(q):
            cand = _digits(t, p, m) + [1]
            if _irreducible_over_prime(cand, p):
                modulus = tuple(cand)
                break
        assert modulus is not None, "no irreducible polynomial found (impossible)"
    return FieldLevel(p, m, q, 0, None, modulus, max_order)


def field_extend(field: FieldLevel, max_order: int | None = None) -> FieldLevel:
    """Quadratic extension: next tower level of order q**2.

    The modulus is the first monic quadratic ``y**2 + b*y + c`` without a
    root in `field`, scanning the constant term fastest.  The embedding
    ``a -> (a, 0)`` keeps every index, so the new field's first q indices
    are the old field.
    """
    limit = max_order if max_order is not None else field.max_order
    q = field.q
    q2 = q * q
    if q2 > limit:
        raise FieldTooLarge(f"order {q2} exceeds bound {limit}")
    modulus = None
    for idx in range(q2):
        c = idx % q
        b = idx // q
        for x in range(q):
            if field.add(field.add(field.mul(x, x), field.mul(b, x)), c) == 0:
                break
        else:
            modulus = (c, b, 1)
            break
    assert modulus is not None, "no irreducible quadratic found (impossible)"
    return FieldLevel(field.p, field.m * 2, q2, field.level + 1, field, modulus, limit)


@dataclass(frozen=True)
class DensePolynomial:
    """Polynomial over a tower level; `coeffs` is little-endian, trailing zeros allowed."""

    field: FieldLevel
    coeffs: tuple[int, ...]

    def __post_init__(self):
        for c in self.coeffs:
            if not 0 <= c < self.field.q:
                raise IndexError(f"coefficient index {c} outside field of order {self.field.q}")

    @classmethod
    def from_index(cls, field: FieldLevel, index: int, k: int) -> "DensePolynomial":
        """Polynomial number `index` among the q**(k+1) of degree <= k."""
        if not 0 <= index < field.q ** (k + 1):
            raise IndexError(f"polynomial index {index} outside [0, {field.q ** (k + 1)})")
        return cls(field, tuple(_digits(index, field.q, k + 1)))

    @property
    def canonical_index(self) -> int:
        return _undigits(list(self.coeffs), self.field.q)

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return 0

    def eval_index(self, x: int, field: FieldLevel | None = None) -> int:
        """Horner evaluation at element index `x`, optionally in an extension.

        Coefficient indices carry over unchanged because the tower embedding
        preserves indices; evaluating an embedded point in the extension
        therefore agrees with evaluating in the base field.
        """
        target = field if field is not None else self.field
        if not target.extends(self.field):
            raise LevelMismatch("evaluation field does not extend the coefficient field")
        acc = 0
        for c in reversed(self.coeffs):
            acc = target.add(target.mul(acc, x), c)
        return acc

    def eval(self, x: FieldElement) -> FieldElement:
        return FieldElement(x.field, self.eval_index(x.index, x.field))

    def __str__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                xs = "x" if i == 1 else f"x^{i}"
                terms.append(xs if c == 1 else f"{c}{xs}")
        return "+".join(terms) if terms else "0"

"""Arithmetic contexts for small finite fields of odd order.

Field elements are plain ints in ``range(q)``.  For q = p^e the base-p digits
of an element, most significant first, are the polynomial coefficients
(c_{e-1}, ..., c_0) of its representative in F_p[x] / (modulus); equivalently
the int is the polynomial evaluated at x = p.  For prime fields this is the
usual residue encoding, and the natural int order is the canonical element
order used everywhere for enumeration and tie-breaking.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import EvenCharacteristic, InadmissibleParams, NotPrime, ZeroVector

MAX_EXT_DEGREE = 4
MAX_ORDER = 2048

FieldElement = int


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise NotPrime(f"field order must be at least 2, got {q}")
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1 or not _is_prime(p):
                raise NotPrime(f"{q} is not a prime power")
            return p, e
    raise NotPrime(f"{q} is not a prime power")


def _poly_divmod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    # coefficients ascending; den must be monic
    num = list(num)
    dn = len(den) - 1
    quo = [0] * max(len(num) - dn, 0)
    for i in range(len(num) - dn - 1, -1, -1):
        c = num[i + dn] % p
        if c:
            quo[i] = c
            for k, dc in enumerate(den):
                num[i + k] = (num[i + k] - c * dc) % p
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quo, num


def _monic_polys(p: int, deg: int) -> Iterable[list[int]]:
    for code in range(p**deg):
        coeffs = [(code // p**k) % p for k in range(deg)]
        yield coeffs + [1]


def _is_irreducible(poly: list[int], p: int) -> bool:
    deg = len(poly) - 1
    for ddeg in range(1, deg // 2 + 1):
        for den in _monic_polys(p, ddeg):
            _, rem = _poly_divmod(poly, den, p)
            if len(rem) == 1 and rem[0] == 0:
                return False
    return True


def _smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    # candidates ordered by the base-p int encoding of (c_{e-1}, ..., c_0)
    for code in range(p**e):
        low = [(code // p**k) % p for k in range(e)]
        poly = low + [1]
        if _is_irreducible(poly, p):
            return tuple(reversed(poly))
    raise NotPrime(f"no irreducible polynomial of degree {e} over F_{p}")


class FieldCtx:
    """Arithmetic context for F_q, q = p^e odd, with scalar and numpy ops."""

    def __init__(self, q: int):
        p, e = _factor_prime_power(q)
        if p == 2:
            raise EvenCharacteristic(f"q must be odd; q = {q} has characteristic 2")
        if e > MAX_EXT_DEGREE:
            raise InadmissibleParams(f"extension degree {e} > {MAX_EXT_DEGREE}")
        if q > MAX_ORDER:
            raise InadmissibleParams(f"field order {q} > {MAX_ORDER}")
        self.q = q
        self.p = p
        self.e = e
        # modulus stored with descending powers, leading coefficient first
        self.modulus: tuple[int, ...] | None = (
            None if e == 1 else _smallest_irreducible(p, e)
        )
        if e > 1:
            self._build_tables()
        else:
            self._inv_table = np.array(
                [0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64
            )
        sq = np.zeros(q, dtype=bool)
        sq[0] = True
        for a in range(1, q):
            sq[self.mul(a, a)] = True
        self._square_mask = sq
        self.nonsquare_rep = int(np.flatnonzero(~sq)[0])

    # ---- construction helpers -------------------------------------------

    @classmethod
    def from_characteristic(cls, p: int, e: int) -> "FieldCtx":
        if e < 1:
            raise InadmissibleParams(f"extension degree must be >= 1, got {e}")
        if not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        return cls(p**e)

    def _build_tables(self) -> None:
        p, e, q = self.p, self.e, self.q
        mod_asc = list(reversed(self.modulus))
        digits = [[(a // p**k) % p for k in range(e)] for a in range(q)]

        def encode(coeffs: Sequence[int]) -> int:
            return sum((c % p) * p**k for k, c in enumerate(coeffs[:e]))

        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = digits[a]
            for b in range(q):
                db = digits[b]
                add[a, b] = encode([x + y for x, y in zip(da, db)])
                conv = [0] * (2 * e - 1)
                for i, x in enumerate(da):
                    if x:
                        for j, y in enumerate(db):
                            conv[i + j] += x * y
                _, rem = _poly_divmod([c % p for c in conv], mod_asc, p)
                mul[a, b] = encode(rem + [0] * e)
        self._add_table = add
        self._mul_table = mul
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
        self._inv_table = inv
        neg = np.zeros(q, dtype=np.int64)
        for a in range(q):
            neg[a] = encode([-x for x in digits[a]])
        self._neg_table = neg

    # ---- scalar arithmetic ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return int(self._add_table[a, b])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return int(self._neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        return int(self._mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self._inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        out, base = 1, a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def is_square(self, a: int) -> bool:
        return bool(self._square_mask[a])

    def legendre(self, a: int) -> int:
        if a == 0:
            return 0
        return 1 if self._square_mask[a] else -1

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Digits (c_{e-1}, ..., c_0) of the element encoding."""
        return tuple((a // self.p**k) % self.p for k in range(self.e - 1, -1, -1))

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.e:
            raise InadmissibleParams(f"expected {self.e} coefficients")
        out = 0
        for c in coeffs:
            out = out * self.p + (c % self.p)
        return out

    def elements(self) -> range:
        return range(self.q)

    def validate_element(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.q:
            raise InadmissibleParams(f"{a!r} is not an element of F_{self.q}")
        return int(a)

    # ---- vectorized arithmetic on int64 numpy arrays ----------------------

    def np_add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        return self._add_table[a, b]

    def np_neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        return self._neg_table[a]

    def np_sub(self, a, b):
        return self.np_add(a, self.np_neg(b))

    def np_mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        return self._mul_table[a, b]

    def np_inv(self, a):
        return self._inv_table[a]

    def np_is_square(self, a):
        return self._square_mask[a]

    def np_matmul(self, a, b):
        """Exact product of two int64 matrices over F_q."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a @ b) % self.p
        acc = np.zeros(np.broadcast_shapes(a[..., :1].shape, b[..., :1, :].shape)[:-1] + (b.shape[-1],), dtype=np.int64)
        for k in range(a.shape[-1]):
            acc = self._add_table[acc, self._mul_table[a[..., k, None], b[..., k, :]]]
        return acc

    def np_rowsum(self, a):
        """Field sum along the last axis."""
        if self.e == 1:
            return a.sum(axis=-1) % self.p
        acc = np.zeros(a.shape[:-1], dtype=np.int64)
        for k in range(a.shape[-1]):
            acc = self._add_table[acc, a[..., k]]
        return acc

    def np_quad_eval(self, gram, pts):
        """Row-wise values v M v^T for the rows v of pts."""
        vm = self.np_matmul(pts, np.asarray(gram, dtype=np.int64))
        return self.np_rowsum(self.np_mul(vm, pts))

    def np_normalize_rows(self, pts):
        """Scale each nonzero row so its first nonzero entry is 1."""
        pts = np.asarray(pts, dtype=np.int64)
        nz = pts != 0
        if not nz.any(axis=1).all():
            raise ZeroVector("cannot normalize a zero row")
        lead_idx = nz.argmax(axis=1)
        lead = pts[np.arange(len(pts)), lead_idx]
        return self.np_mul(self.np_inv(lead)[:, None], pts)

    def __repr__(self) -> str:
        if self.e == 1:
            return f"FieldCtx(q={self.q})"
        return f"FieldCtx(q={self.q}, p={self.p}, e={self.e}, modulus={self.modulus})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("FieldCtx", self.q))


def field_ctx(q: int) -> FieldCtx:
    """Build the arithmetic context for F_q (q an odd prime power)."""
    return FieldCtx(q)

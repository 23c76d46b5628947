"""Exact linear algebra over a FieldCtx.

Matrices are immutable row tuples of int-encoded field elements.  All
elimination is exact; canonical forms (reduced row echelon) make subspaces
comparable by equality.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InadmissibleParams, IoError, RankDeficient
from .field import FieldCtx


class MatrixFq:
    """Dense matrix over F_q with exact arithmetic."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: FieldCtx, rows: Iterable[Iterable[int]]):
        self.ctx = ctx
        rs = tuple(tuple(ctx.validate_element(x) for x in row) for row in rows)
        if rs and any(len(r) != len(rs[0]) for r in rs):
            raise DimensionMismatch("ragged rows")
        self.rows = rs

    # ---- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, ctx: FieldCtx, m: int, n: int) -> "MatrixFq":
        return cls(ctx, [[0] * n for _ in range(m)])

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "MatrixFq":
        return cls(ctx, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_numpy(cls, ctx: FieldCtx, arr) -> "MatrixFq":
        return cls(ctx, np.asarray(arr, dtype=np.int64).tolist())

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.nrows, self.ncols)

    # ---- shape and equality --------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixFq)
            and other.ctx == self.ctx
            and other.rows == self.rows
        )

    def __hash__(self) -> int:
        return hash((self.ctx.q, self.rows))

    def __repr__(self) -> str:
        return f"MatrixFq(q={self.ctx.q}, {self.nrows}x{self.ncols})"

    # ---- arithmetic ---------------------------------------------------------

    def transpose(self) -> "MatrixFq":
        return MatrixFq(self.ctx, zip(*self.rows)) if self.rows else self

    def add(self, other: "MatrixFq") -> "MatrixFq":
        self._check_same_shape(other)
        c = self.ctx
        return MatrixFq(
            c,
            [
                [c.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def neg(self) -> "MatrixFq":
        c = self.ctx
        return MatrixFq(c, [[c.neg(a) for a in row] for row in self.rows])

    def sub(self, other: "MatrixFq") -> "MatrixFq":
        return self.add(other.neg())

    def scale(self, s: int) -> "MatrixFq":
        c = self.ctx
        return MatrixFq(c, [[c.mul(s, a) for a in row] for row in self.rows])

    def mul(self, other: "MatrixFq") -> "MatrixFq":
        if other.nrows != self.ncols:
            raise DimensionMismatch(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
            )
        c = self.ctx
        bt = list(zip(*other.rows))
        out = []
        for row in self.rows:
            orow = []
            for col in bt:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = c.add(acc, c.mul(a, b))
                orow.append(acc)
            out.append(orow)
        return MatrixFq(c, out)

    def matvec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ncols:
            raise DimensionMismatch("vector length mismatch")
        c = self.ctx
        out = []
        for row in self.rows:
            acc = 0
            for a, b in zip(row, v):
                if a and b:
                    acc = c.add(acc, c.mul(a, b))
            out.append(acc)
        return tuple(out)

    def is_symmetric(self) -> bool:
        return self.rows == self.transpose().rows

    def is_alternating(self) -> bool:
        c = self.ctx
        if self.nrows != self.ncols:
            return False
        for i in range(self.nrows):
            if self.rows[i][i] != 0:
                return False
            for j in range(i + 1, self.ncols):
                if self.rows[i][j] != c.neg(self.rows[j][i]):
                    return False
        return True

    def _check_same_shape(self, other: "MatrixFq") -> None:
        if self.ctx != other.ctx:
            raise DimensionMismatch("mixed field contexts")
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("shape mismatch")


def bilinear_value(m: MatrixFq, u: Sequence[int], v: Sequence[int]) -> int:
    """u^T m v as a field element."""
    c = m.ctx
    mv = m.matvec(v)
    acc = 0
    for a, b in zip(u, mv):
        if a and b:
            acc = c.add(acc, c.mul(a, b))
    return acc


def rref(m: MatrixFq) -> tuple[MatrixFq, tuple[int, ...]]:
    """Reduced row echelon form and the pivot column indices."""
    c = m.ctx
    rows = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    pivots = []
    r = 0
    for col in range(nc):
        if r == nr:
            break
        sel = next((i for i in range(r, nr) if rows[i][col] != 0), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = c.inv(rows[r][col])
        rows[r] = [c.mul(inv, x) for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [c.sub(x, c.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return MatrixFq(c, rows), tuple(pivots)


def rank(m: MatrixFq) -> int:
    return len(rref(m)[1])


def det(m: MatrixFq) -> int:
    if m.nrows != m.ncols:
        raise DimensionMismatch("determinant needs a square matrix")
    c = m.ctx
    rows = [list(r) for r in m.rows]
    n = m.nrows
    out = 1
    for col in range(n):
        sel = next((i for i in range(col, n) if rows[i][col] != 0), None)
        if sel is None:
            return 0
        if sel != col:
            rows[col], rows[sel] = rows[sel], rows[col]
            out = c.neg(out)
        out = c.mul(out, rows[col][col])
        inv = c.inv(rows[col][col])
        for i in range(col + 1, n):
            if rows[i][col] != 0:
                f = c.mul(inv, rows[i][col])
                rows[i] = [c.sub(x, c.mul(f, y)) for x, y in zip(rows[i], rows[col])]
    return out


def inverse(m: MatrixFq) -> MatrixFq:
    if m.nrows != m.ncols:
        raise DimensionMismatch("inverse needs a square matrix")
    n = m.nrows
    c = m.ctx
    aug = MatrixFq(
        c,
        [
            list(m.rows[i]) + [1 if j == i else 0 for j in range(n)]
            for i in range(n)
        ],
    )
    red, pivots = rref(aug)
    if len(pivots) < n or pivots[:n] != tuple(range(n)):
        raise RankDeficient("matrix is singular")
    return MatrixFq(c, [row[n:] for row in red.rows])


class Subspace:
    """Linear subspace stored by its canonical reduced-echelon basis."""

    __slots__ = ("ctx", "ambient", "basis")

    def __init__(self, ctx: FieldCtx, ambient: int, vectors: Iterable[Sequence[int]]):
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionMismatch("basis vector has wrong length")
        if vecs:
            red, pivots = rref(MatrixFq(ctx, vecs))
            self.basis = tuple(red.rows[: len(pivots)])
        else:
            self.basis = ()
        self.ctx = ctx
        self.ambient = ambient

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient:
            raise DimensionMismatch("vector has wrong length")
        c = self.ctx
        w = [c.validate_element(x) for x in v]
        for b in self.basis:
            lead = next(i for i, x in enumerate(b) if x != 0)
            if w[lead] != 0:
                f = w[lead]
                w = [c.sub(x, c.mul(f, y)) for x, y in zip(w, b)]
        return all(x == 0 for x in w)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and other.ctx == self.ctx
            and other.ambient == self.ambient
            and other.basis == self.basis
        )

    def __hash__(self) -> int:
        return hash((self.ctx.q, self.ambient, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(q={self.ctx.q}, ambient={self.ambient}, dim={self.dim})"


def kernel(m: MatrixFq) -> Subspace:
    """Right null space: all v with m v = 0."""
    red, pivots = rref(m)
    c = m.ctx
    nc = m.ncols
    free = [j for j in range(nc) if j not in pivots]
    vecs = []
    for j in free:
        v = [0] * nc
        v[j] = 1
        for i, pc in enumerate(pivots):
            v[pc] = c.neg(red.rows[i][j])
        vecs.append(v)
    return Subspace(c, nc, vecs)


def eigenspace(m: MatrixFq, lam: int) -> Subspace:
    """Null space of m - lam * I."""
    if m.nrows != m.ncols:
        raise DimensionMismatch("eigenspace needs a square matrix")
    c = m.ctx
    lam = c.validate_element(lam)
    shifted = [
        [c.sub(x, lam) if i == j else x for j, x in enumerate(row)]
        for i, row in enumerate(m.rows)
    ]
    return kernel(MatrixFq(c, shifted))


def nonzero_eigenvalues(m: MatrixFq) -> dict[int, int]:
    """Eigenvalues in F_q* with their eigenspace dimensions.

    Only base-field eigenvalues are scanned; eigenvectors over extensions
    never enter any count here.
    """
    out = {}
    for lam in range(1, m.ctx.q):
        d = eigenspace(m, lam).dim
        if d:
            out[lam] = d
    return out


def rank_np(ctx: FieldCtx, arr: np.ndarray) -> int:
    """Rank of a (possibly wide) int matrix; fast path for prime fields."""
    a = np.array(arr, dtype=np.int64)
    if a.ndim != 2:
        raise DimensionMismatch("rank_np needs a 2-d array")
    if ctx.e > 1:
        return rank(MatrixFq.from_numpy(ctx, a))
    p = ctx.p
    a %= p
    nr = a.shape[0]
    r = 0
    for col in range(a.shape[1]):
        if r == nr:
            break
        colvals = a[r:, col]
        nz = np.flatnonzero(colvals)
        if nz.size == 0:
            continue
        sel = r + int(nz[0])
        if sel != r:
            a[[r, sel]] = a[[sel, r]]
        inv = pow(int(a[r, col]), -1, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1 :, col]
        mask = below != 0
        if mask.any():
            a[r + 1 :][mask] = (a[r + 1 :][mask] - np.outer(below[mask], a[r])) % p
        r += 1
    return r


def format_matrix_text(m: MatrixFq) -> str:
    """Plain text serialization: 'rows cols q' header, then one row per line."""
    lines = [f"{m.nrows} {m.ncols} {m.ctx.q}"]
    lines += [" ".join(str(x) for x in row) for row in m.rows]
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str, ctx: FieldCtx | None = None) -> MatrixFq:
    """Inverse of format_matrix_text; builds a context from the header if needed."""
    toks = text.split()
    if len(toks) < 3:
        raise IoError("matrix text needs an 'rows cols q' header")
    try:
        nr, nc, q = int(toks[0]), int(toks[1]), int(toks[2])
    except ValueError as ex:
        raise IoError(f"malformed matrix header: {ex}") from ex
    if ctx is None:
        ctx = FieldCtx(q)
    elif ctx.q != q:
        raise DimensionMismatch(f"matrix is over F_{q}, context is F_{ctx.q}")
    body = toks[3:]
    if len(body) != nr * nc:
        raise IoError(f"expected {nr * nc} entries, found {len(body)}")
    try:
        vals = [int(t) for t in body]
    except ValueError as ex:
        raise IoError(f"malformed matrix entry: {ex}") from ex
    if any(not 0 <= v < q for v in vals):
        raise IoError("matrix entry out of field range")
    return MatrixFq(ctx, [vals[i * nc : (i + 1) * nc] for i in range(nr)])

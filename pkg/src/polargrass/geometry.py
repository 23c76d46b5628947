"""Singular points and totally singular lines of the parabolic quadric.

Points are canonical projective representatives (first nonzero coordinate 1)
in ascending lexicographic order.  Lines are stored by canonical wedge
coordinates (entries x_i y_j - x_j y_i over index pairs i < j, scaled to a
leading 1) in ascending lexicographic order, together with a generator pair
and the ids of their q+1 member points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NotOnQuadric,
    TypeNotInTable,
    ZeroVector,
)
from .forms import AlternatingForm, QuadraticSpace, projective_points

RESIDUE_P_A = 0
RESIDUE_P_B = 1
RESIDUE_ZERO = 2
RESIDUE_PLUS = 3
RESIDUE_MINUS = 4
RESIDUE_NAMES = ("CLASS_P_A", "CLASS_P_B", "CLASS_ZERO", "CLASS_PLUS", "CLASS_MINUS")

LINE_T0 = 0
LINE_TPLUS = 1
LINE_TALPHA = 2
LINE_TBETA = 3
LINE_TMINUS = 4
LINE_TYPE_NAMES = ("T0", "TPLUS", "TALPHA", "TBETA", "TMINUS")


@dataclass
class CensusRecord:
    """Point census of the quadric under an alternating form."""

    a_radical: int
    a_eigen: int
    n_zero: int
    n_plus: int
    n_minus: int

    @property
    def a(self) -> int:
        return self.a_radical + self.a_eigen

    @property
    def total(self) -> int:
        return self.a + self.n_zero + self.n_plus + self.n_minus

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.n_zero, self.n_plus, self.n_minus)


def quadric_points(qs: QuadraticSpace) -> np.ndarray:
    """Singular points, canonical representatives in ascending lex order."""
    if "points" not in qs._cache:
        pts = projective_points(qs.ctx, qs.dim)
        vals = qs.ctx.np_quad_eval(qs.gram_np(), pts)
        sel = pts[vals == 0].copy()
        sel.setflags(write=False)
        qs._cache["points"] = sel
    return qs._cache["points"]


def _encode_rows(q: int, rows: np.ndarray) -> np.ndarray:
    """Base-q integer key per row, monotone with respect to lex order."""
    width = rows.shape[1]
    if q**width >= 2**62:
        raise DimensionMismatch("row too wide for integer keys")
    key = np.zeros(len(rows), dtype=np.int64)
    for k in range(width):
        key = key * q + rows[:, k]
    return key


def _point_keys(qs: QuadraticSpace) -> np.ndarray:
    if "point_keys" not in qs._cache:
        qs._cache["point_keys"] = _encode_rows(qs.ctx.q, quadric_points(qs))
    return qs._cache["point_keys"]


def point_id(qs: QuadraticSpace, v) -> int:
    """Index of a singular point among the canonical representatives."""
    ctx = qs.ctx
    arr = np.array([[ctx.validate_element(x) for x in v]], dtype=np.int64)
    if not arr.any():
        raise ZeroVector("zero vector is not a point")
    if len(arr[0]) != qs.dim:
        raise DimensionMismatch(f"point must have {qs.dim} coordinates")
    arr = ctx.np_normalize_rows(arr)
    key = _encode_rows(ctx.q, arr)[0]
    keys = _point_keys(qs)
    pos = int(np.searchsorted(keys, key))
    if pos >= len(keys) or keys[pos] != key:
        raise NotOnQuadric("point is not singular")
    return pos


def _ids_for_rows(qs: QuadraticSpace, rows: np.ndarray) -> np.ndarray:
    keys = _encode_rows(qs.ctx.q, rows)
    table = _point_keys(qs)
    pos = np.searchsorted(table, keys)
    if (pos >= len(table)).any() or (table[np.minimum(pos, len(table) - 1)] != keys).any():
        raise NotOnQuadric("row is not a singular point")
    return pos.astype(np.int64)


class LineSet:
    """Totally singular lines in canonical order with incidence data."""

    def __init__(self, qs: QuadraticSpace, plucker: np.ndarray, gens: np.ndarray):
        self.qs = qs
        self.plucker = plucker
        self.gens = gens
        self._members: np.ndarray | None = None
        self._through: tuple[np.ndarray, np.ndarray] | None = None

    def __len__(self) -> int:
        return len(self.plucker)

    @property
    def num_lines(self) -> int:
        return len(self.plucker)

    def members(self) -> np.ndarray:
        """(N, q+1) sorted point ids on each line."""
        if self._members is None:
            qs = self.qs
            ctx = qs.ctx
            pts = quadric_points(qs)
            u = pts[self.gens[:, 0]]
            v = pts[self.gens[:, 1]]
            cols = [self.gens[:, 1]]
            for lam in range(ctx.q):
                w = ctx.np_add(u, ctx.np_mul(np.int64(lam), v))
                w = ctx.np_normalize_rows(w)
                cols.append(_ids_for_rows(qs, w))
            mem = np.stack(cols, axis=1)
            mem.sort(axis=1)
            self._members = mem
        return self._members

    def through(self, pid: int) -> np.ndarray:
        """Ids of the lines containing the given point."""
        if self._through is None:
            mem = self.members()
            flat_pts = mem.ravel()
            flat_lines = np.repeat(
                np.arange(len(mem), dtype=np.int64), mem.shape[1]
            )
            order = np.argsort(flat_pts, kind="stable")
            sorted_pts = flat_pts[order]
            starts = np.searchsorted(
                sorted_pts, np.arange(len(quadric_points(self.qs)) + 1)
            )
            self._through = (flat_lines[order], starts)
        lines, starts = self._through
        return lines[starts[pid] : starts[pid + 1]]


def enumerate_singular_lines(qs: QuadraticSpace) -> LineSet:
    """All lines with every point on the quadric, deduped and lex sorted."""
    if "lines" in qs._cache:
        return qs._cache["lines"]
    ctx = qs.ctx
    pts = quadric_points(qs)
    npts = len(pts)
    pm = ctx.np_matmul(pts, qs.gram_np())
    iu, ju = np.triu_indices(qs.dim, 1)

    pair_i: list[np.ndarray] = []
    pair_j: list[np.ndarray] = []
    chunk = max(1, 2**22 // max(npts, 1))
    for lo in range(0, npts, chunk):
        hi = min(npts, lo + chunk)
        if ctx.e == 1:
            block = (pm[lo:hi] @ pts.T) % ctx.p
        else:
            block = ctx.np_rowsum(ctx.np_mul(pm[lo:hi, None, :], pts[None, :, :]))
        bi, bj = np.nonzero(block == 0)
        bi += lo
        keep = bi < bj
        pair_i.append(bi[keep])
        pair_j.append(bj[keep])
    gi = np.concatenate(pair_i)
    gj = np.concatenate(pair_j)

    u = pts[gi]
    v = pts[gj]
    if ctx.e == 1:
        pl = (u[:, iu] * v[:, ju] - u[:, ju] * v[:, iu]) % ctx.p
    else:
        pl = ctx.np_sub(
            ctx.np_mul(u[:, iu], v[:, ju]), ctx.np_mul(u[:, ju], v[:, iu])
        )
    pl = ctx.np_normalize_rows(pl)
    keys = _encode_rows(ctx.q, pl)
    uniq_keys, first = np.unique(keys, return_index=True)
    plucker = pl[first].copy()
    gens = np.stack([gi[first], gj[first]], axis=1).astype(np.int64)
    plucker.setflags(write=False)
    ls = LineSet(qs, plucker, gens)
    qs._cache["lines"] = ls
    return ls


def lines_through(qs: QuadraticSpace, v) -> np.ndarray:
    """Line ids through a singular point given by coordinates or id."""
    pid = v if isinstance(v, (int, np.integer)) else point_id(qs, v)
    return enumerate_singular_lines(qs).through(int(pid))


# ---- residue classes ----------------------------------------------------------


def residue_classes(qs: QuadraticSpace, af: AlternatingForm) -> np.ndarray:
    """Residue class code for every singular point (see RESIDUE_NAMES)."""
    if af.dim != qs.dim:
        raise DimensionMismatch("form and space dimensions differ")
    ctx = qs.ctx
    pts = quadric_points(qs)
    sp = ctx.np_matmul(pts, af.s_np().T)
    a_mask = ~sp.any(axis=1)
    x = ctx.np_matmul(sp, qs.gram_inv_np())
    lead = (pts != 0).argmax(axis=1)
    coef = x[np.arange(len(pts)), lead]
    b_mask = ~a_mask & (x == ctx.np_mul(coef[:, None], pts)).all(axis=1)
    wprime = ctx.np_quad_eval(qs.gram_np(), x)
    rest = ~a_mask & ~b_mask
    zero_mask = rest & (wprime == 0)
    plus_mask = (
        rest
        & (wprime != 0)
        & ctx.np_is_square(ctx.np_mul(np.int64(qs.disc_sign), wprime))
    )
    out = np.full(len(pts), RESIDUE_MINUS, dtype=np.int8)
    out[a_mask] = RESIDUE_P_A
    out[b_mask] = RESIDUE_P_B
    out[zero_mask] = RESIDUE_ZERO
    out[plus_mask] = RESIDUE_PLUS
    return out


def residue_class(qs: QuadraticSpace, af: AlternatingForm, v) -> str:
    """Residue class name of one singular point."""
    pid = point_id(qs, v)
    codes = residue_classes(qs, af)
    return RESIDUE_NAMES[codes[pid]]


def empirical_census(qs: QuadraticSpace, af: AlternatingForm) -> CensusRecord:
    """Count the residue classes by direct enumeration."""
    codes = residue_classes(qs, af)
    counts = np.bincount(codes, minlength=5)
    return CensusRecord(
        a_radical=int(counts[RESIDUE_P_A]),
        a_eigen=int(counts[RESIDUE_P_B]),
        n_zero=int(counts[RESIDUE_ZERO]),
        n_plus=int(counts[RESIDUE_PLUS]),
        n_minus=int(counts[RESIDUE_MINUS]),
    )


# ---- line census --------------------------------------------------------------


def _isotropic_mask(qs: QuadraticSpace, af: AlternatingForm, ls: LineSet) -> np.ndarray:
    ctx = qs.ctx
    pts = quadric_points(qs)
    u = pts[ls.gens[:, 0]]
    v = pts[ls.gens[:, 1]]
    vals = ctx.np_rowsum(ctx.np_mul(ctx.np_matmul(u, af.s_np()), v))
    return vals == 0


def isotropic_line_count(qs: QuadraticSpace, af: AlternatingForm) -> int:
    """Number of totally singular lines on which the form vanishes."""
    ls = enumerate_singular_lines(qs)
    return int(_isotropic_mask(qs, af, ls).sum())


def tau_values(qs: QuadraticSpace, af: AlternatingForm) -> np.ndarray:
    """Per singular point: number of singular lines through it that the form
    kills entirely."""
    ls = enumerate_singular_lines(qs)
    iso = _isotropic_mask(qs, af, ls)
    mem = ls.members()
    out = np.bincount(mem[iso].ravel(), minlength=len(quadric_points(qs)))
    return out.astype(np.int64)


def tau(qs: QuadraticSpace, af: AlternatingForm, v) -> int:
    pid = v if isinstance(v, (int, np.integer)) else point_id(qs, v)
    return int(tau_values(qs, af)[int(pid)])


def line_type_codes(qs: QuadraticSpace, af: AlternatingForm) -> np.ndarray:
    """Type code per line from the residue classes of its points."""
    q = qs.ctx.q
    ls = enumerate_singular_lines(qs)
    mem_cls = residue_classes(qs, af)[ls.members()]
    n_plus = (mem_cls == RESIDUE_PLUS).sum(axis=1)
    n_minus = (mem_cls == RESIDUE_MINUS).sum(axis=1)
    n_w = mem_cls.shape[1] - n_plus - n_minus
    out = np.full(len(ls), -1, dtype=np.int8)
    patterns = {
        LINE_T0: (0, q + 1, 0),
        LINE_TPLUS: (q, 1, 0),
        LINE_TALPHA: ((q + 1) // 2, 0, (q + 1) // 2),
        LINE_TBETA: ((q - 1) // 2, 2, (q - 1) // 2),
        LINE_TMINUS: (0, 1, q),
    }
    for code, (cp, cw, cm) in patterns.items():
        out[(n_plus == cp) & (n_w == cw) & (n_minus == cm)] = code
    if (out < 0).any():
        bad = int(np.flatnonzero(out < 0)[0])
        raise TypeNotInTable(
            f"line {bad} has pattern (n+, nW, n-) = "
            f"({int(n_plus[bad])}, {int(n_w[bad])}, {int(n_minus[bad])})"
        )
    return out


def line_type(qs: QuadraticSpace, af: AlternatingForm, line_id: int) -> str:
    return LINE_TYPE_NAMES[line_type_codes(qs, af)[line_id]]


def line_type_census(qs: QuadraticSpace, af: AlternatingForm) -> dict[str, int]:
    codes = line_type_codes(qs, af)
    counts = np.bincount(codes, minlength=5)
    return {LINE_TYPE_NAMES[i]: int(counts[i]) for i in range(5)}


def export_line_list(qs: QuadraticSpace) -> str:
    """Readable dump: one 'id : wedge coordinates' row per line."""
    ls = enumerate_singular_lines(qs)
    rows = [
        f"{i} : " + " ".join(str(int(x)) for x in ls.plucker[i])
        for i in range(len(ls))
    ]
    return "\n".join(rows) + "\n"

"""Exact linear algebra over truncated series and their fraction field.

Determinants use memoized Laplace expansion rather than fraction-free
elimination: elimination needs exact division by non-unit pivots, which
erodes the certified degree of a truncated operand at every step, while
cofactor expansion stays inside the ring. Matrices here are tiny (bounded
by the number of variables plus one), so the factorial cost is irrelevant.

Generic rank is decided symbolically: random rational evaluation points
only propose a candidate, and every reported bound is backed by a minor
whose determinant is nonzero as a series (lower bound) or by exhaustive
vanishing of the next minor size (upper bound).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import ArityMismatch, NotSolvableAtTruncation, StructureError
from .fracseries import FracSeries, _times
from .scalar import GaussianRational
from .series import Series
from .verdict import Verdict, certified_false, certified_true, unknown

MatrixLike = Union["SeriesMatrix", Sequence[Sequence[Series]]]


@dataclass(frozen=True)
class SeriesMatrix:
    rows: tuple

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise StructureError("ragged matrix")
        arities = {e.arity for r in rows for e in r}
        if len(arities) > 1:
            raise ArityMismatch("matrix entries live in different rings")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def arity(self) -> int:
        for r in self.rows:
            for e in r:
                return e.arity
        raise StructureError("empty matrix has no arity")

    def entry(self, i: int, j: int) -> Series:
        return self.rows[i][j]


def _as_matrix(m: MatrixLike) -> SeriesMatrix:
    if isinstance(m, SeriesMatrix):
        return m
    return SeriesMatrix(tuple(tuple(r) for r in m))


# ---------------- determinants ----------------


def _det(entries: Sequence[Sequence[Series]]) -> Series:
    """Laplace expansion, memoized on the free-column set.

    If every entry is exact the whole computation is lifted to a degree
    that holds the full polynomial determinant, so the result is exact.
    """
    n = len(entries)
    if n == 0:
        raise StructureError("determinant of an empty matrix")
    arity = entries[0][0].arity
    if all(e.exact for row in entries for e in row):
        target = sum(max(e.poly_degree for e in row) for row in entries)
        entries = [[e.lift(target) for e in row] for row in entries]
        work = target
    else:
        work = min(e.degree for row in entries for e in row)
        entries = [[e.truncate(work) if e.degree > work else e for e in row]
                   for row in entries]

    memo: dict = {}

    def rec(i: int, colmask: int) -> Series:
        if i == n:
            return Series.one(arity, work)
        if colmask in memo:
            return memo[colmask]
        acc = Series.zero(arity, work)
        sign = 1
        for j in range(n):
            if not (colmask >> j) & 1:
                continue
            e = entries[i][j]
            # an inexact zero must still flow through the product so the
            # result does not claim exactness it cannot have
            if not (e.is_zero and e.exact):
                term = e * rec(i + 1, colmask & ~(1 << j))
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[colmask] = acc
        return acc

    return rec(0, (1 << n) - 1)


def determinant(m: MatrixLike) -> Series:
    """Determinant truncated at the minimum degree among the entries."""
    mat = _as_matrix(m)
    if mat.nrows != mat.ncols:
        raise StructureError("determinant of a non-square matrix")
    if mat.nrows == 0:
        raise StructureError("determinant of an empty matrix")
    dmin = min(e.degree for row in mat.rows for e in row)
    det = _det(mat.rows)
    if det.degree < dmin:
        return det.lift(dmin)
    return det.truncate(dmin)


def scalar_determinant(rows: Sequence[Sequence[GaussianRational]]) -> GaussianRational:
    n = len(rows)
    acc = GaussianRational(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = GaussianRational(1) if inv % 2 == 0 else GaussianRational(-1)
        for i in range(n):
            term = term * rows[i][perm[i]]
        acc = acc + term
    return acc


# ---------------- rank ----------------


def _scalar_rank(rows) -> int:
    mat = [list(r) for r in rows]
    if not mat or not mat[0]:
        return 0
    nr, nc = len(mat), len(mat[0])
    rank = 0
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][col]
        for r in range(rank + 1, nr):
            if mat[r][col]:
                f = mat[r][col] / pv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        if rank == nr:
            break
    return rank


def rank_at_point(m: MatrixLike, point: Sequence) -> int:
    mat = _as_matrix(m)
    vals = [[e.evaluate(point) for e in row] for row in mat.rows]
    return _scalar_rank(vals)


@dataclass(frozen=True)
class GenericRank:
    """Rank of a matrix over the fraction field of the series ring."""

    r: int
    at_least: Verdict
    at_most: Verdict
    evaluations: tuple

    def to_json(self) -> Mapping:
        return {
            "rank": self.r,
            "at_least": self.at_least.to_json(),
            "at_most": self.at_most.to_json(),
            "evaluations": [
                {"point": list(pt), "rank": rk} for pt, rk in self.evaluations
            ],
        }


def _scan_minors(mat: SeriesMatrix, size: int):
    """First nonzero size-minor witness, plus whether all vanishing was exact."""
    all_exact = True
    for rows in itertools.combinations(range(mat.nrows), size):
        for cols in itertools.combinations(range(mat.ncols), size):
            det = _det([[mat.entry(i, j) for j in cols] for i in rows])
            if det.is_zero:
                all_exact = all_exact and det.exact
            else:
                lead = det.leading_index()
                return (
                    {
                        "rows": list(rows),
                        "cols": list(cols),
                        "minor_index": list(lead),
                        "minor_value": str(det.coefficient(lead)),
                    },
                    all_exact,
                )
    return None, all_exact


def generic_rank(m: MatrixLike, seed: int = 0, samples: int = 4) -> GenericRank:
    mat = _as_matrix(m)
    maxs = min(mat.nrows, mat.ncols)
    degree_used = min((e.degree for row in mat.rows for e in row), default=0)

    evaluations = []
    candidate = 0
    if maxs > 0:
        rng = random.Random(seed)
        arity = mat.arity
        for _ in range(samples):
            pt = tuple(
                Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(arity)
            )
            rk = rank_at_point(mat, pt)
            evaluations.append((tuple(str(c) for c in pt), rk))
            candidate = max(candidate, rk)

    r = candidate
    wit = None
    while r > 0:
        wit, _ = _scan_minors(mat, r)
        if wit is not None:
            break
        r -= 1

    above_exact = True
    while r < maxs:
        w2, all_exact = _scan_minors(mat, r + 1)
        if w2 is not None:
            r += 1
            wit = w2
        else:
            above_exact = all_exact
            break

    if r == 0:
        at_least = certified_true({"note": "zero is a trivial lower bound"}, degree_used)
    else:
        at_least = certified_true(wit, degree_used)

    if r == maxs:
        at_most = certified_true({"note": "bounded by matrix size"}, degree_used)
    elif above_exact:
        at_most = certified_true(
            {"note": f"every minor of size {r + 1} vanishes identically"}, degree_used
        )
    else:
        at_most = unknown(
            {"note": f"minors of size {r + 1} vanish up to truncation only"},
            degree_used,
        )

    return GenericRank(r, at_least, at_most, tuple(evaluations))


# ---------------- solving ----------------


def solve_triangular(lower: MatrixLike, rhs: Sequence) -> list:
    """Forward substitution; the system must be square and lower triangular."""
    mat = _as_matrix(lower)
    n = mat.nrows
    if mat.ncols != n:
        raise StructureError("triangular solve needs a square matrix")
    if len(rhs) != n:
        raise StructureError("right-hand side length does not match")
    for i in range(n):
        for j in range(i + 1, n):
            if not mat.entry(i, j).is_zero:
                raise StructureError(f"entry ({i},{j}) above the diagonal is nonzero")
    arity = mat.arity
    degree = min(e.degree for row in mat.rows for e in row)
    xs: list[FracSeries] = []
    for i in range(n):
        acc = FracSeries.coerce(rhs[i], arity, degree)
        for j in range(i):
            lij = mat.entry(i, j)
            if not lij.is_zero:
                acc = acc - xs[j] * lij
        diag = mat.entry(i, i)
        if diag.is_zero:
            raise NotSolvableAtTruncation(
                f"diagonal entry {i} vanishes up to truncation degree {diag.degree}"
            )
        xs.append(acc / FracSeries.from_series(diag))
    return xs


# ---------------- span membership ----------------


def _clear_denominators(row: Sequence[FracSeries]) -> list[Series]:
    out = []
    for i, f in enumerate(row):
        s = f.num
        for j, g in enumerate(row):
            if j != i:
                s = _times(s, g.den)
        out.append(s)
    return out


def span_membership(vector: Sequence, generators: Sequence[Sequence], seed: int = 0) -> Verdict:
    """Is `vector` in the span of `generators` over the series fraction field?"""
    if not vector:
        raise StructureError("empty vector")
    width = len(vector)
    arity = None
    for entry in vector:
        if isinstance(entry, (FracSeries, Series)):
            arity = entry.arity
            break
    if arity is None:
        for row in generators:
            for entry in row:
                if isinstance(entry, (FracSeries, Series)):
                    arity = entry.arity
                    break
    if arity is None:
        raise StructureError("no series entry to infer the ring from")

    def as_frac_row(row):
        if len(row) != width:
            raise ArityMismatch("generator length does not match the vector")
        return [FracSeries.coerce(e, arity, 0) for e in row]

    vrow = _clear_denominators(as_frac_row(vector))
    grows = [_clear_denominators(as_frac_row(r)) for r in generators]

    degree_used = min(e.degree for e in vrow)
    if not grows:
        if all(e.is_zero for e in vrow):
            return certified_true({"note": "zero vector lies in the empty span"}, degree_used)
        idx, lead = next((i, e) for i, e in enumerate(vrow) if not e.is_zero)
        return certified_false(
            {"entry_index": idx, "minor_index": list(lead.leading_index())},
            degree_used,
        )

    base = generic_rank(SeriesMatrix(tuple(tuple(r) for r in grows)), seed=seed)
    extended = generic_rank(
        SeriesMatrix(tuple(tuple(r) for r in grows) + (tuple(vrow),)), seed=seed
    )

    if extended.r > base.r:
        return certified_false(
            {
                "note": "appending the vector raises the generic rank",
                "rank_generators": base.r,
                "rank_extended": extended.r,
                "witness_minor": extended.at_least.witness,
            },
            degree_used,
        )
    if extended.at_most.is_true:
        return certified_true(
            {
                "note": "appending the vector does not raise the generic rank",
                "rank": base.r,
            },
            degree_used,
        )
    return unknown(
        {"note": "rank comparison not certified at this truncation"}, degree_used
    )

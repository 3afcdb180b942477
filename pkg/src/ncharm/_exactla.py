"""Exact linear algebra over the rationals.

Internal helpers: sparse reduced-echelon elimination and nullspace for the
Laplacian coefficient systems, small dense solvers for expressing vectors
over spanning rows, and symmetric congruence diagonalization used by the
sum-of-squares construction.  Everything here works in Fraction arithmetic
and is deterministic: pivots are chosen in a fixed scan order, never by
magnitude, so identical inputs give identical outputs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

__all__ = [
    "SparseRref",
    "sparse_nullspace",
    "dense_rref",
    "dense_rank",
    "express_over_rows",
    "congruence_diagonalize",
    "is_psd_rational",
]

Row = dict  # column index -> nonzero Fraction


class SparseRref:
    """Incrementally built reduced row echelon form with sparse rows.

    Invariant: every stored pivot row is normalized (pivot entry 1) and
    contains no other row's pivot column, so reducing an incoming row is a
    single elimination pass per pivot column it touches.
    """

    def __init__(self):
        self.pivots: dict[int, Row] = {}

    def reduce(self, row: Row) -> Row:
        """Return row reduced against the current pivot rows (a copy)."""
        row = {c: Fraction(v) for c, v in row.items() if v}
        for c in sorted(set(row) & set(self.pivots)):
            factor = row.get(c)
            if not factor:
                continue
            for cc, v in self.pivots[c].items():
                s = row.get(cc, 0) - factor * v
                if s:
                    row[cc] = s
                else:
                    row.pop(cc, None)
        return row

    def insert(self, row: Row) -> Optional[int]:
        """Reduce and insert a row; return its pivot column or None if zero."""
        row = self.reduce(row)
        if not row:
            return None
        lead = min(row)
        inv = 1 / row[lead]
        row = {c: v * inv for c, v in row.items()}
        for prow in self.pivots.values():
            factor = prow.get(lead)
            if not factor:
                continue
            for cc, v in row.items():
                s = prow.get(cc, 0) - factor * v
                if s:
                    prow[cc] = s
                else:
                    prow.pop(cc, None)
        self.pivots[lead] = row
        return lead

    @property
    def rank(self) -> int:
        return len(self.pivots)


def sparse_nullspace(rows: Iterable[Row], ncols: int) -> list[list[Fraction]]:
    """Nullspace basis of the matrix given by sparse rows, as a canonical
    reduced-echelon list of dense coefficient vectors."""
    rref = SparseRref()
    for row in rows:
        rref.insert(row)
    free_cols = [c for c in range(ncols) if c not in rref.pivots]
    vectors = []
    for f in free_cols:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for c, prow in rref.pivots.items():
            coeff = prow.get(f)
            if coeff:
                v[c] = -coeff
        vectors.append(v)
    reduced, _ = dense_rref(vectors)
    return reduced


def dense_rref(mat: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form of a dense matrix.

    Returns (rows, pivot_cols) with zero rows dropped; deterministic
    first-nonzero pivoting.
    """
    rows = [[Fraction(v) for v in row] for row in mat]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivot_cols: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivot_cols


def dense_rank(mat: Sequence[Sequence[Fraction]]) -> int:
    return len(dense_rref(mat)[0])


def express_over_rows(
    rows: Sequence[Sequence[Fraction]], target: Sequence[Fraction]
) -> Optional[list[Fraction]]:
    """Coefficients c with sum_i c[i]*rows[i] == target, or None.

    With linearly dependent rows the pivot-based particular solution is
    returned (deterministic).
    """
    k = len(rows)
    if k == 0:
        return [] if not any(target) else None
    ncols = len(rows[0])
    # Row reduce [rows | I] so combinations can be traced back.
    aug = [
        [Fraction(v) for v in row] + [Fraction(1 if j == i else 0) for j in range(k)]
        for i, row in enumerate(rows)
    ]
    reduced, pivot_cols = dense_rref(aug)
    # Keep only pivots inside the original column range.
    residual = [Fraction(v) for v in target]
    combo = [Fraction(0)] * k
    for row, c in zip(reduced, pivot_cols):
        if c >= ncols:
            continue
        a = residual[c]
        if not a:
            continue
        for j in range(ncols):
            residual[j] -= a * row[j]
        for j in range(k):
            combo[j] += a * row[ncols + j]
    if any(residual):
        return None
    return combo


def congruence_diagonalize(mat: Sequence[Sequence[Fraction]]):
    """Diagonalize a symmetric rational matrix by congruence: M = N D N^T.

    Returns (N, D) with N an invertible rational matrix (list of rows) and
    D the list of diagonal pivots.  Pivoting scans the diagonal in index
    order; when the whole remaining diagonal is zero but some off-diagonal
    entry is not, the rank-two transform (add row/col j to row/col i) is
    applied first.  Signs of D give the inertia (Sylvester), so M is
    positive semidefinite iff every pivot is nonnegative.
    """
    n = len(mat)
    A = [[Fraction(v) for v in row] for row in mat]
    for i in range(n):
        for j in range(i + 1, n):
            if A[i][j] != A[j][i]:
                raise ValueError("congruence_diagonalize requires a symmetric matrix")
    N = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def add_col(dst, src, f):
        # N[:,dst] += f * N[:,src]
        for r in range(n):
            N[r][dst] += f * N[r][src]

    for k in range(n):
        pivot = next((p for p in range(k, n) if A[p][p]), None)
        if pivot is None:
            pair = next(
                (
                    (i, j)
                    for i in range(k, n)
                    for j in range(i + 1, n)
                    if A[i][j]
                ),
                None,
            )
            if pair is None:
                break
            i, j = pair
            for c in range(n):
                A[i][c] += A[j][c]
            for r in range(n):
                A[r][i] += A[r][j]
            # M = N' A' N'^T with N'[:,j] -= N[:,i]
            add_col(j, i, Fraction(-1))
            pivot = i
        if pivot != k:
            A[k], A[pivot] = A[pivot], A[k]
            for r in range(n):
                A[r][k], A[r][pivot] = A[r][pivot], A[r][k]
            for r in range(n):
                N[r][k], N[r][pivot] = N[r][pivot], N[r][k]
        d = A[k][k]
        for r in range(k + 1, n):
            if not A[r][k]:
                continue
            f = A[r][k] / d
            for c in range(n):
                A[r][c] -= f * A[k][c]
            for c in range(n):
                A[c][r] -= f * A[c][k]
            add_col(k, r, f)
    D = [A[i][i] for i in range(n)]
    return N, D


def is_psd_rational(mat: Sequence[Sequence[Fraction]]) -> bool:
    """Exact positive semidefiniteness of a symmetric rational matrix."""
    _, D = congruence_diagonalize(mat)
    return all(d >= 0 for d in D)

"""Exact rational linear algebra on sparse matrices.

Everything downstream (quotients of free dioperads, homology of cobar
complexes, orthogonal complements of relation spaces) reduces to rank,
kernel and reduced-echelon computations over the rationals.  The matrices
are sparse with entries that start out in {-1, 0, +1}, so elimination is
done fraction-free on integer-scaled rows, with a Markowitz-flavoured
pivot choice to preserve sparsity.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd

# The scalar field: arbitrary-precision rationals, always in lowest terms
# with positive denominator (guaranteed by fractions.Fraction).
Rational = Fraction


def _int_row(row):
    """Scale a col->Fraction dict to integers and divide out the content."""
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    out = {}
    g = 0
    for c, v in row.items():
        iv = v.numerator * (den // v.denominator)
        if iv:
            out[c] = iv
            g = gcd(g, iv)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


def _reduce_content(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


class SparseMatrix:
    """Sparse matrix over the rationals; entries maps (row, col) to nonzero values."""

    def __init__(self, rows, cols, entries=None):
        assert rows >= 0 and cols >= 0
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                self.set(r, c, v)

    def set(self, r, c, v):
        assert 0 <= r < self.rows and 0 <= c < self.cols, "index out of range"
        v = Fraction(v)
        if v:
            self.entries[r, c] = v
        else:
            self.entries.pop((r, c), None)

    def add_to(self, r, c, v):
        self.set(r, c, self.entries.get((r, c), Fraction(0)) + Fraction(v))

    def get(self, r, c):
        return self.entries.get((r, c), Fraction(0))

    @classmethod
    def from_rows(cls, rows, cols=None):
        """Build from an iterable of col->value dicts (or dense lists)."""
        rows = list(rows)
        dicts = []
        width = 0
        for row in rows:
            if isinstance(row, dict):
                d = {c: Fraction(v) for c, v in row.items() if v}
            else:
                d = {c: Fraction(v) for c, v in enumerate(row) if v}
            dicts.append(d)
            if d:
                width = max(width, max(d) + 1)
        if cols is None:
            cols = width
        m = cls(len(dicts), cols)
        for r, d in enumerate(dicts):
            for c, v in d.items():
                m.set(r, c, v)
        return m

    @classmethod
    def identity(cls, n):
        m = cls(n, n)
        for i in range(n):
            m.set(i, i, 1)
        return m

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def transpose(self):
        t = SparseMatrix(self.cols, self.rows)
        for (r, c), v in self.entries.items():
            t.set(c, r, v)
        return t

    def mul(self, other):
        assert self.cols == other.rows, "shape mismatch"
        out = SparseMatrix(self.rows, other.cols)
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out.add_to(r, c, v * w)
        return out

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return "SparseMatrix(%d, %d, nnz=%d)" % (self.rows, self.cols, len(self.entries))

    def rank(self):
        return rank_of_rows(self.row_dicts())

    def kernel_basis(self):
        """Basis of the null space, as dense lists of Fractions; size = cols - rank."""
        pivots, reduced = rref_rows(self.row_dicts())
        pivot_cols = {c: row for (c, row) in pivots}
        basis = []
        for c in range(self.cols):
            if c in pivot_cols:
                continue
            vec = [Fraction(0)] * self.cols
            vec[c] = Fraction(1)
            for pc, row in pivot_cols.items():
                coeff = reduced[row].get(c)
                if coeff:
                    vec[pc] = -coeff
            basis.append(vec)
        return basis


def rank_of_rows(rows):
    """Rank of a list of col->value dicts, by fraction-free elimination.

    Rows are scaled to integers (content removed); pivots are chosen to
    touch as few other rows as possible (greedy Markowitz), and updated
    rows are renormalised by their gcd, which keeps growth mild on the
    incidence-like matrices produced elsewhere in the package.
    """
    work = {}
    col_index = {}
    for i, row in enumerate(rows):
        r = _int_row(row)
        if r:
            work[i] = r
            for c in r:
                col_index.setdefault(c, set()).add(i)
    heap = [(len(rids), c) for c, rids in col_index.items()]
    heapq.heapify(heap)
    rank = 0
    while work:
        # cheapest column (lazy heap), then shortest row in it
        while True:
            cnt, col = heapq.heappop(heap)
            if col in col_index and len(col_index[col]) == cnt:
                break
        rid = min(col_index[col], key=lambda i: (len(work[i]), i))
        piv_row = work.pop(rid)
        touched = set(piv_row)
        for c in piv_row:
            col_index[c].discard(rid)
            if not col_index[c]:
                del col_index[c]
        p = piv_row[col]
        rank += 1
        for other in list(col_index.get(col, ())):
            row = work[other]
            a = row[col]
            new = {}
            for c, v in row.items():
                new[c] = v * p
            for c, v in piv_row.items():
                w = new.get(c, 0) - a * v
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            new = _reduce_content(new)
            for c in row:
                if c not in new:
                    col_index[c].discard(other)
                    touched.add(c)
                    if not col_index[c]:
                        del col_index[c]
            for c in new:
                if c not in row:
                    col_index.setdefault(c, set()).add(other)
                    touched.add(c)
            if new:
                work[other] = new
            else:
                del work[other]
        for c in touched:
            if c in col_index:
                heapq.heappush(heap, (len(col_index[c]), c))
    return rank


def rref_rows(rows):
    """Reduced row echelon form of col->value dict rows, over Fraction.

    Returns (pivots, reduced) where pivots is a list of (col, rowindex)
    pairs and reduced is the list of fully reduced rows; each pivot row is
    normalised to pivot value 1 and is the only row with support on its
    pivot column.
    """
    work = {}
    col_index = {}
    for i, row in enumerate(rows):
        r = {c: Fraction(v) for c, v in row.items() if v}
        if r:
            work[i] = r
            for c in r:
                col_index.setdefault(c, set()).add(i)

    touched = set()

    def knock_out(rid, row, col):
        for other in list(col_index.get(col, ())):
            if other == rid:
                continue
            orow = work[other]
            a = orow[col]
            for c, v in row.items():
                w = orow.get(c, Fraction(0)) - a * v
                if w:
                    if c not in orow:
                        col_index.setdefault(c, set()).add(other)
                        touched.add(c)
                    orow[c] = w
                else:
                    if c in orow:
                        del orow[c]
                        col_index[c].discard(other)
                        touched.add(c)
                        if not col_index[c]:
                            del col_index[c]
            if not orow:
                del work[other]

    heap = [(len(rids), c) for c, rids in col_index.items()]
    heapq.heapify(heap)
    pivots = []
    pivot_cols = set()
    pivot_rows = set()
    while heap:
        cnt, col = heapq.heappop(heap)
        if col in pivot_cols or col not in col_index or len(col_index[col]) != cnt:
            continue
        live = [i for i in col_index[col] if i not in pivot_rows]
        if not live:
            continue
        rid = min(live, key=lambda i: (len(work[i]), i))
        row = work[rid]
        p = row[col]
        if p != 1:
            for c in list(row):
                row[c] /= p
        touched.clear()
        knock_out(rid, row, col)
        pivots.append((col, rid))
        pivot_rows.add(rid)
        pivot_cols.add(col)
        for c in touched:
            if c in col_index and c not in pivot_cols:
                heapq.heappush(heap, (len(col_index[c]), c))
    reduced = {rid: work[rid] for _, rid in pivots}
    return pivots, reduced

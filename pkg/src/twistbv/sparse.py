"""Sparse exact matrices over Q(i) and linear algebra on them.

Matrices are immutable-by-convention dicts keyed by (row, col); no explicit
zeros are stored.  Elimination is fraction-free (Bareiss-style cross
multiplication with exact division by the previous pivot) and pivoting is
deterministic: columns left to right, first structurally nonzero row.
"""

from __future__ import annotations

from .scalars import Scalar, ZERO, ONE


class SparseMatrix:
    __slots__ = ("n_rows", "n_cols", "entries")

    def __init__(self, n_rows: int, n_cols: int, entries=None):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                self[r, c] = v

    # -- construction helpers -------------------------------------------

    @staticmethod
    def identity(n: int) -> "SparseMatrix":
        m = SparseMatrix(n, n)
        for k in range(n):
            m.entries[(k, k)] = ONE
        return m

    @staticmethod
    def zero(n_rows: int, n_cols: int) -> "SparseMatrix":
        return SparseMatrix(n_rows, n_cols)

    def copy(self) -> "SparseMatrix":
        m = SparseMatrix(self.n_rows, self.n_cols)
        m.entries = dict(self.entries)
        return m

    # -- element access -------------------------------------------------

    def __getitem__(self, key) -> Scalar:
        return self.entries.get(key, ZERO)

    def __setitem__(self, key, value):
        r, c = key
        if not (0 <= r < self.n_rows and 0 <= c < self.n_cols):
            raise IndexError("entry (%d,%d) out of bounds for %dx%d"
                             % (r, c, self.n_rows, self.n_cols))
        v = Scalar.of(value)
        if v:
            self.entries[key] = v
        else:
            self.entries.pop(key, None)

    def add_to(self, r: int, c: int, value):
        self[r, c] = self[r, c] + Scalar.of(value)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix)
                and self.n_rows == other.n_rows
                and self.n_cols == other.n_cols
                and self.entries == other.entries)

    def __repr__(self):
        return "SparseMatrix(%dx%d, %d entries)" % (
            self.n_rows, self.n_cols, len(self.entries))

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            raise ValueError("shape mismatch in add")
        out = self.copy()
        for key, v in other.entries.items():
            out[key] = out[key] + v
        return out

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(Scalar(-1))

    def scale(self, c) -> "SparseMatrix":
        c = Scalar.of(c)
        out = SparseMatrix(self.n_rows, self.n_cols)
        if c:
            for key, v in self.entries.items():
                out.entries[key] = v * c
        return out

    def transpose(self) -> "SparseMatrix":
        out = SparseMatrix(self.n_cols, self.n_rows)
        for (r, c), v in self.entries.items():
            out.entries[(c, r)] = v
        return out

    def apply(self, vec: dict) -> dict:
        """Apply to a column vector given as {index: Scalar}."""
        out = {}
        cols = self._columns_by_row()
        # iterate matrix entries grouped by column of the vector
        for c, x in vec.items():
            if not x:
                continue
            for r, v in self._col_cache().get(c, ()):
                out[r] = out.get(r, ZERO) + v * x
        return {r: v for r, v in out.items() if v}

    def _col_cache(self):
        cols = {}
        for (r, c), v in self.entries.items():
            cols.setdefault(c, []).append((r, v))
        return cols

    def _columns_by_row(self):
        rows = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        return rows


def mat_mul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    if a.n_cols != b.n_rows:
        raise ValueError("dimension mismatch: %dx%d times %dx%d"
                         % (a.n_rows, a.n_cols, b.n_rows, b.n_cols))
    b_rows = b._columns_by_row()
    out = SparseMatrix(a.n_rows, b.n_cols)
    acc = {}
    for (r, k), va in a.entries.items():
        row_k = b_rows.get(k)
        if not row_k:
            continue
        for c, vb in row_k.items():
            key = (r, c)
            acc[key] = acc.get(key, ZERO) + va * vb
    for key, v in acc.items():
        if v:
            out.entries[key] = v
    return out


def _echelonize(m: SparseMatrix):
    """Fraction-free forward elimination.

    Returns (rows, pivots) where rows is a list of row dicts in echelon
    order and pivots is a list of (row_index_in_rows, col).
    """
    rows = []
    for r in range(m.n_rows):
        rows.append({})
    for (r, c), v in m.entries.items():
        rows[r][c] = v
    pivots = []
    prev_pivot = ONE
    pivot_rows_used = set()
    for col in range(m.n_cols):
        # deterministic: first structurally nonzero row (row-major order)
        pivot_row = None
        for r in range(m.n_rows):
            if r in pivot_rows_used:
                continue
            if rows[r].get(col):
                pivot_row = r
                break
        if pivot_row is None:
            continue
        pivot_rows_used.add(pivot_row)
        pivots.append((pivot_row, col))
        p = rows[pivot_row][col]
        for r in range(m.n_rows):
            if r in pivot_rows_used or not rows[r].get(col):
                continue
            factor = rows[r][col]
            new_row = {}
            for c2 in set(rows[r]) | set(rows[pivot_row]):
                v = rows[r].get(c2, ZERO) * p - rows[pivot_row].get(c2, ZERO) * factor
                if v:
                    new_row[c2] = v / prev_pivot
            rows[r] = new_row
        prev_pivot = p
    return rows, pivots


def rank(m: SparseMatrix) -> int:
    _, pivots = _echelonize(m)
    return len(pivots)


def _reduced_rows(m: SparseMatrix):
    """Gauss-Jordan reduced form: pivot entries 1, pivots cleared above."""
    rows, pivots = _echelonize(m)
    # normalize pivot rows
    for r, c in pivots:
        p = rows[r][c]
        rows[r] = {c2: v / p for c2, v in rows[r].items()}
    # clear above: process pivots right-to-left in column order
    ordered = sorted(pivots, key=lambda rc: rc[1])
    for r, c in reversed(ordered):
        for r2, _ in ordered:
            if r2 == r:
                continue
            f = rows[r2].get(c)
            if not f:
                continue
            for c2, v in rows[r].items():
                nv = rows[r2].get(c2, ZERO) - f * v
                if nv:
                    rows[r2][c2] = nv
                else:
                    rows[r2].pop(c2, None)
    return rows, ordered


def kernel_basis(m: SparseMatrix):
    """Exact basis of the null space, as a list of {index: Scalar} vectors."""
    rows, pivots = _reduced_rows(m)
    pivot_cols = [c for _, c in pivots]
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(m.n_cols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = {fc: ONE}
        for r, c in pivots:
            v = rows[r].get(fc)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def solve(m: SparseMatrix, b: dict):
    """Particular solution x of m x = b, or None when inconsistent.

    b is a column vector {row_index: Scalar}; x comes back in the same form.
    """
    aug = SparseMatrix(m.n_rows, m.n_cols + 1)
    aug.entries = dict(m.entries)
    for r, v in b.items():
        if not (0 <= r < m.n_rows):
            raise ValueError("rhs length mismatch")
        if v:
            aug.entries[(r, m.n_cols)] = Scalar.of(v)
    rows, pivots = _reduced_rows(aug)
    for r, c in pivots:
        if c == m.n_cols:
            return None  # pivot in the augmented column: inconsistent
    x = {}
    for r, c in pivots:
        v = rows[r].get(m.n_cols)
        if v:
            x[c] = v
    return x


def vec_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, ZERO) - v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def vec_is_zero(a: dict) -> bool:
    return not any(bool(v) for v in a.values())

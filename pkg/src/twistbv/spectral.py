"""Finite double-complex spectral sequences, pages E0 through E2.

A double complex here is a finite bigraded module with two commuting-up-
to-sign differentials d_i (bidegree (1,0)) and d_j (bidegree (0,1)).
Pages are computed with explicit representatives; induced maps are only
ever compared at the level of homology classes, since the zig-zag lift
for d2 is not canonical before passing to homology.
"""

from .scalars import Scalar, ZERO
from .sparse import SparseMatrix, kernel_basis, mat_mul, rank, solve

D2_SHIFT = (-1, 2)

# trigraded support of the twistor-reduction complex, entries (i, j, k);
# d2 candidates move by (-1, 1, -1)
TWISTOR_SUPPORT = (
    (0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0),
    (0, 1, 1), (1, 1, 1),
    (1, 0, 2), (0, 2, 2),
    (1, 0, 3), (1, 1, 3),
    (1, 0, 4), (1, 1, 4), (1, 2, 4),
)
TRIGRADED_D2_SHIFT = (-1, 1, -1)


def possible_d2_arrows(support, shift=TRIGRADED_D2_SHIFT):
    """Positions admitting a d2 arrow purely by support inspection."""
    cells = set(support)
    out = []
    for pos in sorted(cells):
        tgt = tuple(p + s for p, s in zip(pos, shift))
        if tgt in cells:
            out.append((pos, tgt))
    return out


class DoubleComplex:
    """Finite bigraded module with differentials d_i and d_j.

    ``bidegrees`` lists the (i, j) position of each basis element; the
    axioms (bidegree homogeneity, squares, anticommutation) are checked
    at construction and violations raise ValueError.
    """

    def __init__(self, bidegrees, d_i: SparseMatrix, d_j: SparseMatrix):
        self.bidegrees = [tuple(b) for b in bidegrees]
        self.n = len(self.bidegrees)
        if d_i.n_rows != self.n or d_i.n_cols != self.n:
            raise ValueError("d_i has the wrong shape")
        if d_j.n_rows != self.n or d_j.n_cols != self.n:
            raise ValueError("d_j has the wrong shape")
        self.d_i = d_i
        self.d_j = d_j
        self.positions = {}
        for idx, b in enumerate(self.bidegrees):
            self.positions.setdefault(b, []).append(idx)
        for (r, c) in d_i.entries:
            i, j = self.bidegrees[c]
            if self.bidegrees[r] != (i + 1, j):
                raise ValueError("d_i entry (%d,%d) violates bidegree (1,0)"
                                 % (r, c))
        for (r, c) in d_j.entries:
            i, j = self.bidegrees[c]
            if self.bidegrees[r] != (i, j + 1):
                raise ValueError("d_j entry (%d,%d) violates bidegree (0,1)"
                                 % (r, c))
        if not mat_mul(d_i, d_i).is_zero():
            raise ValueError("d_i does not square to zero")
        if not mat_mul(d_j, d_j).is_zero():
            raise ValueError("d_j does not square to zero")
        anti = mat_mul(d_i, d_j) + mat_mul(d_j, d_i)
        if not anti.is_zero():
            raise ValueError("d_i and d_j do not anticommute")

    def indices_at(self, bidegree):
        return self.positions.get(tuple(bidegree), [])

    def total_cohomology_dims(self):
        """Cohomology of the total complex, keyed by total degree."""
        d_tot = self.d_i + self.d_j
        degrees = {}
        for idx, (i, j) in enumerate(self.bidegrees):
            degrees.setdefault(i + j, []).append(idx)
        out = {}
        for n in sorted(degrees):
            cols = degrees[n]
            m_out = _submatrix_cols(d_tot, self.n, cols)
            dim_ker = len(cols) - rank(m_out)
            prev = degrees.get(n - 1, [])
            m_in = _submatrix_cols(d_tot, self.n, prev)
            out[n] = dim_ker - rank(m_in)
        return {n: d for n, d in out.items() if d}


def _submatrix_cols(mat, n_rows, cols):
    out = SparseMatrix(n_rows, len(cols))
    lookup = {c: k for k, c in enumerate(cols)}
    for (r, c), v in mat.entries.items():
        if c in lookup:
            out.entries[(r, lookup[c])] = v
    return out


def _vectors_matrix(vectors, n_rows):
    out = SparseMatrix(n_rows, len(vectors))
    for k, vec in enumerate(vectors):
        for r, v in vec.items():
            out.entries[(r, k)] = v
    return out


def _apply(mat, vec):
    return mat.apply(vec)


def _kernel_vectors(dc, mat, bidegree):
    """Kernel of ``mat`` restricted to one bidegree, as global vectors."""
    cols = dc.indices_at(bidegree)
    sub = _submatrix_cols(mat, dc.n, cols)
    out = []
    for coeffs in kernel_basis(sub):
        out.append({cols[k]: v for k, v in coeffs.items()})
    return out


def _image_vectors(dc, mat, bidegree):
    cols = dc.indices_at(bidegree)
    out = []
    for c in cols:
        vec = {r: v for (r, cc), v in mat.entries.items() if cc == c}
        if vec:
            out.append(vec)
    return out


def _complement(cycles, boundaries, n_rows):
    """Deterministic subset of cycles spanning cycles modulo boundaries."""
    chosen = []
    base = list(boundaries)
    current_rank = rank(_vectors_matrix(base, n_rows))
    for z in cycles:
        cand = _vectors_matrix(base + [z], n_rows)
        r = rank(cand)
        if r > current_rank:
            chosen.append(z)
            base.append(z)
            current_rank = r
    return chosen


class _PageData:
    """Representatives and quotient data for one computed page."""

    def __init__(self, reps, boundaries):
        self.reps = reps              # bidegree -> list of global vectors
        self.boundaries = boundaries  # bidegree -> list of global vectors

    def dims(self):
        return {b: len(v) for b, v in self.reps.items() if v}

    def express(self, bidegree, vec, n_rows):
        """Coefficients of ``vec`` on the reps, modulo the boundaries."""
        reps = self.reps.get(bidegree, [])
        bnds = self.boundaries.get(bidegree, [])
        if not vec:
            return {k: ZERO for k in range(len(reps))}
        mat = _vectors_matrix(reps + bnds, n_rows)
        x = solve(mat, vec)
        if x is None:
            raise AssertionError("class does not lie on the page at %s"
                                 % (bidegree,))
        return {k: x.get(k, ZERO) for k in range(len(reps))}


def _e1_data(dc: DoubleComplex) -> _PageData:
    reps, boundaries = {}, {}
    for b in sorted(dc.positions):
        cycles = _kernel_vectors(dc, dc.d_i, b)
        bnds = _image_vectors(dc, dc.d_i, (b[0] - 1, b[1]))
        reps[b] = _complement(cycles, bnds, dc.n)
        boundaries[b] = bnds
    return _PageData(reps, boundaries)


def _e1_differential(dc, e1: _PageData):
    diffs = {}
    for b, reps in e1.reps.items():
        tgt = (b[0], b[1] + 1)
        mat = SparseMatrix(len(e1.reps.get(tgt, [])), len(reps))
        for col, z in enumerate(reps):
            coeffs = e1.express(tgt, _apply(dc.d_j, z), dc.n)
            for row, v in coeffs.items():
                if v:
                    mat.entries[(row, col)] = v
        diffs[b] = mat
    return diffs


def _e2_data(dc, e1: _PageData, d1):
    """E2 reps as global vectors plus the boundary data for quotients."""
    reps, boundaries = {}, {}
    for b in sorted(e1.reps):
        src = (b[0], b[1] - 1)
        # cycles: combinations of E1 reps killed by d1
        coeff_cycles = kernel_basis(d1.get(b, SparseMatrix(0, len(e1.reps[b]))))
        cycles = []
        for coeffs in coeff_cycles:
            vec = {}
            for k, v in coeffs.items():
                for r, w in e1.reps[b][k].items():
                    vec[r] = vec.get(r, ZERO) + v * w
            cycles.append({r: v for r, v in vec.items() if v})
        # boundaries: d_i-exact pieces plus d_j of the previous E1 reps
        bnds = list(e1.boundaries.get(b, []))
        for z in e1.reps.get(src, []):
            img = _apply(dc.d_j, z)
            if img:
                bnds.append(img)
        reps[b] = _complement(cycles, bnds, dc.n)
        boundaries[b] = bnds
    return _PageData(reps, boundaries)


def _lift_through_d_i(dc, vec, bidegree, reverse_pivots=False):
    """Solve d_i u = vec with u in the given bidegree."""
    cols = dc.indices_at(bidegree)
    if reverse_pivots:
        cols = list(reversed(cols))
    sub = _submatrix_cols(dc.d_i, dc.n, cols)
    x = solve(sub, vec)
    if x is None:
        raise AssertionError("zig-zag lift failed; double complex axioms "
                             "must not hold")
    return {cols[k]: v for k, v in x.items() if v}


def _e2_differential(dc, e2: _PageData, reverse_pivots=False):
    diffs = {}
    for b, reps in e2.reps.items():
        tgt = (b[0] + D2_SHIFT[0], b[1] + D2_SHIFT[1])
        mat = SparseMatrix(len(e2.reps.get(tgt, [])), len(reps))
        for col, z in enumerate(reps):
            dj_z = _apply(dc.d_j, z)
            if dj_z:
                u = _lift_through_d_i(dc, dj_z, (b[0] - 1, b[1] + 1),
                                      reverse_pivots)
                w = _apply(dc.d_j, u)
            else:
                w = {}
            coeffs = e2.express(tgt, w, dc.n)
            for row, v in coeffs.items():
                if v:
                    mat.entries[(row, col)] = v
        diffs[b] = mat
    return diffs


def page(dc: DoubleComplex, r, reverse_pivots=False):
    """Dimensions and differentials of page r (0, 1 or 2)."""
    if r == 0:
        dims = {b: len(idx) for b, idx in dc.positions.items()}
        diffs = {b: _submatrix_cols(dc.d_i, dc.n, idx)
                 for b, idx in dc.positions.items()}
        return dims, diffs
    e1 = _e1_data(dc)
    if r == 1:
        return e1.dims(), _e1_differential(dc, e1)
    if r == 2:
        d1 = _e1_differential(dc, e1)
        e2 = _e2_data(dc, e1, d1)
        return e2.dims(), _e2_differential(dc, e2, reverse_pivots)
    raise ValueError("only pages 0, 1, 2 are computed")


def e3_dims(dc: DoubleComplex, reverse_pivots=False):
    """Homology of (E2, d2), keyed by bidegree."""
    dims, diffs = page(dc, 2, reverse_pivots)
    ranks_out = {b: rank(m) for b, m in diffs.items()}
    out = {}
    for b, dim in dims.items():
        src = (b[0] - D2_SHIFT[0], b[1] - D2_SHIFT[1])
        d = dim - ranks_out.get(b, 0) - ranks_out.get(src, 0)
        if d:
            out[b] = d
    return out


def degeneration_check(dc: DoubleComplex) -> bool:
    """True iff the sequence degenerates after d2.

    Compares the total dimension of E3 with the cohomology of the total
    complex in each total degree.
    """
    e3 = e3_dims(dc)
    by_total = {}
    for (i, j), d in e3.items():
        by_total[i + j] = by_total.get(i + j, 0) + d
    total = dc.total_cohomology_dims()
    keys = set(by_total) | set(total)
    return all(by_total.get(n, 0) == total.get(n, 0) for n in keys)

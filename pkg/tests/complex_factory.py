"""Random finite double complexes for tests.

Complexes are assembled from elementary pieces whose axioms hold by
construction, then conjugated by random block-diagonal unimodular
matrices so the differentials look generic while staying exact.
"""

from twistbv.scalars import ONE, Scalar, ZERO
from twistbv.sparse import SparseMatrix, mat_mul, solve
from twistbv.spectral import DoubleComplex


class _Builder:
    def __init__(self):
        self.bidegrees = []
        self.d_i = {}
        self.d_j = {}

    def add(self, bidegree):
        self.bidegrees.append(bidegree)
        return len(self.bidegrees) - 1

    def free(self, i, j):
        self.add((i, j))

    def horizontal(self, i, j):
        x = self.add((i, j))
        y = self.add((i + 1, j))
        self.d_i[(y, x)] = ONE

    def vertical(self, i, j):
        x = self.add((i, j))
        y = self.add((i, j + 1))
        self.d_j[(y, x)] = ONE

    def square(self, i, j):
        a = self.add((i, j))
        b = self.add((i + 1, j))
        c = self.add((i, j + 1))
        d = self.add((i + 1, j + 1))
        self.d_i[(b, a)] = ONE
        self.d_j[(c, a)] = ONE
        self.d_j[(d, b)] = ONE
        self.d_i[(d, c)] = -ONE

    def staircase(self, i, j):
        # carries a nonzero d2 from (i+1, j) to (i, j+2)
        z = self.add((i + 1, j))
        m = self.add((i + 1, j + 1))
        u = self.add((i, j + 1))
        w = self.add((i, j + 2))
        self.d_j[(m, z)] = ONE
        self.d_i[(m, u)] = ONE
        self.d_j[(w, u)] = ONE

    def long_staircase(self, i, j):
        # carries a nonzero d3; used as the degeneration counterexample
        z = self.add((i + 2, j))
        m = self.add((i + 2, j + 1))
        u = self.add((i + 1, j + 1))
        n = self.add((i + 1, j + 2))
        v = self.add((i, j + 2))
        w = self.add((i, j + 3))
        self.d_j[(m, z)] = ONE
        self.d_i[(m, u)] = ONE
        self.d_j[(n, u)] = ONE
        self.d_i[(n, v)] = ONE
        self.d_j[(w, v)] = ONE

    def matrices(self):
        n = len(self.bidegrees)
        d_i = SparseMatrix(n, n, dict(self.d_i))
        d_j = SparseMatrix(n, n, dict(self.d_j))
        return d_i, d_j

    def build(self, rng=None):
        d_i, d_j = self.matrices()
        if rng is not None:
            s = _random_block_unimodular(self.bidegrees, rng)
            s_inv = _invert(s)
            d_i = mat_mul(s, mat_mul(d_i, s_inv))
            d_j = mat_mul(s, mat_mul(d_j, s_inv))
        return DoubleComplex(self.bidegrees, d_i, d_j)


def _random_block_unimodular(bidegrees, rng):
    n = len(bidegrees)
    blocks = {}
    for idx, b in enumerate(bidegrees):
        blocks.setdefault(b, []).append(idx)
    s = SparseMatrix.identity(n)
    for idxs in blocks.values():
        for _ in range(2 * len(idxs)):
            if len(idxs) < 2:
                break
            r, c = rng.sample(idxs, 2)
            coeff = Scalar(rng.randint(-2, 2))
            if not coeff:
                continue
            # row operation: row r += coeff * row c
            elem = SparseMatrix.identity(n)
            elem.entries[(r, c)] = coeff
            s = mat_mul(elem, s)
    return s


def _invert(s: SparseMatrix) -> SparseMatrix:
    n = s.n_rows
    out = SparseMatrix(n, n)
    for k in range(n):
        x = solve(s, {k: ONE})
        for r, v in x.items():
            if v:
                out.entries[(r, k)] = v
    return out


def make_random_double_complex(rng, max_size=40):
    b = _Builder()
    size = 0
    pieces = ["free", "horizontal", "vertical", "square", "staircase"]
    costs = {"free": 1, "horizontal": 2, "vertical": 2, "square": 4,
             "staircase": 4}
    while size < max_size - 4:
        kind = rng.choice(pieces)
        i = rng.randint(0, 3)
        j = rng.randint(0, 3)
        getattr(b, kind)(i, j)
        size += costs[kind]
    return b.build(rng)


def make_d3_example():
    b = _Builder()
    b.long_staircase(0, 0)
    return b.build()

import random

import pytest

from complex_factory import (_Builder, make_d3_example,
                             make_random_double_complex)
from twistbv.scalars import ONE, Scalar
from twistbv.sparse import SparseMatrix, mat_mul, rank
from twistbv.spectral import (DoubleComplex, TWISTOR_SUPPORT,
                              degeneration_check, e3_dims, page,
                              possible_d2_arrows)


def test_construction_rejects_bad_axioms():
    # d_i with an entry of the wrong bidegree
    d_i = SparseMatrix(2, 2, {(1, 0): ONE})
    d_j = SparseMatrix(2, 2)
    with pytest.raises(ValueError):
        DoubleComplex([(0, 0), (0, 1)], d_i, d_j)
    # d_i not squaring to zero
    d_i = SparseMatrix(3, 3, {(1, 0): ONE, (2, 1): ONE})
    d_j = SparseMatrix(3, 3)
    with pytest.raises(ValueError):
        DoubleComplex([(0, 0), (1, 0), (2, 0)], d_i, d_j)
    # failing anticommutation
    b = _Builder()
    b.square(0, 0)
    d_i, d_j = b.matrices()
    d_i.entries[(3, 2)] = ONE  # flip the sign of one square edge
    with pytest.raises(ValueError):
        DoubleComplex(b.bidegrees, d_i, d_j)


def test_dj_zero_gives_induced_map_and_trivial_e2():
    b = _Builder()
    b.horizontal(0, 0)
    b.horizontal(0, 1)
    b.free(2, 0)
    dc = b.build()
    dims1, diffs1 = page(dc, 1)
    assert all(m.is_zero() for m in diffs1.values())
    dims2, diffs2 = page(dc, 2)
    assert dims2 == dims1
    assert all(m.is_zero() for m in diffs2.values())


def test_staircase_has_nonzero_d2():
    b = _Builder()
    b.staircase(0, 0)
    dc = b.build()
    dims, diffs = page(dc, 2)
    assert dims == {(1, 0): 1, (0, 2): 1}
    assert rank(diffs[(1, 0)]) == 1
    assert e3_dims(dc) == {}
    assert degeneration_check(dc)


def test_monotone_page_dimensions():
    rng = random.Random(5)
    for _ in range(10):
        dc = make_random_double_complex(rng, max_size=24)
        d0, _ = page(dc, 0)
        d1, _ = page(dc, 1)
        d2, _ = page(dc, 2)
        for b in d0:
            assert d1.get(b, 0) <= d0[b]
        for b in d1:
            assert d2.get(b, 0) <= d1[b]


def test_page_differentials_square_to_zero():
    rng = random.Random(17)
    for _ in range(10):
        dc = make_random_double_complex(rng, max_size=24)
        for r in (1, 2):
            dims, diffs = page(dc, r)
            shift = (0, 1) if r == 1 else (-1, 2)
            for b, m in diffs.items():
                tgt = (b[0] + shift[0], b[1] + shift[1])
                nxt = diffs.get(tgt)
                if nxt is not None:
                    assert mat_mul(nxt, m).is_zero()


def test_degeneration_on_random_complexes():
    rng = random.Random(29)
    for _ in range(10):
        dc = make_random_double_complex(rng, max_size=24)
        assert degeneration_check(dc)


def test_two_adjacent_columns_always_degenerate():
    rng = random.Random(31)
    for _ in range(5):
        b = _Builder()
        for _ in range(6):
            kind = rng.choice(["free", "vertical", "horizontal"])
            i = rng.randint(0, 1) if kind != "horizontal" else 0
            getattr(b, kind)(i, rng.randint(0, 2))
        dc = b.build(rng)
        assert degeneration_check(dc)


def test_d3_example_fails_degeneration():
    dc = make_d3_example()
    # the d2 page still squares and is zero here
    dims, diffs = page(dc, 2)
    assert all(m.is_zero() for m in diffs.values())
    assert not degeneration_check(dc)


def test_lift_independence_at_homology_level():
    rng = random.Random(41)
    for _ in range(5):
        dc = make_random_double_complex(rng, max_size=20)
        assert e3_dims(dc) == e3_dims(dc, reverse_pivots=True)


def test_total_cohomology_of_exact_pieces():
    b = _Builder()
    b.square(0, 0)
    b.horizontal(1, 1)
    dc = b.build()
    assert dc.total_cohomology_dims() == {}


def test_twistor_support_pattern():
    arrows = possible_d2_arrows(TWISTOR_SUPPORT)
    assert arrows == [((1, 0, 2), (0, 1, 1)), ((1, 1, 3), (0, 2, 2))]


def test_page_rejects_higher_pages():
    b = _Builder()
    b.free(0, 0)
    dc = b.build()
    with pytest.raises(ValueError):
        page(dc, 3)

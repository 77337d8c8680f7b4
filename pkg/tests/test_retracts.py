import pytest

from twistbv.retracts import (holo_prime_retract, holo_retract,
                              side_condition_report, verify_retract)
from twistbv.sparse import SparseMatrix, mat_mul


@pytest.mark.parametrize("N", [0, 1, 2])
def test_holo_retract_identities(N):
    r = holo_retract(N)
    report = verify_retract(r)
    assert report["ok"], report


@pytest.mark.parametrize("N", [0, 1, 2])
def test_holo_prime_retract_identities(N):
    r = holo_prime_retract(N)
    report = verify_retract(r)
    assert report["ok"], report


def test_side_conditions():
    for builder in (holo_retract, holo_prime_retract):
        report = side_condition_report(builder(1))
        assert report["ok"], report


def test_small_side_is_truncated_forms_with_odd_variable():
    from twistbv.dolbeault import all_monomials
    r = holo_retract(1)
    assert any("eps" in el.gens for el in r.small.basis)
    # full (p,q) forms with one odd variable: 2^5 states per monomial
    assert r.small.rank == 32 * len(all_monomials(1))


def test_mutation_detected():
    # flipping one structure-arrow sign must break an identity
    r = holo_retract(1)
    mc = r.big
    arrow = {"from": "F", "to": "G", "word": "dbar", "coeff": "-2"}
    broken = r.d_big + mc.arrow_matrix(arrow)
    assert not mat_mul(broken, broken).is_zero() or not (
        mat_mul(broken, r.i) - mat_mul(r.i, r.d_small)).is_zero()

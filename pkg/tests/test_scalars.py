from fractions import Fraction

from twistbv.scalars import I, ONE, Scalar, parse_scalar


def test_basic_arithmetic():
    a = Scalar(Fraction(1, 2), Fraction(3, 4))
    b = Scalar(2, -1)
    assert a + b == Scalar(Fraction(5, 2), Fraction(-1, 4))
    assert a - a == Scalar(0)
    assert I * I == Scalar(-1)
    assert (a * b) * b.inv() == a


def test_reduced_form_equality():
    assert Scalar(Fraction(2, 4)) == Scalar(Fraction(1, 2))
    assert hash(Scalar(Fraction(2, 4))) == hash(Scalar(Fraction(1, 2)))


def test_division_exact():
    a = Scalar(Fraction(3, 7), Fraction(-2, 5))
    assert a / a == ONE
    assert 1 / I == -I


def test_text_round_trip():
    samples = [Scalar(0), ONE, -I, Scalar(Fraction(-1, 2), 1),
               Scalar(3, Fraction(2, 5)), Scalar(0, -3)]
    for s in samples:
        assert parse_scalar(s.text()) == s


def test_parse_forms():
    assert parse_scalar("1/2+3i") == Scalar(Fraction(1, 2), 3)
    assert parse_scalar("-i") == -I
    assert parse_scalar("2") == Scalar(2)
    assert parse_scalar("-3/4i") == Scalar(0, Fraction(-3, 4))

import random
from fractions import Fraction

from twistbv.poly import TruncPoly
from twistbv.scalars import I, Scalar


def test_const_and_var_arithmetic():
    a = TruncPoly.var("a")
    b1 = TruncPoly.var("b1")
    two = TruncPoly.const(2)
    p = (a + b1) * two
    assert p.coeffs == {(1, 0, 0): Scalar(2), (0, 1, 0): Scalar(2)}
    assert (a - a).is_zero()
    assert a * 0 == TruncPoly()


def test_truncation_cap():
    a = TruncPoly.var("a")
    assert (a * a * a).is_zero()  # degree 3 > cap 2
    a3 = TruncPoly.var("a", cap=3)
    assert not (a3 * a3 * a3).is_zero()


def test_evaluate_matches_direct():
    rng = random.Random(31)
    a, b1, b2 = (TruncPoly.var(n) for n in ("a", "b1", "b2"))
    p = a * b2 + b1 - TruncPoly.const(I) * a
    for _ in range(10):
        va, vb1, vb2 = (Scalar(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
                        for _ in range(3))
        expected = va * vb2 + vb1 - I * va
        assert p.evaluate(va, vb1, vb2) == expected


def test_text():
    a, b2 = TruncPoly.var("a"), TruncPoly.var("b2")
    p = TruncPoly.const(1) + a * b2 * Scalar(-1)
    assert p.text() == "1 + -a*b2"

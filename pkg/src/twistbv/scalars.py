"""Exact Gaussian-rational scalars.

Every identity-bearing computation in the package runs over Q(i), stored as
a pair of reduced fractions.  No floating point enters here; approximate
display lives in the CLI layer only.
"""

from __future__ import annotations

from fractions import Fraction


class Scalar:
    """An element re + im*i of Q(i), with re and im reduced fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def of(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return Scalar(value)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    def __eq__(self, other):
        other = Scalar.of(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = Scalar.of(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-Scalar.of(other))

    def __rsub__(self, other):
        return Scalar.of(other) + (-self)

    def __mul__(self, other):
        other = Scalar.of(other)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inv(self) -> "Scalar":
        n = self.norm_sq()
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * Scalar.of(other).inv()

    def __rtruediv__(self, other):
        return Scalar.of(other) * self.inv()

    def __repr__(self):
        return "Scalar(%s)" % self.text()

    def text(self) -> str:
        """Canonical text form, e.g. '0', '3/2', 'i', '1-2i', '-1/2+i'."""
        if not self:
            return "0"
        parts = []
        if self.re:
            parts.append(str(self.re))
        if self.im:
            if self.im == 1:
                unit = "i"
            elif self.im == -1:
                unit = "-i"
            else:
                unit = "%si" % self.im
            if parts and not unit.startswith("-"):
                parts.append("+" + unit)
            else:
                parts.append(unit)
        return "".join(parts)

    def approx(self) -> complex:
        # display-only path; never feeds back into verification
        return complex(float(self.re), float(self.im))


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def parse_scalar(text: str) -> Scalar:
    """Parse canonical scalar text: sums of rational and rational*i terms."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    # split into signed terms
    terms = []
    start = 0
    for k in range(1, len(s)):
        if s[k] in "+-" and s[k - 1] not in "+-/*":
            terms.append(s[start:k])
            start = k
    terms.append(s[start:])
    total = Scalar(0)
    for term in terms:
        if not term or term in "+-":
            raise ValueError("bad scalar literal %r" % text)
        imag = term.endswith("i")
        body = term[:-1] if imag else term
        body = body.rstrip("*")
        if body in ("", "+"):
            body = "1"
        elif body == "-":
            body = "-1"
        try:
            frac = Fraction(body)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError("bad scalar literal %r" % text) from exc
        total = total + (Scalar(0, frac) if imag else Scalar(frac))
    return total

"""Truncated polynomial scalars in the deformation parameters (a, b1, b2).

Coefficients live in Q(i); total degree is capped (default 2), which is all
the quadraticity checks need.  Arithmetic mirrors the Scalar protocol so the
scalar parameter maps can be evaluated symbolically.
"""

from __future__ import annotations

from .scalars import Scalar

DEG_CAP = 2
VARS = ("a", "b1", "b2")


class TruncPoly:
    __slots__ = ("coeffs", "cap")

    def __init__(self, coeffs=None, cap=DEG_CAP):
        self.cap = cap
        self.coeffs = {}
        if coeffs:
            for mono, v in coeffs.items():
                v = Scalar.of(v)
                if v and sum(mono) <= cap:
                    self.coeffs[mono] = v

    @staticmethod
    def const(value, cap=DEG_CAP) -> "TruncPoly":
        return TruncPoly({(0, 0, 0): Scalar.of(value)}, cap=cap)

    @staticmethod
    def var(name: str, cap=DEG_CAP) -> "TruncPoly":
        mono = tuple(1 if v == name else 0 for v in VARS)
        if sum(mono) != 1:
            raise ValueError("unknown variable %r" % name)
        return TruncPoly({mono: Scalar(1)}, cap=cap)

    def of(self, value) -> "TruncPoly":
        if isinstance(value, TruncPoly):
            return value
        return TruncPoly.const(value, cap=self.cap)

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self

    def __eq__(self, other):
        if not isinstance(other, TruncPoly):
            other = TruncPoly.const(other, cap=self.cap)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        other = self.of(other)
        out = dict(self.coeffs)
        for mono, v in other.coeffs.items():
            nv = out.get(mono, Scalar(0)) + v
            if nv:
                out[mono] = nv
            else:
                out.pop(mono, None)
        return TruncPoly(out, cap=self.cap)

    __radd__ = __add__

    def __neg__(self):
        return TruncPoly({m: -v for m, v in self.coeffs.items()}, cap=self.cap)

    def __sub__(self, other):
        return self + (-self.of(other))

    def __rsub__(self, other):
        return self.of(other) + (-self)

    def __mul__(self, other):
        other = self.of(other)
        out = {}
        for m1, v1 in self.coeffs.items():
            for m2, v2 in other.coeffs.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                if sum(mono) > self.cap:
                    continue  # truncation
                nv = out.get(mono, Scalar(0)) + v1 * v2
                if nv:
                    out[mono] = nv
                else:
                    out.pop(mono, None)
        return TruncPoly(out, cap=self.cap)

    __rmul__ = __mul__

    def evaluate(self, a, b1, b2) -> Scalar:
        vals = (Scalar.of(a), Scalar.of(b1), Scalar.of(b2))
        total = Scalar(0)
        for mono, coeff in self.coeffs.items():
            term = coeff
            for v, e in zip(vals, mono):
                for _ in range(e):
                    term = term * v
            total = total + term
        return total

    def text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for mono in sorted(self.coeffs, key=lambda m: (sum(m), m)):
            coeff = self.coeffs[mono]
            names = [n for n, e in zip(VARS, mono) for _ in range(e)]
            body = "*".join(names)
            if not body:
                parts.append(coeff.text())
            elif coeff == Scalar(1):
                parts.append(body)
            elif coeff == Scalar(-1):
                parts.append("-" + body)
            else:
                parts.append("(%s)*%s" % (coeff.text(), body))
        return " + ".join(parts)

    def __repr__(self):
        return "TruncPoly(%s)" % self.text()

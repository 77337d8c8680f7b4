"""Supercharges of the 4d N=4 supertranslation algebra.

A supercharge is a pair of 2x4 exact matrices: a_plus has rows indexed by
the basis {alpha_1, alpha_2} of S+ and columns by {e1, e2, f1, f2} of W;
a_minus has rows {alpha_1^v, alpha_2^v} of S- and columns the dual basis
{e1*, e2*, f1*, f2*} of W*.

Conventions (see docs/conventions.md):
  * volume iso S+ -> S+*: alpha_1 -> alpha_2*, alpha_2 -> -alpha_1*
  * the R-symmetry block homomorphism acts on the e-block by the defining
    representation and on the f-block by the dual defining representation,
    which is the unique choice making the distinguished combinations
    eps_L, eps_R invariant
  * the antipodal identification on each projective line is w -> -1/conj(w)
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import I, ONE, Scalar, ZERO, parse_scalar
from .sparse import SparseMatrix, kernel_basis, mat_mul, rank, solve

S_PLUS_BASIS = ("a1", "a2")
S_MINUS_BASIS = ("a1v", "a2v")
W_BASIS = ("e1", "e2", "f1", "f2")
W_DUAL_BASIS = ("e1s", "e2s", "f1s", "f2s")


class Infinity:
    """Projective infinity marker for the scalar parameter maps."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def text(self):
        return "infinity"


INFINITY = Infinity()


class Supercharge:
    __slots__ = ("a_plus", "a_minus")

    def __init__(self, a_plus: SparseMatrix, a_minus: SparseMatrix):
        for m in (a_plus, a_minus):
            if (m.n_rows, m.n_cols) != (2, 4):
                raise ValueError("supercharge components must be 2x4")
        self.a_plus = a_plus
        self.a_minus = a_minus

    @staticmethod
    def zero() -> "Supercharge":
        return Supercharge(SparseMatrix(2, 4), SparseMatrix(2, 4))

    @staticmethod
    def from_terms(terms: dict) -> "Supercharge":
        """Build from {(spin_label, w_label): coefficient}.

        spin labels: a1, a2 (positive) / a1v, a2v (negative);
        w labels: e1..f2 for the positive part, e1s..f2s for the negative.
        """
        q = Supercharge.zero()
        for (spin, w), coeff in terms.items():
            coeff = Scalar.of(coeff)
            if spin in S_PLUS_BASIS and w in W_BASIS:
                q.a_plus.add_to(S_PLUS_BASIS.index(spin), W_BASIS.index(w), coeff)
            elif spin in S_MINUS_BASIS and w in W_DUAL_BASIS:
                q.a_minus.add_to(S_MINUS_BASIS.index(spin), W_DUAL_BASIS.index(w), coeff)
            else:
                raise ValueError("unknown basis pair (%s, %s)" % (spin, w))
        return q

    def terms(self) -> dict:
        out = {}
        for (r, c), v in sorted(self.a_plus.entries.items()):
            out[(S_PLUS_BASIS[r], W_BASIS[c])] = v
        for (r, c), v in sorted(self.a_minus.entries.items()):
            out[(S_MINUS_BASIS[r], W_DUAL_BASIS[c])] = v
        return out

    def scale(self, c) -> "Supercharge":
        return Supercharge(self.a_plus.scale(c), self.a_minus.scale(c))

    def __add__(self, other: "Supercharge") -> "Supercharge":
        return Supercharge(self.a_plus + other.a_plus,
                           self.a_minus + other.a_minus)

    def __eq__(self, other):
        return (isinstance(other, Supercharge)
                and self.a_plus == other.a_plus
                and self.a_minus == other.a_minus)

    def __repr__(self):
        parts = []
        for (spin, w), v in self.terms().items():
            coeff = v.text()
            if coeff == "1":
                parts.append("%s*%s" % (spin, w))
            else:
                parts.append("(%s)*%s*%s" % (coeff, spin, w))
        return "Supercharge(%s)" % (" + ".join(parts) or "0")


# distinguished supercharges
Q_HOL = Supercharge.from_terms({("a1", "e2"): 1})
QP_HOL = Supercharge.from_terms({("a1v", "f2s"): 1})
Q_PRIME = Supercharge.from_terms({("a2", "e1"): 1})
Q_DOUBLE_PRIME = Supercharge.from_terms({("a2v", "f1s"): 1})
EPS_L = Supercharge.from_terms({("a1", "e2"): 1, ("a2", "e1"): -1})
EPS_R = Supercharge.from_terms({("a1v", "f2s"): 1, ("a2v", "f1s"): -1})


def kw_family_member(u1, u2, v1, v2) -> Supercharge:
    """u'(a1 x e2) + u''(a2 x e1) + v'(a1v x f2*) + v''(a2v x f1*)."""
    return Supercharge.from_terms({
        ("a1", "e2"): u1, ("a2", "e1"): u2,
        ("a1v", "f2s"): v1, ("a2v", "f1s"): v2,
    })


def basis_supercharges():
    """The 16 basis elements of the supercharge space."""
    out = []
    for spin in S_PLUS_BASIS:
        for w in W_BASIS:
            out.append(Supercharge.from_terms({(spin, w): 1}))
    for spin in S_MINUS_BASIS:
        for w in W_DUAL_BASIS:
            out.append(Supercharge.from_terms({(spin, w): 1}))
    return out


def gamma_pair(q1: Supercharge, q2: Supercharge) -> SparseMatrix:
    """Symmetrized pairing into S+ (x) S-, as a 2x2 matrix.

    Entry (i, j) is the coefficient of alpha_i (x) alpha_j^v; the basis is
    identified with constant-coefficient vector fields via
    alpha_1 (x) alpha_i^v -> dbar_{z_i}, alpha_2 (x) alpha_i^v -> d_{z_i}.
    """
    t1 = mat_mul(q1.a_plus, q2.a_minus.transpose())
    t2 = mat_mul(q2.a_plus, q1.a_minus.transpose())
    return t1 + t2


def is_square_zero(q: Supercharge) -> bool:
    return gamma_pair(q, q).is_zero()


class RankType:
    __slots__ = ("p", "q")

    def __init__(self, p: int, q: int):
        self.p = p
        self.q = q

    def __eq__(self, other):
        if isinstance(other, tuple):
            return (self.p, self.q) == other
        return isinstance(other, RankType) and (self.p, self.q) == (other.p, other.q)

    def __hash__(self):
        return hash((self.p, self.q))

    def __repr__(self):
        return "RankType(%d, %d)" % (self.p, self.q)


def rank_type(q: Supercharge) -> RankType:
    return RankType(rank(q.a_plus), rank(q.a_minus))


ORBIT_LABELS = {
    (0, 0): "trivial",
    (1, 0): "holomorphic", (0, 1): "holomorphic",
    (2, 0): "topological", (0, 2): "topological",
    (1, 1): "intermediate (three invariant directions)",
    (2, 1): "topological", (1, 2): "topological",
    (2, 2): "topological (one-parameter orbit family)",
}


def orbit_label(rt: RankType) -> str:
    return ORBIT_LABELS[(rt.p, rt.q)]


def orbit_invariant_s(q: Supercharge) -> Scalar:
    """The scale invariant of a full-rank square-zero supercharge.

    Determinant of the 4x4 matrix [emb(alpha_1) emb(alpha_2) x_1 x_2] where
    emb is the embedding S+ -> W dual to a_plus under the fixed volume form
    and x_k is any lift of alpha_k^v through the map W -> S- given by
    a_minus.  Column operations by the first block leave it fixed, so the
    lift choice drops out.
    """
    rt = rank_type(q)
    if not is_square_zero(q) or rt != (2, 2):
        raise ValueError("s-invariant requires a square-zero supercharge "
                         "of full rank, got rank (%d,%d)" % (rt.p, rt.q))
    # volume iso S+ -> S+*: alpha_1 -> alpha_2*, alpha_2 -> -alpha_1*
    # a_plus as Hom(S+*, W): alpha_i* -> sum_j a_plus[i,j] w_j
    cols = [None] * 4
    emb_images = {0: (1, ONE), 1: (0, -ONE)}  # alpha_k -> (dual index, sign)
    for k in (0, 1):
        idx, sign = emb_images[k]
        cols[k] = {j: sign * q.a_plus[idx, j] for j in range(4)}
    # lifts: a_minus as map W -> S-, w_j -> sum_i a_minus[i,j] alpha_i^v
    for k in (0, 1):
        x = solve(q.a_minus, {k: ONE})
        if x is None:
            raise ValueError("negative component not surjective")
        cols[2 + k] = x
    m = SparseMatrix(4, 4)
    for c, col in enumerate(cols):
        for r, v in col.items():
            if v:
                m[r, c] = v
    return det4(m)


def det4(m: SparseMatrix) -> Scalar:
    # cofactor expansion; the matrices here are tiny
    import itertools
    total = ZERO
    for perm in itertools.permutations(range(4)):
        sign = 1
        for i in range(4):
            for j in range(i + 1, 4):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Scalar(sign)
        for r, c in enumerate(perm):
            v = m[r, c]
            if not v:
                term = ZERO
                break
            term = term * v
        total = total + term
    return total


class KWPoint:
    """A pair of projective coordinates on two lines.

    Normalization: (value, 1) for finite points, (1, 0) for infinity.
    """

    __slots__ = ("w_plus", "w_minus")

    def __init__(self, w_plus, w_minus):
        self.w_plus = _normalize_proj(w_plus)
        self.w_minus = _normalize_proj(w_minus)

    def __eq__(self, other):
        return (isinstance(other, KWPoint)
                and self.w_plus == other.w_plus
                and self.w_minus == other.w_minus)

    def __hash__(self):
        return hash((self.w_plus, self.w_minus))

    def coords(self):
        return (proj_value(self.w_plus), proj_value(self.w_minus))

    def __repr__(self):
        return "KWPoint(%s, %s)" % (proj_text(self.w_plus), proj_text(self.w_minus))


def _normalize_proj(pair):
    if pair is INFINITY:
        return (ONE, ZERO)
    if isinstance(pair, Scalar) or isinstance(pair, (int, Fraction)):
        return (Scalar.of(pair), ONE)
    num, den = pair
    num, den = Scalar.of(num), Scalar.of(den)
    if den:
        return (num / den, ONE)
    if not num:
        raise ValueError("projective point (0:0)")
    return (ONE, ZERO)


def proj_value(pair):
    num, den = pair
    return INFINITY if not den else num


def proj_text(pair):
    v = proj_value(pair)
    return v.text()


def kw_coordinates(q: Supercharge):
    """Projective coordinates (w+, w-) = (-v'/u', u''/v'') of a family member.

    Returns None when q is not in the span of the four distinguished
    supercharges, or when one of the pairs (u', v') / (u'', v'') vanishes.
    """
    allowed_plus = {(0, 1), (1, 0)}   # (a1,e2), (a2,e1)
    allowed_minus = {(0, 3), (1, 2)}  # (a1v,f2*), (a2v,f1*)
    for key in q.a_plus.entries:
        if key not in allowed_plus:
            return None
    for key in q.a_minus.entries:
        if key not in allowed_minus:
            return None
    u1 = q.a_plus[0, 1]
    u2 = q.a_plus[1, 0]
    v1 = q.a_minus[0, 3]
    v2 = q.a_minus[1, 2]
    if (not u1 and not v1) or (not u2 and not v2):
        return None
    return KWPoint((-v1, u1), (u2, v2))


# -- compatibility with the block-diagonal twisting homomorphism ----------

_SL2_BASIS = (
    ((0, 1), (0, 0)),   # raising
    ((1, 0), (0, -1)),  # torus
    ((0, 0), (1, 0)),   # lowering
)


def _delta_supercharge(q: Supercharge, x_plus, x_minus, r_block) -> Supercharge:
    """Infinitesimal action: x_plus on S+, x_minus on S-, r_block 4x4 on W."""
    xp = _dense_to_sparse(x_plus, 2, 2)
    xm = _dense_to_sparse(x_minus, 2, 2)
    rb = _dense_to_sparse(r_block, 4, 4)
    d_plus = mat_mul(xp, q.a_plus) + mat_mul(q.a_plus, rb.transpose())
    d_minus = mat_mul(xm, q.a_minus) - mat_mul(q.a_minus, rb)
    return Supercharge(d_plus, d_minus)


def _dense_to_sparse(rows, n, m):
    out = SparseMatrix(n, m)
    for r in range(n):
        for c in range(m):
            if rows[r][c]:
                out[r, c] = Scalar(rows[r][c])
    return out


def _block_r(e_block, f_block):
    rows = [[0] * 4 for _ in range(4)]
    for r in range(2):
        for c in range(2):
            rows[r][c] = e_block[r][c]
            rows[2 + r][2 + c] = f_block[r][c]
    return rows


def _transpose2(x):
    return ((x[0][0], x[1][0]), (x[0][1], x[1][1]))


def _neg2(x):
    return tuple(tuple(-v for v in row) for row in x)


def compatibility_generators(restricted: bool):
    """Generator triples (x_plus, x_minus, r_block) of the twisted action.

    Full: both sl(2) factors, acting on spin and (via the block
    homomorphism) on the R-symmetry; e-block defining, f-block dual
    defining.  Restricted: the rank-two torus fixing each of the four
    distinguished supercharges individually.
    """
    zero2 = ((0, 0), (0, 0))
    if restricted:
        # weights: (s1, s2) acts by diag(s1,-s1) on S+, diag(s2,-s2) on S-,
        # diag(s1,-s1,-s2,s2) on W
        gens = []
        for s1, s2 in ((1, 0), (0, 1)):
            xp = ((s1, 0), (0, -s1))
            xm = ((s2, 0), (0, -s2))
            rb = _block_r(((s1, 0), (0, -s1)), ((-s2, 0), (0, s2)))
            gens.append((xp, xm, rb))
        return gens
    gens = []
    for x in _SL2_BASIS:
        gens.append((x, zero2, _block_r(x, zero2)))
    for y in _SL2_BASIS:
        gens.append((zero2, y, _block_r(zero2, _neg2(_transpose2(y)))))
    return gens


def is_kw_compatible(q: Supercharge, restricted: bool = False) -> bool:
    for xp, xm, rb in compatibility_generators(restricted):
        d = _delta_supercharge(q, xp, xm, rb)
        if not (d.a_plus.is_zero() and d.a_minus.is_zero()):
            return False
    return True


# -- coupling constant and the scalar parameter maps ----------------------

class CouplingConstant:
    __slots__ = ("tau", "theta_zero")

    def __init__(self, tau, allow_formal: bool = False):
        self.tau = Scalar.of(tau)
        if not allow_formal and not self.tau.im > 0:
            raise ValueError("coupling must have positive imaginary part "
                             "(pass allow_formal=True for formal tests)")
        self.theta_zero = self.tau.re == 0

    def __repr__(self):
        return "CouplingConstant(%s)" % self.tau.text()


def s_duality(p: KWPoint, c: CouplingConstant, approx: bool = False):
    """(w+, w-) -> (-u w+, u w-) with u the phase of tau.

    Exact mode requires a purely imaginary coupling (u = i); general
    couplings go through the approximate display path only.
    """
    if c.theta_zero:
        return KWPoint(_proj_scale(p.w_plus, -I), _proj_scale(p.w_minus, I))
    if not approx:
        raise ValueError("exact S-duality needs a purely imaginary coupling")
    t = c.tau.approx()
    u = t / abs(t)
    wp, wm = p.coords()
    wp = INFINITY if wp is INFINITY else complex(-u) * wp.approx()
    wm = INFINITY if wm is INFINITY else complex(u) * wm.approx()
    return (wp, wm)


def _proj_scale(pair, c):
    num, den = pair
    return (num * c, den)


def antipodal(p: KWPoint) -> KWPoint:
    """The identification w -> -1/conj(w) on each factor (exact over Q(i))."""

    def flip(pair):
        num, den = pair
        return (-den.conj(), num.conj())

    return KWPoint(flip(p.w_plus), flip(p.w_minus))


def identify(p: KWPoint, convention: str) -> set:
    """Orbit of p under the configured identification."""
    if convention == "none":
        return {p}
    if convention == "antipodal":
        return {p, antipodal(p)}
    raise ValueError("unknown identification convention %r" % convention)


def canonical_parameter(c: CouplingConstant, t):
    """(tau+conj tau)/2 + (tau-conj tau)/2 * (t^2-1)/(t^2+1); pole at t^2=-1."""
    tau = c.tau
    re_part = (tau + tau.conj()) / Scalar(2)
    im_part = (tau - tau.conj()) / Scalar(2)
    if t is INFINITY:
        return re_part + im_part
    t = Scalar.of(t)
    den = t * t + ONE
    if not den:
        return INFINITY
    return re_part + im_part * (t * t - ONE) / den


def kappa_level(c: CouplingConstant, lam, mu, unscaled: bool = False):
    """-2 tau (lam^2/mu + 1/2); with unscaled=True just lam^2/mu."""
    lam = Scalar.of(lam)
    mu = Scalar.of(mu)
    if not mu:
        return INFINITY
    ratio = lam * lam / mu
    if unscaled:
        return ratio
    return Scalar(-2) * c.tau * (ratio + Scalar(Fraction(1, 2)))


def susy_to_deformation(a, b1, b2):
    """Deformation coefficients (c_z1, c_z2, c_eps) = (a, -b2, b1 + a*b2).

    Works for exact scalars and for truncated polynomial scalars alike.
    """
    return (a, -b2, b1 + a * b2)


class TwistParameters:
    __slots__ = ("a", "b1", "b2", "c_z1", "c_z2", "c_eps",
                 "lam", "mu", "kappa", "psi")

    def __init__(self, a=0, b1=0, b2=0):
        self.a = Scalar.of(a)
        self.b1 = Scalar.of(b1)
        self.b2 = Scalar.of(b2)
        self.c_z1, self.c_z2, self.c_eps = susy_to_deformation(
            self.a, self.b1, self.b2)
        # Hodge-family coordinates: lambda rides the z1-slot, mu the eps-slot
        self.lam = self.c_z1
        self.mu = self.c_eps
        self.kappa = None
        self.psi = None

    def with_coupling(self, c: CouplingConstant) -> "TwistParameters":
        self.kappa = kappa_level(c, self.lam, self.mu)
        return self

    def __repr__(self):
        return ("TwistParameters(a=%s, b1=%s, b2=%s -> c=(%s, %s, %s))"
                % (self.a.text(), self.b1.text(), self.b2.text(),
                   self.c_z1.text(), self.c_z2.text(), self.c_eps.text()))


def kw_to_susy(u, v):
    """Expansion of u*eps_L + v*eps_R in the distinguished supercharges.

    Frozen convention: with t = v/u this gives (a, b1, b2) = (t, -1, -t)
    after rescaling by the overall unit u; recorded in docs/conventions.md.
    """
    u = Scalar.of(u)
    v = Scalar.of(v)
    q = EPS_L.scale(u) + EPS_R.scale(v)
    return q


def parse_supercharge(text: str) -> Supercharge:
    """Parse literals like 'a1*e2 + (1/2)*a2v*f1s - i*a1v*f2s'."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty supercharge literal")
    terms = []
    depth = 1 if s[0] == "(" else 0
    start = 0
    for k in range(1, len(s)):
        ch = s[k]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and s[k - 1] not in "+-*/(":
            terms.append(s[start:k])
            start = k
    terms.append(s[start:])
    acc = {}
    for term in terms:
        sign = ONE
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        factors = term.split("*")
        spin = None
        w = None
        coeff = sign
        for f in factors:
            if not f:
                raise ValueError("bad supercharge literal %r" % text)
            if f in S_PLUS_BASIS + S_MINUS_BASIS:
                spin = f
            elif f in W_BASIS + W_DUAL_BASIS:
                w = f
            else:
                body = f[1:-1] if f.startswith("(") and f.endswith(")") else f
                coeff = coeff * parse_scalar(body)
        if spin is None or w is None:
            raise ValueError("term %r needs a spin and a W factor" % term)
        key = (spin, w)
        acc[key] = acc.get(key, ZERO) + coeff
    return Supercharge.from_terms(acc)

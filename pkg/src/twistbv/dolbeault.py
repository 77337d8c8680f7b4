"""Truncated polynomial Dolbeault forms on C^2 with odd variables.

Basis elements are monomial * dz_I ^ dzbar_J ^ (odd generators) tensor a Lie
coefficient slot.  The generator order is frozen as
dz1 < dz2 < dzbar1 < dzbar2 < eps1 < eps2 < eps, and every operator acts by
the left-action Koszul rule: inserting an odd generator costs a sign for
each present generator that precedes it in this order.
"""

from __future__ import annotations

from itertools import combinations

from .scalars import ONE, Scalar, ZERO
from .sparse import SparseMatrix

ODD_ORDER = ("dz1", "dz2", "dzb1", "dzb2", "eps1", "eps2", "eps")
ODD_VARS = ("eps1", "eps2", "eps")


class BasisElement:
    __slots__ = ("mono", "gens", "lie")

    def __init__(self, mono, gens, lie):
        self.mono = mono  # (m1, m2, mb1, mb2) exponents of z1,z2,zb1,zb2
        self.gens = gens  # frozenset of ODD_ORDER names present
        self.lie = lie

    def key(self):
        bits = tuple(1 if g in self.gens else 0 for g in ODD_ORDER)
        return (self.mono, bits, self.lie)

    def __repr__(self):
        names = ["z1", "z2", "zb1", "zb2"]
        parts = []
        for n, e in zip(names, self.mono):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append("%s^%d" % (n, e))
        parts.extend(g for g in ODD_ORDER if g in self.gens)
        return "*".join(parts) or "1"


class GradingLabel:
    __slots__ = ("p", "q", "parity", "cohom_degree", "row_id")

    def __init__(self, p, q, parity, cohom_degree, row_id=None):
        self.p = p
        self.q = q
        self.parity = parity
        self.cohom_degree = cohom_degree
        self.row_id = row_id


def grading_of(el: BasisElement) -> GradingLabel:
    p = sum(1 for g in ("dz1", "dz2") if g in el.gens)
    q = sum(1 for g in ("dzb1", "dzb2") if g in el.gens)
    n12 = sum(1 for g in ("eps1", "eps2") if g in el.gens)
    n_eps = 1 if "eps" in el.gens else 0
    deg = p + q + n12 - n_eps
    parity = (p + q + n12 + n_eps) % 2
    return GradingLabel(p, q, parity, deg)


class DolbeaultModule:
    def __init__(self, N: int, lie_dim: int = 1, odd_vars=(),
                 include_dz: bool = True):
        if N < 0:
            raise ValueError("truncation must be nonnegative")
        odd_vars = frozenset(odd_vars)
        if not odd_vars <= set(ODD_VARS):
            raise ValueError("odd variables must be among %s" % (ODD_VARS,))
        self.N = N
        self.lie_dim = lie_dim
        self.odd_vars = odd_vars
        self.include_dz = include_dz
        self.basis = []
        monos = sorted(all_monomials(N))
        form_gens = (("dz1", "dz2") if include_dz else ()) + ("dzb1", "dzb2")
        gen_sets = odd_subsets(form_gens
                               + tuple(v for v in ODD_ORDER if v in odd_vars))
        for mono in monos:
            for gens in gen_sets:
                for lie in range(lie_dim):
                    self.basis.append(BasisElement(mono, gens, lie))
        self.index = {el.key(): k for k, el in enumerate(self.basis)}
        self.gradings = [grading_of(el) for el in self.basis]

    @property
    def rank(self):
        return len(self.basis)

    def find(self, mono, gens, lie=0):
        return self.index[(tuple(mono),
                           tuple(1 if g in gens else 0 for g in ODD_ORDER),
                           lie)]

    def element(self, mono, gens, lie=0):
        return self.basis[self.find(mono, gens, lie)]

    def degrees(self):
        return sorted({g.cohom_degree for g in self.gradings})


def all_monomials(N):
    out = []
    for total in range(N + 1):
        for m1 in range(total + 1):
            for m2 in range(total - m1 + 1):
                for mb1 in range(total - m1 - m2 + 1):
                    mb2 = total - m1 - m2 - mb1
                    out.append((m1, m2, mb1, mb2))
    return out


def odd_subsets(names):
    out = []
    for k in range(len(names) + 1):
        for combo in combinations(names, k):
            out.append(frozenset(combo))
    # deterministic: by inclusion-bit tuple in the frozen order
    out.sort(key=lambda s: tuple(1 if g in s else 0 for g in ODD_ORDER))
    return out


def build_dolbeault(N, lie_dim=1, odd_vars=()):
    return DolbeaultModule(N, lie_dim, odd_vars)


# -- primitive operators as elementwise term generators -------------------

def insert_generator(gens, name):
    """Left wedge by one odd generator; returns (sign, new_gens) or None."""
    if name in gens:
        return None
    sign = 1
    for g in ODD_ORDER:
        if g == name:
            break
        if g in gens:
            sign = -sign
    return sign, gens | {name}


def remove_generator(gens, name):
    """Left contraction by one odd generator; (sign, new_gens) or None."""
    if name not in gens:
        return None
    sign = 1
    for g in ODD_ORDER:
        if g == name:
            break
        if g in gens:
            sign = -sign
    return sign, gens - {name}


def _deriv(mono, slot):
    e = mono[slot]
    if e == 0:
        return None
    new = list(mono)
    new[slot] -= 1
    return e, tuple(new)


def _first_order_terms(el, var_slot, gen_name):
    """Terms of (wedge gen_name) after d/d(variable in var_slot)."""
    d = _deriv(el.mono, var_slot)
    if d is None:
        return []
    count, mono = d
    ins = insert_generator(el.gens, gen_name)
    if ins is None:
        return []
    sign, gens = ins
    return [(Scalar(count * sign), mono, gens)]


def _terms_dbar(el):
    return (_first_order_terms(el, 2, "dzb1")
            + _first_order_terms(el, 3, "dzb2"))


def _terms_partial(el):
    return (_first_order_terms(el, 0, "dz1")
            + _first_order_terms(el, 1, "dz2"))


def _terms_d_eps(el):
    rem = remove_generator(el.gens, "eps")
    if rem is None:
        return []
    sign, gens = rem
    return [(Scalar(sign), el.mono, gens)]


def _terms_lefschetz(el):
    out = []
    for a, b in (("dz1", "dzb1"), ("dz2", "dzb2")):
        step = insert_generator(el.gens, b)
        if step is None:
            continue
        s1, gens = step
        step = insert_generator(gens, a)
        if step is None:
            continue
        s2, gens = step
        out.append((Scalar(s1 * s2), el.mono, gens))
    return out


def _terms_dual_lefschetz(el):
    out = []
    for a, b in (("dz1", "dzb1"), ("dz2", "dzb2")):
        step = remove_generator(el.gens, a)
        if step is None:
            continue
        s1, gens = step
        step = remove_generator(gens, b)
        if step is None:
            continue
        s2, gens = step
        out.append((Scalar(s1 * s2), el.mono, gens))
    return out


PRIMITIVES = {
    "dbar": _terms_dbar,
    "partial": _terms_partial,
    "d_z1": lambda el: _first_order_terms(el, 0, "dz1"),
    "d_z2": lambda el: _first_order_terms(el, 1, "dz2"),
    "dbar_z1": lambda el: _first_order_terms(el, 2, "dzb1"),
    "dbar_z2": lambda el: _first_order_terms(el, 3, "dzb2"),
    "d_eps": _terms_d_eps,
    "lefschetz_L": _terms_lefschetz,
    "dual_lefschetz_Lambda": _terms_dual_lefschetz,
    "eps_z1": lambda el: _first_order_terms(el, 0, "eps1"),
    "eps_z2": lambda el: _first_order_terms(el, 1, "eps2"),
    "identity": lambda el: [(ONE, el.mono, el.gens)],
}

# degree signature: change in cohom_degree per primitive
PRIMITIVE_DEGREE = {
    "dbar": 1, "partial": 1,
    "d_z1": 1, "d_z2": 1, "dbar_z1": 1, "dbar_z2": 1,
    "d_eps": 1, "eps_z1": 1, "eps_z2": 1,
    "lefschetz_L": 2, "dual_lefschetz_Lambda": -2,
    "identity": 0,
}


class OperatorSpec:
    """Homogeneous list of (coefficient, primitive name) terms."""

    def __init__(self, terms):
        self.terms = [(Scalar.of(c), name) for c, name in terms]
        degs = {PRIMITIVE_DEGREE[name] for _, name in self.terms}
        if len(degs) > 1:
            raise ValueError("mixed-degree operator spec: %r"
                             % sorted(degs))
        self.degree = degs.pop() if degs else 0

    @staticmethod
    def of(spec):
        if isinstance(spec, OperatorSpec):
            return spec
        if isinstance(spec, str):
            return OperatorSpec([(ONE, spec)])
        return OperatorSpec(spec)


def realize(spec, m: DolbeaultModule) -> SparseMatrix:
    spec = OperatorSpec.of(spec)
    needs = {"d_eps": "eps", "eps_z1": "eps1", "eps_z2": "eps2"}
    for _, name in spec.terms:
        var = needs.get(name)
        if var and var not in m.odd_vars:
            raise ValueError("%s needs the %s odd variable" % (name, var))
    out = SparseMatrix(m.rank, m.rank)
    for col, el in enumerate(m.basis):
        for coeff, name in spec.terms:
            for value, mono, gens in PRIMITIVES[name](el):
                row = m.find(mono, gens, el.lie)
                out.add_to(row, col, coeff * value)
    return out


def twisted_differential(params, m: DolbeaultModule) -> SparseMatrix:
    """realize(dbar + c_z1 d_z1 + c_z2 d_z2 + c_eps d_eps)."""
    terms = [(ONE, "dbar")]
    if params.c_z1:
        terms.append((params.c_z1, "d_z1"))
    if params.c_z2:
        terms.append((params.c_z2, "d_z2"))
    if params.c_eps:
        if "eps" not in m.odd_vars:
            raise ValueError("de Rham direction needs the eps variable")
        terms.append((params.c_eps, "d_eps"))
    return realize(OperatorSpec(terms), m)


def atlas_differential(terms, m: DolbeaultModule, subs=None) -> SparseMatrix:
    """Realize an atlas differential term list, substituting parameters."""
    from .scalars import parse_scalar
    subs = subs or {}
    resolved = []
    for coeff, name in terms:
        text = coeff
        for var, val in subs.items():
            text = text.replace(var, "(%s)" % val)
        resolved.append((_eval_coeff(text), name))
    return realize(OperatorSpec(resolved), m)


def _eval_coeff(text):
    """Evaluate a coefficient like 'b1+a*b2' after substitution."""
    from .scalars import parse_scalar
    text = text.replace(" ", "")
    # strip redundant outer parens around pure scalars, then fall back to
    # a tiny product-of-sums evaluator
    try:
        return parse_scalar(text.replace("(", "").replace(")", "")
                            if "*" not in text else text)
    except ValueError:
        pass
    total = ZERO
    for term in _split_top(text, "+-"):
        sign = ONE
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        prod = sign
        for factor in _split_top(term, "*"):
            if factor.startswith("(") and factor.endswith(")"):
                prod = prod * _eval_coeff(factor[1:-1])
            else:
                prod = prod * parse_scalar(factor)
        total = total + prod
    return total


def _split_top(text, seps):
    parts = []
    depth = 0
    start = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in seps and depth == 0 and k > start:
            if seps == "+-" and text[k - 1] in "+-*/(":
                continue
            parts.append(text[start:k])
            start = k if seps == "+-" else k + 1
    parts.append(text[start:])
    return parts


def check_d_squared(d: SparseMatrix, m: DolbeaultModule = None):
    """None when d*d = 0; otherwise a witness basis index and its image."""
    from .sparse import mat_mul
    sq = mat_mul(d, d)
    if sq.is_zero():
        return None
    col = min(c for _, c in sq.entries)
    image = {r: v for (r, c), v in sq.entries.items() if c == col}
    witness = {"basis_index": col, "image": image}
    if m is not None:
        witness["basis_element"] = repr(m.basis[col])
    return witness


def cohomology_dims(d: SparseMatrix, m: DolbeaultModule, split=None):
    """Exact cohomology dimension per degree (or per (s, degree) piece).

    split="diagonal" refines by s = polynomial degree + q, which the pure
    dbar differential preserves; inhomogeneous differentials are rejected.
    """
    from .sparse import rank as mat_rank

    def piece_key(k):
        g = m.gradings[k]
        if split is None:
            return g.cohom_degree
        if split == "diagonal":
            el = m.basis[k]
            return (sum(el.mono) + g.q, g.cohom_degree)
        raise ValueError("unknown splitting selector %r" % split)

    groups = {}
    for k in range(m.rank):
        groups.setdefault(piece_key(k), []).append(k)
    # homogeneity: every matrix entry must stay within the expected shift
    for (r, c) in d.entries:
        kr, kc = piece_key(r), piece_key(c)
        if split is None:
            if kr != kc + 1:
                raise ValueError("differential not homogeneous of degree 1")
        else:
            if kr[0] != kc[0] or kr[1] != kc[1] + 1:
                raise ValueError("differential inhomogeneous for the "
                                 "selected splitting")

    def block(rows_keys, cols_keys):
        rows = {k: i for i, k in enumerate(rows_keys)}
        cols = {k: i for i, k in enumerate(cols_keys)}
        mat = SparseMatrix(len(rows), len(cols))
        for (r, c), v in d.entries.items():
            if r in rows and c in cols:
                mat.entries[(rows[r], cols[c])] = v
        return mat

    def successor(key):
        if split is None:
            return key + 1
        return (key[0], key[1] + 1)

    def predecessor(key):
        if split is None:
            return key - 1
        return (key[0], key[1] - 1)

    dims = {}
    for key, idxs in groups.items():
        out_block = block(groups.get(successor(key), []), idxs)
        in_block = block(idxs, groups.get(predecessor(key), []))
        kernel_dim = len(idxs) - mat_rank(out_block)
        dims[key] = kernel_dim - mat_rank(in_block)
    return {k: v for k, v in sorted(dims.items()) if v}


def kw_isomorphism(m: DolbeaultModule):
    """Bijection Omega^{p,q}[residual odds] -> Omega^{0,q}[eps1,eps2,...].

    Input m is the target module and must carry eps1, eps2.  Returns
    (source_module, phi) with phi the signed permutation matrix sending
    dz_i to eps_i; the sign is (-1)^{p*q} so realized differentials are
    intertwined exactly (phi is orthogonal: inverse = transpose).
    """
    if not {"eps1", "eps2"} <= m.odd_vars:
        raise ValueError("target module needs eps1 and eps2")
    if m.include_dz:
        raise ValueError("target module must be built without dz generators")
    source = DolbeaultModule(m.N, m.lie_dim,
                             m.odd_vars - {"eps1", "eps2"})
    phi = SparseMatrix(m.rank, source.rank)
    swap = {"dz1": "eps1", "dz2": "eps2"}
    for col, el in enumerate(source.basis):
        gens = frozenset(swap.get(g, g) for g in el.gens)
        g = grading_of(el)
        sign = -1 if (g.p * g.q) % 2 else 1
        row = m.find(el.mono, gens, el.lie)
        phi.entries[(row, col)] = Scalar(sign)
    return source, phi

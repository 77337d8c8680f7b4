"""Multiplet complexes: the 38-cell diagram over truncated forms on C^2.

Each cell is a row of the source multiplet carrying one (p,q)-form fiber
(the "11par" fiber is the one-dimensional span of the Kahler form inside
Omega^{1,1}).  Arrows are operator words realized on a scratch Dolbeault
module; "par" endpoints are handled by embedding (coordinate -> f*omega)
and projecting (eta -> Lambda(eta)/2).
"""

from __future__ import annotations

import json
from importlib import resources

from .dolbeault import (DolbeaultModule, all_monomials, build_dolbeault,
                        insert_generator, realize, remove_generator, _deriv)
from .scalars import ONE, Scalar, ZERO, parse_scalar
from .sparse import SparseMatrix, mat_mul

FORM_FIBERS = {
    "00": [frozenset()],
    "10": [frozenset({"dz1"}), frozenset({"dz2"})],
    "01": [frozenset({"dzb1"}), frozenset({"dzb2"})],
    "20": [frozenset({"dz1", "dz2"})],
    "02": [frozenset({"dzb1", "dzb2"})],
    "11": [frozenset({"dz1", "dzb1"}), frozenset({"dz1", "dzb2"}),
           frozenset({"dz2", "dzb1"}), frozenset({"dz2", "dzb2"})],
    "21": [frozenset({"dz1", "dz2", "dzb1"}), frozenset({"dz1", "dz2", "dzb2"})],
    "12": [frozenset({"dz1", "dzb1", "dzb2"}), frozenset({"dz2", "dzb1", "dzb2"})],
    "22": [frozenset({"dz1", "dz2", "dzb1", "dzb2"})],
    "11par": "par",
}

OMEGA_GENS = (frozenset({"dz1", "dzb1"}), frozenset({"dz2", "dzb2"}))

_DESCRIPTOR = None


def load_descriptor():
    global _DESCRIPTOR
    if _DESCRIPTOR is None:
        text = resources.files("twistbv").joinpath("data/multiplet.json").read_text()
        _DESCRIPTOR = json.loads(text)
    return _DESCRIPTOR


# -- token matrices on the scratch module ---------------------------------

_DERIV_SLOTS = {"d1": 0, "d2": 1, "db1": 2, "db2": 3}
_WEDGES = {"w1": "dz1", "w2": "dz2", "wb1": "dzb1", "wb2": "dzb2"}
_CONTRACTIONS = {"c1": "dz1", "c2": "dz2", "cb1": "dzb1", "cb2": "dzb2"}


def token_matrix(name, scratch: DolbeaultModule) -> SparseMatrix:
    if name in ("dbar", "partial", "d_z1", "d_z2", "dbar_z1", "dbar_z2",
                "identity"):
        return realize(name, scratch)
    if name == "id":
        return SparseMatrix.identity(scratch.rank)
    if name == "L":
        return realize("lefschetz_L", scratch)
    if name == "Lam":
        return realize("dual_lefschetz_Lambda", scratch)
    out = SparseMatrix(scratch.rank, scratch.rank)
    if name in _DERIV_SLOTS:
        slot = _DERIV_SLOTS[name]
        for col, el in enumerate(scratch.basis):
            d = _deriv(el.mono, slot)
            if d is None:
                continue
            count, mono = d
            out.add_to(scratch.find(mono, el.gens, el.lie), col, Scalar(count))
        return out
    if name in _WEDGES:
        gen = _WEDGES[name]
        for col, el in enumerate(scratch.basis):
            step = insert_generator(el.gens, gen)
            if step is None:
                continue
            sign, gens = step
            out.add_to(scratch.find(el.mono, gens, el.lie), col, Scalar(sign))
        return out
    if name in _CONTRACTIONS:
        gen = _CONTRACTIONS[name]
        for col, el in enumerate(scratch.basis):
            step = remove_generator(el.gens, gen)
            if step is None:
                continue
            sign, gens = step
            out.add_to(scratch.find(el.mono, gens, el.lie), col, Scalar(sign))
        return out
    raise ValueError("unknown operator token %r" % name)


MIRROR_TOKENS = {
    "dbar": "partial", "partial": "dbar",
    "d1": "db1", "db1": "d1", "d2": "db2", "db2": "d2",
    "w1": "wb1", "wb1": "w1", "w2": "wb2", "wb2": "w2",
    "c1": "cb1", "cb1": "c1", "c2": "cb2", "cb2": "c2",
    "d_z1": "dbar_z1", "dbar_z1": "d_z1",
    "d_z2": "dbar_z2", "dbar_z2": "d_z2",
    "L": "L", "Lam": "Lam", "id": "id",
}
# swapping dz_i with dzbar_i negates the Kahler form, so L and Lam flip sign
MIRROR_SIGN_TOKENS = {"L", "Lam"}


def mirror_word(word, coeff):
    tokens = word.split("*")
    sign = 1
    out = []
    for t in tokens:
        out.append(MIRROR_TOKENS[t])
        if t in MIRROR_SIGN_TOKENS:
            sign = -sign
    coeff = coeff if sign > 0 else -coeff
    return "*".join(out), coeff


def mirror_form(form):
    if form == "11par":
        return form
    return form[1] + form[0]


class MultipletComplex:
    """The 38-cell complex realized at a polynomial truncation."""

    def __init__(self, N, which="holo_twisted", mirrored=False):
        self.N = N
        self.which = which
        self.mirrored = mirrored
        desc = load_descriptor()
        self.cells = []
        for cell in desc["cells"]:
            cell = dict(cell)
            if mirrored:
                cell["form"] = mirror_form(cell["form"])
                if cell["small"]:
                    cell["small"] = {"copy": cell["small"]["copy"],
                                     "pq": cell["small"]["pq"][::-1]}
            self.cells.append(cell)
        self.cell_by_id = {c["id"]: c for c in self.cells}
        self.scratch = DolbeaultModule(N)
        self._tokens = {}
        monos = sorted(all_monomials(N))
        self.monos = monos
        self.offsets = {}
        self.basis = []  # (cell_id, mono, fiber_index)
        for cell in self.cells:
            self.offsets[cell["id"]] = len(self.basis)
            for mono in monos:
                for fi in range(self.fiber_dim(cell["form"])):
                    self.basis.append((cell["id"], mono, fi))
        self.rank = len(self.basis)
        self.degrees = [self.cell_by_id[cid]["deg_alpha"] + 1
                        for cid, _, _ in self.basis]
        self._arrow_cache = {}

    # -- fibers ----------------------------------------------------------

    def fiber_dim(self, form):
        fib = FORM_FIBERS[form]
        return 1 if fib == "par" else len(fib)

    def index(self, cell_id, mono, fi=0):
        cell = self.cell_by_id[cell_id]
        mi = self.monos.index(tuple(mono))
        return self.offsets[cell_id] + mi * self.fiber_dim(cell["form"]) + fi

    def token(self, name):
        if name not in self._tokens:
            self._tokens[name] = token_matrix(name, self.scratch)
        return self._tokens[name]

    def word_matrix(self, word):
        # compose right-to-left: "L*partial" means L after partial
        tokens = word.split("*")
        mat = self.token(tokens[-1])
        for name in reversed(tokens[:-1]):
            mat = mat_mul(self.token(name), mat)
        return mat

    def embed_scratch(self, cell, mono, fi):
        """Cell basis element -> vector in the scratch module."""
        form = cell["form"]
        fib = FORM_FIBERS[form]
        if fib == "par":
            return {self.scratch.find(mono, g): ONE for g in OMEGA_GENS}
        return {self.scratch.find(mono, fib[fi]): ONE}

    def read_scratch(self, cell, vec):
        """Scratch vector -> {(mono, fiber_index): coeff} in the cell fiber."""
        form = cell["form"]
        fib = FORM_FIBERS[form]
        out = {}
        if fib == "par":
            for idx, val in vec.items():
                el = self.scratch.basis[idx]
                if el.gens in OMEGA_GENS:
                    key = (el.mono, 0)
                    half = val / Scalar(2)
                    out[key] = out.get(key, ZERO) + half
                elif len(el.gens) == 2 and any(
                        g in el.gens for g in ("dz1", "dz2")) and any(
                        g in el.gens for g in ("dzb1", "dzb2")):
                    continue  # component orthogonal to omega: projected away
                else:
                    raise ValueError("image leaves Omega^{1,1} for a par cell")
            return {k: v for k, v in out.items() if v}
        lookup = {g: i for i, g in enumerate(fib)}
        for idx, val in vec.items():
            el = self.scratch.basis[idx]
            if el.gens not in lookup:
                raise ValueError("image leaves the %s fiber of cell %s"
                                 % (form, cell["id"]))
            out[(el.mono, lookup[el.gens])] = val
        return out

    def arrow_matrix(self, arrow) -> SparseMatrix:
        key = (arrow["from"], arrow["to"], arrow["word"], arrow["coeff"])
        if key in self._arrow_cache:
            return self._arrow_cache[key]
        src = self.cell_by_id[arrow["from"]]
        tgt = self.cell_by_id[arrow["to"]]
        coeff = parse_scalar(arrow["coeff"])
        w = self.word_matrix(arrow["word"])
        out = SparseMatrix(self.rank, self.rank)
        for mi, mono in enumerate(self.monos):
            for fi in range(self.fiber_dim(src["form"])):
                col = self.index(src["id"], mono, fi)
                vec = w.apply(self.embed_scratch(src, mono, fi))
                for (mono2, fj), val in self.read_scratch(tgt, vec).items():
                    out.add_to(self.index(tgt["id"], mono2, fj), col,
                               coeff * val)
        self._arrow_cache[key] = out
        return out

    def family(self, name, scale=None) -> SparseMatrix:
        desc = load_descriptor()
        arrows = desc["arrows"][name]
        out = SparseMatrix(self.rank, self.rank)
        for arrow in arrows:
            if self.mirrored:
                word, coeff = mirror_word(arrow["word"],
                                          parse_scalar(arrow["coeff"]))
                arrow = dict(arrow, word=word, coeff=coeff.text())
            out = out + self.arrow_matrix(arrow)
        if scale is not None:
            out = out.scale(scale)
        return out

    def differential(self, families=("black", "blue", "green"),
                     extra=None) -> SparseMatrix:
        out = SparseMatrix(self.rank, self.rank)
        for name in families:
            out = out + self.family(name)
        if extra is not None:
            out = out + extra
        return out

    def deformed_differential(self, params) -> SparseMatrix:
        """Differential deformed by supersymmetry parameters (a, b1, b2).

        The epsilon-direction family enters with coefficient b1 + a*b2,
        matching the quadratic term of the parameter map.
        """
        a = params.a
        b1 = params.b1
        b2 = params.b2
        out = self.differential()
        if a:
            out = out + self.family("d_a", scale=a)
        if b2:
            out = out + self.family("d_b2", scale=b2)
        ceps = b1 + a * b2
        if ceps:
            out = out + (self.family("d_b1")
                         + self.family("d_b1_purple")).scale(ceps)
        return out

    # -- the small side and the structure maps ---------------------------

    def small_module(self):
        return build_dolbeault(self.N, 1, odd_vars={"eps"})

    def small_cell_of(self, el):
        """Small-module element -> (cell, fiber gens) under the slot map."""
        copy = "eps" if "eps" in el.gens else "plain"
        gens = el.gens - {"eps"}
        p = sum(1 for g in ("dz1", "dz2") if g in gens)
        q = sum(1 for g in ("dzb1", "dzb2") if g in gens)
        for cell in self.cells:
            sm = cell["small"]
            if sm and sm["copy"] == copy and tuple(sm["pq"]) == (p, q):
                return cell, gens
        raise ValueError("no retained cell for copy=%s (p,q)=(%d,%d)"
                         % (copy, p, q))

    def inclusion_base(self) -> SparseMatrix:
        small = self.small_module()
        out = SparseMatrix(self.rank, small.rank)
        for col, el in enumerate(small.basis):
            cell, gens = self.small_cell_of(el)
            fib = FORM_FIBERS[cell["form"]]
            fi = fib.index(gens)
            out.entries[(self.index(cell["id"], el.mono, fi), col)] = ONE
        return out

    def retract_maps(self):
        """(i, p, h) matrices of the shipped holomorphic retraction."""
        i0 = self.inclusion_base()
        p0 = i0.transpose()
        i = i0 + mat_mul(self.family("i_extra"), i0)
        p = p0 + mat_mul(p0, self.family("p_extra"))
        h = self.family("h")
        return i, p, h

    def small_differential(self) -> SparseMatrix:
        name = "partial" if self.mirrored else "dbar"
        return realize(name, self.small_module())

    def check_degrees(self, d: SparseMatrix, shift=1):
        for (r, c) in d.entries:
            if self.degrees[r] != self.degrees[c] + shift:
                return (r, c)
        return None


class CochainComplex:
    """A module with a distinguished differential and metadata."""

    def __init__(self, module, differential, label, metadata=None):
        self.module = module
        self.differential = differential
        self.label = label
        self.metadata = metadata or {}


# branching bookkeeping for the underlying 4d multiplet, per fiber ranks
BRANCHING = {
    "omega0": {"total": 1, "parts": [1]},
    "omega1": {"total": 4, "parts": [2, 2]},        # (0,1) + (1,0)
    "omega2_plus": {"total": 3, "parts": [1, 1, 1]},  # (0,2) + (2,0) + par
    "w_space": {"total": 4, "parts": [1, 1, 2]},      # S+ piece splits off
}


def build_multiplet_complex(which, N=1):
    if which == "bv_ss":
        mc = MultipletComplex(N, which)
        d = mc.differential(families=("black",))
        meta = {"branching": BRANCHING,
                "rows": sorted({c["piece"] for c in mc.cells})}
        return CochainComplex(mc, d, which, meta)
    if which == "holo_u2":
        mc = MultipletComplex(N, which)
        d = mc.differential(families=("black",))
        meta = {"rows": sorted({c["row"] for c in mc.cells})}
        return CochainComplex(mc, d, which, meta)
    if which == "holo_twisted":
        mc = MultipletComplex(N, which)
        return CochainComplex(mc, mc.differential(), which)
    if which == "holo_prime_twisted":
        mc = MultipletComplex(N, which, mirrored=True)
        return CochainComplex(mc, mc.differential(), which)
    if which == "q_prime_deformation":
        mc = MultipletComplex(N, which)
        d = mc.differential() + mc.family("d_b1") + mc.family("d_b1_purple")
        return CochainComplex(mc, d, which)
    raise ValueError("unknown multiplet descriptor %r" % which)


def check_d_squared(c: CochainComplex):
    sq = mat_mul(c.differential, c.differential)
    if sq.is_zero():
        return None
    col = min(col for _, col in sq.entries)
    witness = {"basis_index": col,
               "basis_element": c.module.basis[col],
               "image": {r: v.text() for (r, cc), v in sq.entries.items()
                         if cc == col}}
    return witness


# -- supercharge actions and the quadratic correction ---------------------

TERM_FAMILIES = {
    ("a1", "e2"): ("black", "blue", "green"),
    ("a2", "e1"): ("d_b1",),
    ("a1v", "f2s"): ("d_a",),
    ("a2v", "f1s"): ("d_b2",),
}


def supercharge_action(q, mc: MultipletComplex):
    """Arrow lists (algebraic part, first-order part) for a supercharge.

    Supported supercharges are combinations of the four distinguished
    generators; anything else has no shipped diagram action.
    """
    desc = load_descriptor()
    algebraic, first_order = [], []
    for (spin, w), coeff in q.terms().items():
        fams = TERM_FAMILIES.get((spin, w))
        if fams is None:
            raise ValueError("no diagram action for the term %s*%s; supported "
                             "terms: %s" % (spin, w,
                                            sorted(TERM_FAMILIES)))
        for fam in fams:
            for arrow in desc["arrows"][fam]:
                scaled = dict(arrow)
                scaled["coeff"] = (coeff * parse_scalar(arrow["coeff"])).text()
                has_deriv = any(t in ("dbar", "partial", "d1", "d2", "db1",
                                      "db2", "d_z1", "d_z2", "dbar_z1",
                                      "dbar_z2")
                                for t in arrow["word"].split("*"))
                (first_order if has_deriv else algebraic).append(scaled)
    return algebraic, first_order


def realize_arrows(arrows, mc: MultipletComplex) -> SparseMatrix:
    out = SparseMatrix(mc.rank, mc.rank)
    for arrow in arrows:
        out = out + mc.arrow_matrix(arrow)
    return out


def fix_linfty_correction(mc: MultipletComplex,
                          partial_differential: SparseMatrix,
                          candidates=None):
    """Solve the identity-arrow correction making the differential square.

    ``partial_differential`` is a deformed differential that fails to
    square to zero; the correction is sought in the shipped identity
    slots.  Returns the solved arrow list.  Raises when the linear
    system is inconsistent (descriptor/sign error) or under-determined.
    """
    desc = load_descriptor()
    if candidates is None:
        candidates = [dict(a, coeff="1")
                      for a in desc["arrows"]["d_b1_purple"]]
    if not candidates:
        raise ValueError("no candidate correction slots shipped")
    mats = [mc.arrow_matrix(a) for a in candidates]
    # purple arrows never compose with one another (disjoint supports)
    for ma in mats:
        for mb in mats:
            if not mat_mul(ma, mb).is_zero():
                raise ValueError("correction ansatz is not square-free")
    d0 = partial_differential
    base = mat_mul(d0, d0)
    cross = [mat_mul(d0, m) + mat_mul(m, d0) for m in mats]
    # assemble least structure: rows = matrix positions, cols = unknowns
    keys = sorted(set(base.entries) | {k for m in cross for k in m.entries})
    key_index = {k: r for r, k in enumerate(keys)}
    system = SparseMatrix(len(keys), len(mats))
    rhs = {}
    for k, v in base.entries.items():
        rhs[key_index[k]] = -v
    for j, m in enumerate(cross):
        for k, v in m.entries.items():
            system[key_index[k], j] = v
    from .sparse import kernel_basis, solve
    x = solve(system, rhs)
    if x is None:
        raise ValueError("no square-zero correction exists for this "
                         "descriptor: inconsistent linear system")
    if kernel_basis(system):
        raise ValueError("correction is not unique: ansatz under-constrained")
    solved = []
    for j, arrow in enumerate(candidates):
        coeff = x.get(j, ZERO)
        if coeff:
            solved.append(dict(arrow, coeff=coeff.text()))
    return solved

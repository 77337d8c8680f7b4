"""Deformation retracts from the 38-cell complex onto the small model.

The small model is the truncated (0,*)-forms with one extra odd
variable; the retraction data (i, p, h) is shipped with the cell
diagram and satisfies the standard side conditions.
"""

from .multiplets import MultipletComplex
from .sparse import SparseMatrix, mat_mul


class Retraction:
    """A deformation retract (big, small, d_big, d_small, i, p, h)."""

    def __init__(self, big, small, d_big, d_small, i, p, h):
        self.big = big
        self.small = small
        self.d_big = d_big
        self.d_small = d_small
        self.i = i
        self.p = p
        self.h = h


def holo_retract(N) -> Retraction:
    mc = MultipletComplex(N)
    i, p, h = mc.retract_maps()
    return Retraction(mc, mc.small_module(), mc.differential(),
                      mc.small_differential(), i, p, h)


def holo_prime_retract(N) -> Retraction:
    mc = MultipletComplex(N, mirrored=True)
    i, p, h = mc.retract_maps()
    return Retraction(mc, mc.small_module(), mc.differential(),
                      mc.small_differential(), i, p, h)


def _witness(residual: SparseMatrix):
    col = min(c for _, c in residual.entries)
    image = {r: v for (r, c), v in residual.entries.items() if c == col}
    return {"basis_index": col, "image": image}


def verify_retract(r: Retraction) -> dict:
    """Check the retraction identities; returns a pass/fail report.

    Each identity maps to a boolean; failing identities also contribute
    a witness column (first basis index with a nonzero residual).
    """
    n_big = r.d_big.n_rows
    n_small = r.d_small.n_rows
    residuals = {
        "d_big_squares": mat_mul(r.d_big, r.d_big),
        "d_small_squares": mat_mul(r.d_small, r.d_small),
        "p_i_is_identity": (mat_mul(r.p, r.i)
                            - SparseMatrix.identity(n_small)),
        "i_chain_map": mat_mul(r.d_big, r.i) - mat_mul(r.i, r.d_small),
        "p_chain_map": mat_mul(r.p, r.d_big) - mat_mul(r.d_small, r.p),
        "homotopy_identity": (mat_mul(r.d_big, r.h) + mat_mul(r.h, r.d_big)
                              - mat_mul(r.i, r.p)
                              + SparseMatrix.identity(n_big)),
    }
    report = {name: res.is_zero() for name, res in residuals.items()}
    report["ok"] = all(report.values())
    report["witnesses"] = [dict(_witness(res), identity=name)
                           for name, res in residuals.items()
                           if not res.is_zero()]
    return report


def side_condition_report(r: Retraction) -> dict:
    report = {
        "h_squared_zero": mat_mul(r.h, r.h).is_zero(),
        "h_i_zero": mat_mul(r.h, r.i).is_zero(),
        "p_h_zero": mat_mul(r.p, r.h).is_zero(),
    }
    report["ok"] = all(report.values())
    return report

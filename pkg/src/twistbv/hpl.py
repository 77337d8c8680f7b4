"""Homotopy transfer of deformed differentials onto the small model.

A perturbation of the big differential is pushed through a retraction
with the usual recursion: the transferred differential is

    d' = d + p (delta + delta h delta + ...) i

and the retraction data deforms along.  The geometric series must
terminate; termination is checked constructively, not assumed.
"""

import json
from importlib import resources

from .dolbeault import realize
from .multiplets import MultipletComplex
from .retracts import Retraction, holo_prime_retract, holo_retract
from .scalars import Scalar, parse_scalar
from .sparse import SparseMatrix, mat_mul
from .susy import TwistParameters

MAX_NEUMANN_ORDER = 3

_SCENARIOS = None


def load_scenarios():
    global _SCENARIOS
    if _SCENARIOS is None:
        text = resources.files("twistbv").joinpath(
            "data/scenarios.json").read_text()
        _SCENARIOS = json.loads(text)["scenarios"]
    return _SCENARIOS


class Perturbation:
    """A degree +1 perturbation of the big differential."""

    def __init__(self, delta: SparseMatrix, label=""):
        self.delta = delta
        self.label = label

    def check_maurer_cartan(self, d_big: SparseMatrix):
        new = d_big + self.delta
        return mat_mul(new, new).is_zero()


def perturb(r: Retraction, pert: Perturbation,
            max_order=MAX_NEUMANN_ORDER) -> Retraction:
    """Transfer a perturbation through a retraction.

    Raises if the series delta (h delta)^k fails to terminate within
    ``max_order`` steps; the shipped deformations all terminate by
    order two.
    """
    delta = pert.delta
    # A = delta + delta h delta + ...; assembled column-wise on i and h
    a_i = mat_mul(delta, r.i)
    a_h = mat_mul(delta, r.h)
    total_i = SparseMatrix(delta.n_rows, r.i.n_cols)
    total_h = SparseMatrix(delta.n_rows, r.h.n_cols)
    order = 0
    while not (a_i.is_zero() and a_h.is_zero()):
        order += 1
        if order > max_order:
            raise ValueError("perturbation series did not terminate "
                             "within %d orders" % max_order)
        total_i = total_i + a_i
        total_h = total_h + a_h
        dh = mat_mul(delta, r.h)
        a_i = mat_mul(dh, a_i)
        a_h = mat_mul(dh, a_h)
    return Retraction(
        r.big, r.small,
        r.d_big + delta,
        r.d_small + mat_mul(r.p, total_i),
        r.i + mat_mul(r.h, total_i),
        r.p + mat_mul(r.p, total_h),
        r.h + mat_mul(r.h, total_h),
    )


def _scalar(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar(x)


def deformation_delta(mc: MultipletComplex, a, b1, b2) -> SparseMatrix:
    """Big-side deformation for parameters in the complex's own frame."""
    a, b1, b2 = _scalar(a), _scalar(b1), _scalar(b2)
    out = SparseMatrix(mc.rank, mc.rank)
    eps_family = mc.family("d_b1") + mc.family("d_b1_purple")
    if not mc.mirrored:
        if a:
            out = out + mc.family("d_a", scale=a)
        if b2:
            out = out + mc.family("d_b2", scale=b2)
        ceps = b1 + a * b2
    else:
        # mirrored frame: the roles of the two torus directions swap
        if a:
            out = out + mc.family("d_a", scale=a)
        if b1:
            out = out + mc.family("d_b2", scale=b1)
        ceps = b2 + a * b1
    if ceps:
        out = out + eps_family.scale(ceps)
    return out


def expected_small_differential(mc: MultipletComplex, small, a, b1, b2):
    a, b1, b2 = _scalar(a), _scalar(b1), _scalar(b2)
    if not mc.mirrored:
        return realize(
            [(Scalar(1), "dbar"), (a, "d_z1"), (-b2, "d_z2")], small) \
            + realize("d_eps", small).scale(b1 + a * b2)
    return realize(
        [(Scalar(1), "partial"), (a, "dbar_z1"), (-b1, "dbar_z2")], small) \
        + realize("d_eps", small).scale(b2 + a * b1)


def replay_theorem(name, N, values):
    """Replay one transfer statement at truncation N.

    ``values`` maps active parameter names to scalar literals.  Returns
    a report with exact pass/fail fields.
    """
    scenario = next(s for s in load_scenarios() if s["name"] == name)
    params = {"a": Scalar(0), "b1": Scalar(0), "b2": Scalar(0)}
    for k in scenario["active"]:
        v = values[k]
        params[k] = v if isinstance(v, Scalar) else parse_scalar(str(v))
    r = holo_prime_retract(N) if scenario["mirrored"] else holo_retract(N)
    mc = r.big
    delta = deformation_delta(mc, params["a"], params["b1"], params["b2"])
    pert = Perturbation(delta, label=name)
    report = {"name": name, "N": N,
              "params": {k: params[k].text() for k in scenario["active"]}}
    report["maurer_cartan"] = pert.check_maurer_cartan(r.d_big)
    deformed = perturb(r, pert)
    expected = expected_small_differential(
        mc, r.small, params["a"], params["b1"], params["b2"])
    report["transferred_matches"] = (deformed.d_small - expected).is_zero()
    report["small_squares"] = mat_mul(deformed.d_small,
                                      deformed.d_small).is_zero()
    report["deformed_p_i_identity"] = (
        mat_mul(deformed.p, deformed.i)
        == SparseMatrix.identity(r.small.rank))
    report["ok"] = (report["maurer_cartan"] and report["transferred_matches"]
                    and report["small_squares"]
                    and report["deformed_p_i_identity"])
    return report


def consistency_web(N, a, b1, b2):
    """Specializations of the three-parameter transfer agree.

    The transferred differentials at (a,b1,b2), (a,b1,0), (0,b1,b2) and
    (0,b1,0) are computed independently; their alternating sum must
    isolate the quadratic cross term a*b2 in the epsilon direction.
    """
    a, b1, b2 = _scalar(a), _scalar(b1), _scalar(b2)
    zero = Scalar(0)
    r = holo_retract(N)
    mc = r.big

    def transferred(aa, bb1, bb2):
        pert = Perturbation(deformation_delta(mc, aa, bb1, bb2))
        return perturb(r, pert).d_small

    t22 = transferred(a, b1, b2)
    t21 = transferred(a, b1, zero)
    topp = transferred(zero, b1, b2)
    t20 = transferred(zero, b1, zero)
    report = {
        "thm_21": (t21 - expected_small_differential(
            mc, r.small, a, b1, zero)).is_zero(),
        "thm_21_opposite": (topp - expected_small_differential(
            mc, r.small, zero, b1, b2)).is_zero(),
        "thm_20": (t20 - expected_small_differential(
            mc, r.small, zero, b1, zero)).is_zero(),
        "cross_term": (t22 - t21 - topp + t20
                       - realize("d_eps", r.small).scale(a * b2)).is_zero(),
    }
    report["ok"] = all(report.values())
    return report

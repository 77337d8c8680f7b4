"""End-to-end acceptance suite.

Each test covers one numbered criterion, checks it exactly (zero
tolerance), enforces the runtime bound where one applies, and prints a
single pass line on success.
"""

import io
import random
import sys
import time
from fractions import Fraction

from test_susy import dense_rank_oracle, gamma_oracle, random_supercharge

from twistbv.atlas import alias_point, load_atlas
from twistbv.cli import main as cli_main
from twistbv.dolbeault import (DolbeaultModule, atlas_differential,
                               check_d_squared)
from twistbv.hpl import Perturbation, load_scenarios, replay_theorem
from twistbv.poly import TruncPoly
from twistbv.retracts import (holo_prime_retract, holo_retract,
                              verify_retract)
from twistbv.scalars import I, ONE, Scalar
from twistbv.spectral import (TWISTOR_SUPPORT, degeneration_check, e3_dims,
                              page, possible_d2_arrows)
from twistbv.sparse import mat_mul
from twistbv.susy import (CouplingConstant, basis_supercharges,
                          canonical_parameter, is_square_zero, kappa_level,
                          rank_type, susy_to_deformation)

from complex_factory import make_random_double_complex


def _done(number, label, start, bound=None):
    elapsed = time.perf_counter() - start
    if bound is not None:
        assert elapsed < bound, (
            "criterion %d exceeded its %.0fs bound: %.1fs"
            % (number, bound, elapsed))
    print("criterion %d (%s): pass in %.2fs" % (number, label, elapsed))


def test_criterion_1_classification():
    start = time.perf_counter()
    charges = basis_supercharges()
    assert len(charges) == 16
    rng = random.Random(1001)
    charges += [random_supercharge(rng, density=rng.random())
                for _ in range(200)]
    for q in charges:
        assert is_square_zero(q) == gamma_oracle(q, q).is_zero()
        rt = rank_type(q)
        assert rt.p == dense_rank_oracle(q.a_plus)
        assert rt.q == dense_rank_oracle(q.a_minus)
    _done(1, "classification", start, bound=5.0)


def test_criterion_2_atlas_table():
    start = time.perf_counter()
    atlas = load_atlas()
    assert len(atlas["twists"]) == 12
    m = DolbeaultModule(3, 1, odd_vars={"eps"})
    for row in atlas["twists"]:
        subs = {"t": "2/3"} if any("t" in c for c, _ in row["differential"]) \
            else None
        d = atlas_differential(row["differential"], m, subs)
        assert check_d_squared(d, m) is None, row["id"]
    c = CouplingConstant(I)
    from twistbv.susy import identify, s_duality
    pairs = [(row["id"], row["dual"]) for row in atlas["twists"]
             if row["dual"] != "self"]
    assert sorted(pairs) == [("J_A", "(-K)_B"), ("J_B", "(-K)_A"),
                             ("K_A", "J_B"), ("K_B", "J_A")]
    for name, dual in pairs:
        moved = s_duality(alias_point(name), c)
        assert alias_point(dual) in identify(moved, "antipodal"), name
    # this pair matches on the nose, no identification involved
    assert s_duality(alias_point("K_A"), c) == alias_point("J_B")
    _done(2, "atlas table and duality", start, bound=60.0)


def test_criterion_3_retracts():
    start = time.perf_counter()
    for factory in (holo_retract, holo_prime_retract):
        for n in (0, 1, 2):
            rep = verify_retract(factory(n))
            assert rep["ok"], (factory.__name__, n, rep)
    # mutation: flip one sign in the homotopy and demand a witness
    r = holo_retract(1)
    (row, col), value = next(iter(sorted(r.h.entries.items())))
    r.h.entries[(row, col)] = -value
    rep = verify_retract(r)
    assert not rep["ok"]
    assert rep["witnesses"], rep
    assert all("basis_index" in w and w["image"] for w in rep["witnesses"])
    _done(3, "holomorphic retracts", start, bound=120.0)


def _seeded_params(name, k, active):
    rng = random.Random(sum(map(ord, name)) * 100 + k)
    values = {}
    for key in active:
        v = Scalar(Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
                   Fraction(rng.randint(-2, 2)))
        if not v:
            v = Scalar(1)
        values[key] = v
    return values


def test_criterion_4_transfer_replays():
    start = time.perf_counter()
    scenarios = load_scenarios()
    assert len(scenarios) == 9
    for scenario in scenarios:
        name = scenario["name"]
        for n in (1, 2, 3):
            for k in range(3):
                values = _seeded_params(name, k, scenario["active"])
                rep = replay_theorem(name, n, values)
                assert rep["ok"], (name, n, k, rep)
    # negative control: drop the L-infinity correction from thm_20
    from twistbv.multiplets import MultipletComplex
    mc = MultipletComplex(1)
    bare = mc.differential() + mc.family("d_b1", scale=Scalar(Fraction(1, 2)))
    sq = mat_mul(bare, bare)
    assert not sq.is_zero()
    witness_col = min(c for _, c in sq.entries)
    witness = {r: v for (r, c), v in sq.entries.items() if c == witness_col}
    assert witness
    _done(4, "transfer replays", start, bound=600.0)


def test_criterion_5_quadratic_map():
    start = time.perf_counter()
    a = TruncPoly.var("a")
    b1 = TruncPoly.var("b1")
    b2 = TruncPoly.var("b2")
    c_z1, c_z2, c_eps = susy_to_deformation(a, b1, b2)
    assert c_z1 == a
    assert c_z2 == -b2
    assert c_eps == b1 + a * b2
    zero = TruncPoly.const(0)
    # locus with the second antiholomorphic direction off
    assert susy_to_deformation(a, b1, zero) == (a, zero, b1)
    # locus with the first holomorphic direction off
    assert susy_to_deformation(zero, b1, b2) == (zero, -b2, b1)
    # mixed locus: the quadratic cross term survives alone
    assert susy_to_deformation(a, zero, b2) == (a, -b2, a * b2)
    _done(5, "quadratic parameter map", start)


def test_criterion_6_psi_equals_kappa():
    start = time.perf_counter()
    rng = random.Random(606)
    for _ in range(20):
        tau = Scalar(0, Fraction(rng.randint(1, 9), rng.randint(1, 4)))
        t = Scalar(Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        c = CouplingConstant(tau)
        mu = -(t * t + ONE)
        assert canonical_parameter(c, t) == kappa_level(c, t, mu)
    _done(6, "canonical parameter identity", start, bound=1.0)


def test_criterion_7_spectral_engine():
    start = time.perf_counter()
    rng = random.Random(707)
    for _ in range(50):
        dc = make_random_double_complex(rng, max_size=40)
        d0, _ = page(dc, 0)
        d1, diffs1 = page(dc, 1)
        d2, diffs2 = page(dc, 2)
        for b in d1:
            assert d1[b] <= d0.get(b, 0)
        for b in d2:
            assert d2[b] <= d1.get(b, 0)
        for r, diffs, shift in ((1, diffs1, (0, 1)), (2, diffs2, (-1, 2))):
            for b, m in diffs.items():
                tgt = (b[0] + shift[0], b[1] + shift[1])
                nxt = diffs.get(tgt)
                if nxt is not None:
                    assert mat_mul(nxt, m).is_zero()
        by_total = {}
        for (i, j), d in e3_dims(dc).items():
            by_total[i + j] = by_total.get(i + j, 0) + d
        total = dc.total_cohomology_dims()
        agrees = all(by_total.get(n, 0) == total.get(n, 0)
                     for n in set(by_total) | set(total))
        assert degeneration_check(dc) == agrees
        assert agrees
    assert possible_d2_arrows(TWISTOR_SUPPORT) == [
        ((1, 0, 2), (0, 1, 1)), ((1, 1, 3), (0, 2, 2))]
    _done(7, "spectral engine", start, bound=60.0)


def test_criterion_8_deterministic_reports(monkeypatch):
    start = time.perf_counter()
    monkeypatch.delenv("TWISTBV_REPORT_DIR", raising=False)
    bodies = []
    for _ in range(2):
        out = io.StringIO()
        old = sys.stdout
        sys.stdout = out
        try:
            code = cli_main(["verify", "all", "--truncation", "2",
                             "--format", "json"])
        finally:
            sys.stdout = old
        assert code == 0
        bodies.append(out.getvalue().encode("utf-8"))
    assert bodies[0] == bodies[1]
    _done(8, "deterministic reports", start)

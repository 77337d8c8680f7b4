import pytest

from twistbv.dolbeault import realize
from twistbv.multiplets import (MultipletComplex, build_multiplet_complex,
                                check_d_squared, fix_linfty_correction,
                                load_descriptor, realize_arrows,
                                supercharge_action)
from twistbv.scalars import ONE, Scalar, parse_scalar
from twistbv.sparse import SparseMatrix, mat_mul
from twistbv.susy import Q_HOL, QP_HOL, Q_PRIME, TwistParameters


def test_cell_count_and_rank():
    desc = load_descriptor()
    assert len(desc["cells"]) == 38
    mc = MultipletComplex(0)
    # one monomial per cell at truncation 0
    assert mc.rank == sum(mc.fiber_dim(c["form"]) for c in mc.cells)


def test_degree_homogeneity():
    mc = MultipletComplex(1)
    for fam in ("black", "blue", "green", "d_b1", "d_b1_purple",
                "d_a", "d_b2"):
        assert mc.check_degrees(mc.family(fam)) is None, fam
    assert mc.check_degrees(mc.family("h"), shift=-1) is None


def test_black_squares_alone():
    for N in (0, 1, 2):
        mc = MultipletComplex(N)
        black = mc.family("black")
        assert mat_mul(black, black).is_zero()


def test_full_differential_squares():
    for N in (0, 1, 2):
        for mirrored in (False, True):
            mc = MultipletComplex(N, mirrored=mirrored)
            d = mc.differential()
            assert mat_mul(d, d).is_zero()


def test_deformed_differential_squares():
    mc = MultipletComplex(2)
    params = TwistParameters(a=parse_scalar("2+i"), b1=parse_scalar("1/3"),
                             b2=parse_scalar("-5"))
    d = mc.deformed_differential(params)
    assert mat_mul(d, d).is_zero()


def test_deformation_families_anticommute():
    mc = MultipletComplex(2)
    fams = {
        "d_a": mc.family("d_a"),
        "d_b2": mc.family("d_b2"),
        "eps": mc.family("d_b1") + mc.family("d_b1_purple"),
    }
    D = mc.differential()
    for name, m in fams.items():
        assert (mat_mul(D, m) + mat_mul(m, D)).is_zero(), name
        assert mat_mul(m, m).is_zero(), name
    names = list(fams)
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            x, y = fams[names[a]], fams[names[b]]
            assert (mat_mul(x, y) + mat_mul(y, x)).is_zero()


def test_purple_arrows_required():
    mc = MultipletComplex(2)
    d = mc.differential() + mc.family("d_b1")
    assert not mat_mul(d, d).is_zero()


def test_fix_linfty_correction_recovers_purple():
    mc = MultipletComplex(2)
    b1 = parse_scalar("3")
    naive = mc.differential() + mc.family("d_b1", scale=b1)
    solved = fix_linfty_correction(mc, naive)
    frozen = load_descriptor()["arrows"]["d_b1_purple"]
    assert len(solved) == len(frozen)
    by_pair = {(a["from"], a["to"]): parse_scalar(a["coeff"]) for a in solved}
    for arrow in frozen:
        expect = b1 * parse_scalar(arrow["coeff"])
        assert by_pair[(arrow["from"], arrow["to"])] == expect


def test_fix_linfty_correction_rejects_consistent_input():
    mc = MultipletComplex(1)
    solved = fix_linfty_correction(mc, mc.differential())
    assert solved == []


def test_supercharge_action_families():
    mc = MultipletComplex(1)
    alg, diff = supercharge_action(Q_PRIME, mc)
    assert alg and diff
    total = realize_arrows(alg + diff, mc)
    assert total == mc.family("d_b1")
    alg, diff = supercharge_action(QP_HOL.scale(Scalar(2)), mc)
    assert realize_arrows(alg + diff, mc) == mc.family("d_a",
                                                      scale=Scalar(2))
    with pytest.raises(ValueError):
        from twistbv.susy import Supercharge
        supercharge_action(Supercharge.from_terms({("a1", "e1"): ONE}), mc)


def test_supercharge_action_of_base_charge_is_differential():
    mc = MultipletComplex(1)
    alg, diff = supercharge_action(Q_HOL, mc)
    assert realize_arrows(alg + diff, mc) == mc.differential()


def test_descriptor_variants():
    for which in ("bv_ss", "holo_u2", "holo_twisted", "holo_prime_twisted",
                  "q_prime_deformation"):
        c = build_multiplet_complex(which, N=1)
        assert check_d_squared(c) is None, which
    with pytest.raises(ValueError):
        build_multiplet_complex("unknown", N=1)


def test_check_d_squared_witness():
    from twistbv.multiplets import CochainComplex
    c = build_multiplet_complex("holo_twisted", N=1)
    mc = c.module
    broken = CochainComplex(mc, c.differential + mc.family("d_b1"), "broken")
    w = check_d_squared(broken)
    assert w is not None
    assert "basis_element" in w and "image" in w


def test_branching_metadata():
    c = build_multiplet_complex("bv_ss", N=0)
    br = c.metadata["branching"]
    assert br["omega0"]["total"] == 1
    assert br["omega1"]["total"] == 4 and br["omega1"]["parts"] == [2, 2]
    assert br["omega2_plus"]["total"] == 3
    assert br["w_space"]["total"] == 4 and sum(br["w_space"]["parts"]) == 4
    for key, spec in br.items():
        assert sum(spec["parts"]) == spec["total"], key


def test_row_metadata():
    c = build_multiplet_complex("holo_u2", N=0)
    assert len(c.metadata["rows"]) == 12
    c = build_multiplet_complex("bv_ss", N=0)
    assert c.metadata["rows"] == [1, 2, 3, 4, 5]


def test_par_fiber_projection():
    mc = MultipletComplex(0)
    # the trace part of a (1,1) cell is one-dimensional
    assert mc.fiber_dim("11par") == 1
    assert mc.fiber_dim("11") == 4
    cell = mc.cell_by_id["E11"]
    vec = mc.embed_scratch(cell, (0, 0, 0, 0), 0)
    assert len(vec) == 2
    back = mc.read_scratch(cell, vec)
    assert back == {((0, 0, 0, 0), 0): ONE}

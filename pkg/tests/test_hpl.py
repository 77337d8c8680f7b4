import random

import pytest

from twistbv.dolbeault import realize
from twistbv.hpl import (Perturbation, consistency_web, deformation_delta,
                         expected_small_differential, load_scenarios,
                         perturb, replay_theorem)
from twistbv.retracts import holo_retract, verify_retract
from twistbv.scalars import Scalar, parse_scalar
from twistbv.sparse import SparseMatrix, mat_mul


def test_scenario_registry():
    names = [s["name"] for s in load_scenarios()]
    assert len(names) == 9
    assert len(set(names)) == 9
    assert "thm_22" in names


def seeded_values(seed):
    rng = random.Random(seed)

    def draw():
        return Scalar(rng.randint(-4, 4), rng.randint(-2, 2))
    return {"a": draw(), "b1": draw(), "b2": draw()}


@pytest.mark.parametrize("name", [s["name"] for s in load_scenarios()])
def test_replay_each_scenario(name):
    report = replay_theorem(name, 1, seeded_values(sum(map(ord, name))))
    assert report["ok"], report


def test_replay_across_truncations():
    for N in (1, 2):
        report = replay_theorem("thm_21", N, seeded_values(7))
        assert report["ok"], report


def test_perturbed_retract_is_retract():
    r = holo_retract(1)
    vals = seeded_values(3)
    delta = deformation_delta(r.big, vals["a"], vals["b1"], vals["b2"])
    deformed = perturb(r, Perturbation(delta))
    report = verify_retract(deformed)
    assert report["ok"], report


def test_series_termination_guard():
    r = holo_retract(1)
    vals = seeded_values(11)
    delta = deformation_delta(r.big, vals["a"], vals["b1"], vals["b2"])
    with pytest.raises(ValueError):
        perturb(r, Perturbation(delta), max_order=0)


def test_negative_control_drop_identity_slots():
    # without the identity-slot completion the deformation fails to square
    r = holo_retract(1)
    mc = r.big
    bad = mc.family("d_b1").scale(parse_scalar("2"))
    pert = Perturbation(bad)
    assert not pert.check_maurer_cartan(r.d_big)


def test_consistency_web():
    report = consistency_web(1, "1+i", "2", "-1/2")
    assert report["ok"], report


def test_expected_matches_twisted_differential():
    from twistbv.dolbeault import twisted_differential
    from twistbv.susy import TwistParameters
    r = holo_retract(1)
    a, b1, b2 = parse_scalar("2"), parse_scalar("-1"), parse_scalar("1/3")
    lhs = expected_small_differential(r.big, r.small, a, b1, b2)
    rhs = twisted_differential(TwistParameters(a=a, b1=b1, b2=b2), r.small)
    assert (lhs - rhs).is_zero()

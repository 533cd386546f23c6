from __future__ import annotations

from fractions import Fraction

import pytest

from robustpac.core import ContractError, FiniteDistribution, LabeledExample
from robustpac.constructions import (
    make_lower_bound_family,
    make_pair_gap,
    make_proper_failure,
    make_vc_blowup,
)
from robustpac.experiments import (
    ExperimentConfig,
    group_adversary_for_k,
    make_group_adversary_instance,
    make_threshold_window_instance,
    run_bound_check,
    run_bounded_k_scaling,
    run_separation_experiment,
)
from robustpac.dimensions import vc
from robustpac.reports import ExperimentReport, wilson_interval
from robustpac.sampling import sample_iid
from robustpac.serialization import (
    dumps_instance,
    loads_instance,
    parse_probability,
    probability_to_string,
)


# --- sampling ----------------------------------------------------------------


def test_point_mass_sampling():
    dist = FiniteDistribution.point_mass(LabeledExample(2, -1))
    sample = sample_iid(dist, 10, seed=0)
    assert all(e == LabeledExample(2, -1) for e in sample)


def test_two_equal_atoms_frequency_golden():
    dist = FiniteDistribution(
        ((LabeledExample(0, 1), Fraction(1, 2)), (LabeledExample(1, -1), Fraction(1, 2)))
    )
    sample = sample_iid(dist, 10_000, seed=42)
    freq = sum(1 for e in sample if e.point == 0) / 10_000
    assert 0.47 <= freq <= 0.53
    assert freq == 0.5022  # pinned after the first draw


def test_same_seed_same_sample():
    inst = make_proper_failure(2)
    a = sample_iid(inst.distributions[3], 50, seed=9)
    b = sample_iid(inst.distributions[3], 50, seed=9)
    assert a == b
    c = sample_iid(inst.distributions[3], 50, seed=10)
    assert a != c


def test_sample_size_contract():
    dist = FiniteDistribution.point_mass(LabeledExample(0, 1))
    with pytest.raises(ContractError):
        sample_iid(dist, 0, seed=1)


# --- serialization -----------------------------------------------------------


def test_probability_strings_round_trip_exactly():
    cases = [Fraction(1, 4), Fraction(1, 3), Fraction(3, 50), Fraction(1), 0.1, 0.25]
    for p in cases:
        text = probability_to_string(p)
        assert parse_probability(text) == Fraction(p)
    assert probability_to_string(Fraction(1, 4)) == "0.25"
    assert probability_to_string(Fraction(1, 3)) == "1/3"
    assert probability_to_string(Fraction(3, 50)) == "0.06"


def test_instances_round_trip():
    for inst in (
        make_vc_blowup(3),
        make_proper_failure(2),
        make_pair_gap(2),
        make_lower_bound_family(3, Fraction(1, 12)),
    ):
        again = loads_instance(dumps_instance(inst))
        assert again.space == inst.space
        assert again.perturbations == inst.perturbations
        assert again.family == inst.family
        assert again.anchors == inst.anchors
        assert again.distributions == inst.distributions


def test_serialization_is_byte_stable():
    inst = make_proper_failure(2)
    assert dumps_instance(inst) == dumps_instance(make_proper_failure(2))


# --- reports -----------------------------------------------------------------


def test_wilson_interval_is_sane():
    lo, hi = wilson_interval(1, 2)
    assert 0.0 <= lo <= 0.5 <= hi <= 1.0
    lo0, hi0 = wilson_interval(0, 100)
    assert lo0 == 0.0 and hi0 < 0.05


def test_report_frequencies_recompute_from_rows():
    report = ExperimentReport(
        name="toy",
        config={"m": 1},
        threshold=0.5,
        risks=(0.1, 0.9, 0.6, 0.2),
        failures=(False, True, True, False),
    )
    assert report.failure_frequency == Fraction(2, 4)
    assert report.failure_count == sum(report.failures)
    csv = report.to_csv().strip().splitlines()
    assert csv[0] == "trial,risk,failed"
    assert len(csv) == 5
    recount = sum(int(line.split(",")[2]) for line in csv[1:])
    assert Fraction(recount, 4) == report.failure_frequency


# --- experiments -------------------------------------------------------------


def test_separation_is_deterministic_and_thread_invariant():
    inst = make_proper_failure(2)
    base = ExperimentConfig(m=2, trials=30, seed=7, improper_budget=16)
    threaded = ExperimentConfig(m=2, trials=30, seed=7, threads=4, improper_budget=16)
    p1, i1 = run_separation_experiment(inst, base)
    p2, i2 = run_separation_experiment(inst, threaded)
    assert p1.risks == p2.risks and p1.failures == p2.failures
    assert i1.risks == i2.risks and i1.failures == i2.failures
    p3, _ = run_separation_experiment(inst, base)
    assert p3.to_csv() == p1.to_csv()


def test_separation_single_trial_fixed_seed():
    inst = make_proper_failure(2)
    config = ExperimentConfig(m=2, trials=1, seed=3, improper_budget=16)
    proper, improper = run_separation_experiment(inst, config)
    assert proper.trials == improper.trials == 1
    assert proper.risks == run_separation_experiment(inst, config)[0].risks


def test_bound_check_respects_the_compression_budget():
    config = ExperimentConfig(m=50, trials=40, seed=13)
    report = run_bound_check(config, k=3)
    assert report.trials == 40
    assert float(report.failure_frequency) <= 0.1
    assert report.threshold == pytest.approx(0.3134425806348602)


def test_threshold_window_instance_is_realizable_fixture():
    inst = make_threshold_window_instance(12)
    assert inst.space.size == 12
    assert len(inst.family) == 13
    assert vc(inst.family).value == 1


def test_group_adversary_shapes():
    inst = make_group_adversary_instance(groups=4, k_max=8)
    assert vc(inst.family).value == 2
    for k in (1, 2, 8):
        u = group_adversary_for_k(inst, k)
        assert u.max_set_size == k
    with pytest.raises(ContractError):
        group_adversary_for_k(inst, 9)
    # k = 1 is the identity-adversary baseline
    from robustpac.core import PerturbationMap

    assert group_adversary_for_k(inst, 1) == PerturbationMap.identity(inst.space.size)


def test_k_scaling_table_shape_and_bounds():
    config = ExperimentConfig(m=12, trials=2, seed=5)
    table = run_bounded_k_scaling([1, 2, 4], config)
    assert [row.k for row in table.rows] == [1, 2, 4]
    for row in table.rows:
        assert row.max_discretized <= row.mk_bound
    csv = table.to_csv().splitlines()
    assert csv[0].startswith("k,trials,m,mean_inflated")
    assert len(csv) == 4

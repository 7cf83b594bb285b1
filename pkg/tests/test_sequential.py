import math

import numpy as np
import pytest

from seqwitness import sequential as seq
from seqwitness import states, witness

import oracles


def eq14_parameter(xi, lam):
    return (1 + 2 * math.sqrt(1 - xi * xi)) * (1 + 2 * math.sqrt(1 - lam * lam)) / 9


BELL = states.StateFamily.bell()


def test_two_sided_channel_matches_closed_form_on_bell():
    rho = states.build(BELL)
    for xi, lam in [(0.3, 0.9), (0.58, 0.58), (1.0, 1.0)]:
        out = seq.average_two_sided(rho, xi, lam)
        expected = states.build(states.StateFamily.werner(eq14_parameter(xi, lam)))
        assert oracles.trace_distance(out.matrix, expected.matrix) < 1e-12


def test_two_sided_channel_multiplies_werner_parameter():
    for p in (0.4, 0.85):
        rho = states.build(states.StateFamily.werner(p))
        out = seq.average_two_sided(rho, 0.7, 0.6)
        expected = states.build(states.StateFamily.werner(p * eq14_parameter(0.7, 0.6)))
        assert oracles.trace_distance(out.matrix, expected.matrix) < 1e-12


def test_two_sided_channel_weak_limit():
    rho = states.build(BELL)
    out = seq.average_two_sided(rho, 1e-6, 1e-6)
    assert oracles.trace_distance(out.matrix, rho.matrix) < 1e-6


def test_channels_are_unital():
    mixed = np.eye(4) / 4
    out = seq.average_two_sided(mixed, 0.8, 0.33)
    assert np.max(np.abs(out.matrix - mixed)) < 1e-14
    out = seq.average_one_sided(mixed, 0.52)
    assert np.max(np.abs(out.matrix - mixed)) < 1e-14


def test_one_sided_channel_closed_form():
    for p, lam in [(0.9, 0.44), (0.6, 1.0)]:
        rho = states.build(states.StateFamily.werner(p))
        out = seq.average_one_sided(rho, lam)
        expected = states.build(states.StateFamily.werner(p * seq.average_shrink(lam)))
        assert oracles.trace_distance(out.matrix, expected.matrix) < 1e-12


def test_one_sided_channel_weak_and_sharp_limits():
    rho = states.build(BELL)
    out = seq.average_one_sided(rho, 1e-6)
    assert oracles.trace_distance(out.matrix, rho.matrix) < 1e-6
    out = seq.average_one_sided(rho, 1.0)
    expected = states.build(states.StateFamily.werner(1 / 3))
    assert oracles.trace_distance(out.matrix, expected.matrix) < 1e-12


def test_violation_threshold_bell():
    w = witness.witness_psi_plus()
    t = seq.violation_threshold(w, states.build(BELL))
    assert t == pytest.approx(1 / 3, abs=1e-12)


def test_violation_threshold_second_stage():
    w = witness.witness_psi_plus()
    rho = seq.average_two_sided(states.build(BELL), 0.58, 0.58)
    t = seq.violation_threshold(w, rho)
    assert t == pytest.approx(3 / (9 * eq14_parameter(0.58, 0.58)), abs=1e-12)
    assert round(t, 2) == 0.43


def test_violation_threshold_impossible():
    w = witness.witness_psi_plus()
    separable = states.build(states.StateFamily.werner(0.2))
    assert seq.violation_threshold(w, separable) > 1.0
    k00 = states.ket(0)
    assert seq.violation_threshold(w, np.outer(k00, k00.conj())) == math.inf


def test_violation_threshold_rejects_modulated_witness():
    w = witness.modulate(witness.witness_psi_plus(), 0.9, 0.9)
    with pytest.raises(ValueError):
        seq.violation_threshold(w, states.build(BELL))


def test_epsilon_policy_validation():
    with pytest.raises(ValueError):
        seq.EpsilonPolicy(first_stage_slack=0.2)
    with pytest.raises(ValueError):
        seq.EpsilonPolicy(later_stage_slack=-0.01)


def test_greedy_symmetric_paper_rounding_schedule():
    report = seq.greedy_symmetric(BELL, seq.EpsilonPolicy(paper_rounding=True))
    assert report.detected_stages == 3
    assert report.schedule.stages == ((0.58, 0.58), (0.66, 0.66), (0.79, 0.79))
    assert len(report.thresholds) == 4
    assert 1.10 <= report.thresholds[3] <= 1.16


def test_greedy_symmetric_full_precision_schedule():
    report = seq.greedy_symmetric(BELL)
    assert report.detected_stages == 3
    for (xi, lam), target in zip(report.schedule.stages, (0.58, 0.66, 0.79)):
        assert xi == lam
        assert abs(xi - target) <= 0.02
    assert report.thresholds[3] > 1.0


def test_greedy_symmetric_thresholds_strictly_increase():
    for policy in (seq.EpsilonPolicy(), seq.EpsilonPolicy(paper_rounding=True)):
        ts = seq.greedy_symmetric(BELL, policy).thresholds
        assert all(a < b for a, b in zip(ts, ts[1:]))


def test_greedy_symmetric_stage_expectations_negative():
    report = seq.greedy_symmetric(BELL, seq.EpsilonPolicy(paper_rounding=True))
    w = witness.witness_psi_plus()
    for (xi, lam), rho in zip(report.schedule.stages, report.states):
        assert witness.expectation(witness.modulate(w, xi, lam), rho) < 0.0
    # the stage after the last detecting one fails even at full sharpness
    final = seq.average_two_sided(report.states[-1], *report.schedule.stages[-1])
    assert witness.expectation(witness.modulate(w, 1.0, 1.0), final) >= 0.0


def test_greedy_symmetric_werner_counts():
    assert seq.greedy_symmetric(states.StateFamily.werner(0.9)).detected_stages == 3
    assert seq.greedy_symmetric(states.StateFamily.werner(0.5)).detected_stages == 1
    report = seq.greedy_symmetric(states.StateFamily.werner(0.3))
    assert report.detected_stages == 0
    assert report.thresholds[0] > 1.0


def test_greedy_symmetric_count_stable_over_policy_range():
    for first in (0.0, 0.01, 0.02):
        for later in (0.0, 0.01, 0.02):
            for rounding in (False, True):
                policy = seq.EpsilonPolicy(first, later, rounding)
                assert seq.greedy_symmetric(BELL, policy).detected_stages == 3


def test_greedy_symmetric_max_stages_cap():
    report = seq.greedy_symmetric(BELL, max_stages=2)
    assert report.detected_stages == 2


@pytest.mark.parametrize("alices,expected", [(1, 12), (2, 8), (3, 5), (4, 3)])
def test_greedy_asymmetric_counts(alices, expected):
    for rounding in (False, True):
        policy = seq.EpsilonPolicy.asymmetric_default(paper_rounding=rounding)
        report = seq.greedy_asymmetric(alices, BELL, policy)
        assert report.detected_stages == expected


def test_greedy_asymmetric_counts_stable_over_first_slack():
    for first in (0.0, 0.01, 0.02):
        policy = seq.EpsilonPolicy(first, 0.0, False)
        assert seq.greedy_asymmetric(2, BELL, policy).detected_stages == 8
        assert seq.greedy_asymmetric(1, BELL, policy).detected_stages == 12


def test_greedy_asymmetric_two_alice_sequence():
    printed = (0.44, 0.47, 0.51, 0.56, 0.63, 0.74, 0.95)
    rounded = seq.greedy_asymmetric(
        2, BELL, seq.EpsilonPolicy.asymmetric_default(paper_rounding=True))
    assert rounded.schedule.stages[0] == (0.58, 0.58)
    assert tuple(lam for _, lam in rounded.schedule.stages[1:]) == printed
    full = seq.greedy_asymmetric(2, BELL)
    for (xi, lam), target in zip(full.schedule.stages[1:], printed):
        assert xi == 1.0
        assert abs(lam - target) <= 0.01


def test_greedy_asymmetric_one_alice_is_purely_one_sided():
    report = seq.greedy_asymmetric(1, BELL)
    assert all(xi == 1.0 for xi, _ in report.schedule.stages)


def test_greedy_asymmetric_thresholds_increase():
    report = seq.greedy_asymmetric(2, BELL)
    ts = report.thresholds
    assert all(a < b for a, b in zip(ts, ts[1:]))


def test_greedy_asymmetric_max_bobs_cap():
    report = seq.greedy_asymmetric(3, BELL, max_bobs=1)
    assert report.detected_stages == 1


def test_classify_pair_counts():
    assert seq.classify_pair_count(states.StateFamily.werner(0.9)) == 3
    assert seq.classify_pair_count(states.StateFamily.werner(0.7)) == 2
    assert seq.classify_pair_count(states.StateFamily.werner(0.5)) == 1
    assert seq.classify_pair_count(states.StateFamily.pure(math.pi / 7)) == 3
    assert seq.classify_pair_count(states.StateFamily.pure(math.pi / 12)) == 2
    assert seq.classify_pair_count(states.StateFamily.pure(math.pi / 20)) == 1


def test_classify_rejects_other_families():
    with pytest.raises(ValueError):
        seq.classify_pair_count(states.StateFamily.bell())
    with pytest.raises(ValueError):
        seq.classify_pair_count(states.StateFamily.colored(0.9))


def test_scenario_kind_validation():
    with pytest.raises(ValueError):
        seq.ScenarioKind(0, 5, BELL)
    kind = seq.ScenarioKind(2, 20, BELL)
    assert kind.alices == 2


def test_run_symmetric_schedule_records_states():
    report = seq.run_symmetric_schedule(BELL, (0.73, 0.80, 1.0))
    assert report.detected_stages == 3
    assert len(report.states) == 3
    assert report.states[0].matrix[1, 1] == pytest.approx(0.5)
    p2 = eq14_parameter(0.73, 0.73)
    expected = states.build(states.StateFamily.werner(p2))
    assert oracles.trace_distance(report.states[1].matrix, expected.matrix) < 1e-12

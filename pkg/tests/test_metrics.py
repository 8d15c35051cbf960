# test_metrics.py - Tests for per-topology metrics and spatial averages
"""
Tests for path reliability, conditional delay and hop count, area
spectral efficiency and their averages over topologies
"""

import math
import unittest

import pytest

from adhoc_routing_sim.errors import InvalidInputError
from adhoc_routing_sim.metrics import (
    MetricsAccumulator,
    TopologyMetrics,
    spatial_averages,
    topology_metrics,
    transmitter_density,
)
from adhoc_routing_sim.routing import Protocol, RouteOutcome


def success(delay, hops, protocol=Protocol.LDR):
    return RouteOutcome(
        protocol=protocol,
        success=True,
        path=tuple(range(hops + 1)),
        delay=float(delay),
        hops=hops,
    )


def failure(protocol=Protocol.LDR):
    return RouteOutcome(protocol=protocol, success=False)


def metrics(reliability, delay=None, hops=None, ase=0.0, protocol=Protocol.LDR):
    return TopologyMetrics(
        protocol=protocol,
        trials=4,
        failures=round(4 * (1 - reliability)),
        reliability=reliability,
        cond_avg_delay=delay,
        cond_avg_hops=hops,
        ase=ase,
    )


class TestTopologyMetrics(unittest.TestCase):
    """Tests for the metrics of one protocol on one topology"""

    def setUp(self):
        self.density = transmitter_density(200, 1.0)

    def test_density(self):
        self.assertAlmostEqual(self.density, 201 / math.pi, places=12)

    def test_mixed_outcomes(self):
        """
        Given four trials with delays 1 and 2 and two failures
        When the topology metrics are computed
        Then R = 0.5, D = H = 1.5 and A = lambda / 4 * (1 + 1/2)
        """
        # Given: Two successes and two failures
        outcomes = [success(1, 1), success(2, 2), failure(), failure()]

        # When: We compute the metrics
        result = topology_metrics(outcomes, 4, self.density, topology_id=3)

        # Then: The formulas hold
        self.assertEqual(result.reliability, 0.5)
        self.assertEqual(result.cond_avg_delay, 1.5)
        self.assertEqual(result.cond_avg_hops, 1.5)
        self.assertAlmostEqual(result.ase, self.density / 4 * 1.5, places=12)
        self.assertEqual(result.failures, 2)
        self.assertEqual(result.topology_id, 3)

    def test_all_failures(self):
        """
        Given every trial failed
        When the topology metrics are computed
        Then R = A = 0 and the conditional means are undefined
        """
        result = topology_metrics([failure()] * 5, 5, self.density)
        self.assertEqual(result.reliability, 0.0)
        self.assertEqual(result.ase, 0.0)
        self.assertIsNone(result.cond_avg_delay)
        self.assertIsNone(result.cond_avg_hops)

    def test_permutation_invariance(self):
        outcomes = [success(3, 2), failure(), success(1, 1), success(5, 3)]
        first = topology_metrics(outcomes, 4, self.density)
        second = topology_metrics(sorted(outcomes, key=lambda o: o.delay or 0), 4, self.density)
        self.assertEqual(first.reliability, second.reliability)
        self.assertAlmostEqual(first.cond_avg_delay, second.cond_avg_delay, places=12)
        self.assertAlmostEqual(first.ase, second.ase, places=12)

    def test_ase_bounded_by_minimum_delay(self):
        outcomes = [success(1, 1)] * 4
        result = topology_metrics(outcomes, 4, self.density)
        self.assertLessEqual(result.ase, self.density / 1.0 + 1e-12)

    def test_turning_a_failure_into_success(self):
        base = topology_metrics([success(2, 1), failure()], 2, self.density)
        better = topology_metrics([success(2, 1), success(9, 4)], 2, self.density)
        self.assertGreaterEqual(better.reliability, base.reliability)
        self.assertGreaterEqual(better.ase, base.ase)

    def test_wrong_trial_count(self):
        with self.assertRaises(InvalidInputError):
            topology_metrics([success(1, 1)], 2, self.density)

    def test_mixed_protocols(self):
        with self.assertRaises(InvalidInputError):
            topology_metrics(
                [success(1, 1), success(1, 1, Protocol.MPR)], 2, self.density
            )


def test_accumulator_merge_matches_single_pass():
    outcomes = [success(1, 1), failure(), success(3, 2), success(2, 2), failure()]
    whole = MetricsAccumulator(protocol=Protocol.LDR)
    for outcome in outcomes:
        whole.add(outcome)

    left = MetricsAccumulator(protocol=Protocol.LDR)
    right = MetricsAccumulator(protocol=Protocol.LDR)
    for outcome in outcomes[:2]:
        left.add(outcome)
    for outcome in outcomes[2:]:
        right.add(outcome)

    merged = left.merge(right)
    assert (merged.trials, merged.failures, merged.hops_sum) == (5, 2, 5)
    assert merged.delay_sum == pytest.approx(whole.delay_sum)
    assert merged.inverse_delay_sum == pytest.approx(whole.inverse_delay_sum)
    assert whole.finalize(10.0).reliability == pytest.approx(0.6)


def test_accumulator_rejects_other_protocol():
    accumulator = MetricsAccumulator(protocol=Protocol.LDR)
    with pytest.raises(InvalidInputError):
        accumulator.add(failure(Protocol.NNR))
    with pytest.raises(InvalidInputError):
        accumulator.merge(MetricsAccumulator(protocol=Protocol.MPR))
    with pytest.raises(InvalidInputError):
        accumulator.finalize(1.0)


def test_single_topology_average():
    single = metrics(0.75, delay=2.0, hops=1.5, ase=3.0)
    averages = spatial_averages([single])
    assert averages.reliability == 0.75
    assert averages.cond_avg_delay == 2.0
    assert averages.cond_avg_hops == 1.5
    assert averages.ase == 3.0
    assert averages.reliability_se == 0.0
    assert averages.topologies == 1


def test_identical_topologies():
    averages = spatial_averages([metrics(0.5, 2.0, 2.0, 1.0)] * 3)
    assert averages.reliability == 0.5
    assert averages.cond_avg_delay == 2.0
    assert averages.reliability_se == 0.0


def test_two_topologies():
    averages = spatial_averages([metrics(0.4, 1.0, 1.0), metrics(0.8, 3.0, 2.0)])
    assert averages.reliability == pytest.approx(0.6)
    assert averages.cond_avg_delay == pytest.approx(2.0)
    assert averages.reliability_se == pytest.approx(0.2)


def test_undefined_topologies_are_dropped():
    averages = spatial_averages(
        [metrics(0.0), metrics(0.5, 2.0, 1.0, ase=1.0), metrics(1.0, 4.0, 3.0, ase=2.0)]
    )
    assert averages.reliability == pytest.approx(0.5)
    assert averages.cond_avg_delay == pytest.approx(3.0)
    assert averages.cond_avg_hops == pytest.approx(2.0)
    assert averages.ase == pytest.approx(1.0)
    assert averages.dropped_topologies == 1


def test_all_topologies_undefined():
    averages = spatial_averages([metrics(0.0), metrics(0.0)])
    assert averages.cond_avg_delay is None
    assert averages.delay_se is None
    assert averages.dropped_topologies == 2


def test_spatial_averages_needs_topologies():
    with pytest.raises(InvalidInputError):
        spatial_averages([])
    with pytest.raises(InvalidInputError):
        spatial_averages([metrics(0.5), metrics(0.5, protocol=Protocol.NNR)])

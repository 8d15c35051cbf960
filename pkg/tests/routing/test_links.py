# test_links.py - Tests for service draws, included links and link attempts
"""
Tests for relay availability, the distance criterion, per-link
retransmissions and candidate link sets
"""

import math
import unittest

import numpy as np
import pytest

from adhoc_routing_sim.errors import InvalidInputError
from adhoc_routing_sim.routing import (
    CandidateLinkSet,
    LinkSet,
    ServiceRealization,
    draw_attempts,
    draw_service,
    included_links,
    link_delay,
    simulate_link_attempts,
)
from adhoc_routing_sim.topology import NetworkConfig, place_mobiles

from . import line_topology, make_candidates


class TestDrawService(unittest.TestCase):
    """Tests for relay availability draws"""

    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_all_available(self):
        """
        Given mu = 1
        When the service is drawn
        Then every relay is available and silent
        """
        service = draw_service(1.0, 0.4, self.rng, num_relays=10)
        self.assertTrue(service.available.all())
        self.assertEqual(service.transmit_prob.tolist(), [0.0] * 12)
        self.assertEqual(len(service.interferers), 0)

    def test_none_available(self):
        """
        Given mu = 0
        When the service is drawn
        Then only the endpoints are available and every relay may interfere
        """
        service = draw_service(0.0, 0.4, self.rng, num_relays=10)
        self.assertEqual(service.available.tolist(), [True] + [False] * 10 + [True])
        self.assertEqual(service.available_relays.tolist(), [])
        self.assertEqual(service.transmit_prob[1:-1].tolist(), [0.4] * 10)
        self.assertEqual(service.transmit_prob[[0, -1]].tolist(), [0.0, 0.0])
        self.assertEqual(service.interferers.tolist(), list(range(1, 11)))

    def test_mean_available(self):
        """
        Given mu = 0.3 and M = 200
        When 10^4 service draws are made
        Then the mean number of available relays is 60 within three standard errors
        """
        counts = [
            len(draw_service(0.3, 0.4, self.rng, num_relays=200).available_relays)
            for _ in range(10_000)
        ]
        self.assertLess(abs(np.mean(counts) - 60), 3 * math.sqrt(200 * 0.3 * 0.7 / 10_000))

    def test_per_mobile_transmit_probability(self):
        p = np.array([0.9, 0.1, 0.2, 0.9])
        service = draw_service(0.0, p, self.rng, num_relays=2)
        self.assertEqual(service.transmit_prob.tolist(), [0.0, 0.1, 0.2, 0.0])

    def test_per_relay_service_probability(self):
        service = draw_service(np.array([1.0, 0.0, 1.0]), 0.5, self.rng)
        self.assertEqual(service.available_relays.tolist(), [1, 3])

    def test_invalid_probability(self):
        with self.assertRaises(InvalidInputError):
            draw_service(1.5, 0.4, self.rng, num_relays=3)

    def test_available_relay_must_be_silent(self):
        with self.assertRaises(InvalidInputError):
            ServiceRealization(
                available=np.array([True, True, True]),
                transmit_prob=np.array([0.0, 0.3, 0.0]),
            )


class TestIncludedLinks(unittest.TestCase):
    """Tests for the distance criterion"""

    def setUp(self):
        """
        Given a source at 0, relays at x = 0.4 and 0.2, a relay off-axis
        and the destination at x = 1
        """
        self.topology = line_topology((0, 0), (0.4, 0), (0.2, 0), (0.5, 0.3), (1, 0))

    def test_distance_criterion(self):
        """
        When every relay is available
        Then the link towards the destination is included
        And the link away from it is not
        """
        service = draw_service(1.0, 0.4, np.random.default_rng(0), num_relays=3)
        pairs = included_links(self.topology, service).pairs()
        self.assertIn((2, 1), pairs)
        self.assertNotIn((1, 2), pairs)

    def test_unavailable_relay_excluded(self):
        """
        When relay 3 is out of service
        Then no included link touches it
        """
        service = ServiceRealization(
            available=np.array([True, True, True, False, True]),
            transmit_prob=np.array([0.0, 0.0, 0.0, 0.4, 0.0]),
        )
        pairs = included_links(self.topology, service).pairs()
        self.assertTrue(all(3 not in pair for pair in pairs))

    def test_direct_link_always_included(self):
        service = draw_service(0.0, 0.4, np.random.default_rng(0), num_relays=3)
        links = included_links(self.topology, service)
        self.assertEqual(links.pairs(), {(0, 4)})
        self.assertEqual(links.length.tolist(), [1.0])

    def test_no_links_into_source_or_out_of_destination(self):
        service = draw_service(1.0, 0.4, np.random.default_rng(0), num_relays=3)
        links = included_links(self.topology, service)
        self.assertTrue(np.all(links.rx != 0))
        self.assertTrue(np.all(links.tx != 4))

    def test_every_included_link_makes_progress(self):
        topology = place_mobiles(NetworkConfig(num_relays=50), np.random.default_rng(8))
        service = draw_service(0.5, 0.4, np.random.default_rng(9), num_relays=50)
        links = included_links(topology, service)
        remaining = topology.distance_to_destination
        self.assertTrue(np.all(remaining[links.rx] < remaining[links.tx]))

    def test_mismatched_service(self):
        service = draw_service(1.0, 0.4, np.random.default_rng(0), num_relays=2)
        with self.assertRaises(InvalidInputError):
            included_links(self.topology, service)


class TestLinkAttempts(unittest.TestCase):
    """Tests for the truncated-geometric retransmission model"""

    def test_perfect_link(self):
        rng = np.random.default_rng(0)
        self.assertTrue(all(simulate_link_attempts(0.0, 4, rng) == 1 for _ in range(100)))

    def test_dead_link(self):
        rng = np.random.default_rng(0)
        self.assertTrue(all(simulate_link_attempts(1.0, 4, rng) is None for _ in range(100)))

    def test_candidate_probability(self):
        """
        Given eps = 0.5 and B = 4
        When 10^5 links are simulated
        Then the candidate frequency is 15/16 within three standard errors
        """
        rng = np.random.default_rng(1)
        draws = 100_000
        hits = sum(simulate_link_attempts(0.5, 4, rng) is not None for _ in range(draws))
        p = 15 / 16
        self.assertLess(abs(hits / draws - p), 3 * math.sqrt(p * (1 - p) / draws))

    def test_invalid_inputs(self):
        rng = np.random.default_rng(0)
        with self.assertRaises(InvalidInputError):
            simulate_link_attempts(1.5, 4, rng)
        with self.assertRaises(InvalidInputError):
            simulate_link_attempts(0.5, 0, rng)


def test_draw_attempts_extremes():
    rng = np.random.default_rng(2)
    assert draw_attempts(np.zeros(50), 4, rng).tolist() == [1] * 50
    assert draw_attempts(np.ones(50), 4, rng).tolist() == [0] * 50


def test_draw_attempts_distribution():
    """Attempt counts follow the truncated geometric law."""
    rng = np.random.default_rng(4)
    draws = 200_000
    eps = 0.6
    attempts = draw_attempts(np.full(draws, eps), 3, rng)
    assert attempts.min() >= 0 and attempts.max() <= 3
    for n in (1, 2, 3):
        p = eps ** (n - 1) * (1 - eps)
        frequency = np.mean(attempts == n)
        assert abs(frequency - p) < 4 * math.sqrt(p * (1 - p) / draws)
    p_fail = eps**3
    assert abs(np.mean(attempts == 0) - p_fail) < 4 * math.sqrt(p_fail * (1 - p_fail) / draws)


@pytest.mark.parametrize(
    "attempts, transmission_delay, excess_delay, expected",
    [(1, 1.0, 1.0, 1.0), (3, 1.0, 1.0, 5.0), (4, 1.0, 0.0, 4.0), (2, 2.0, 0.5, 4.5)],
)
def test_link_delay(attempts, transmission_delay, excess_delay, expected):
    assert link_delay(attempts, transmission_delay, excess_delay) == expected


def test_link_delay_needs_an_attempt():
    with pytest.raises(InvalidInputError):
        link_delay(0)


def test_candidates_drop_failed_links():
    topology = line_topology((0, 0), (0.2, 0), (0.5, 0))
    candidates = make_candidates(topology, [(0, 1, 2), (1, 2, 0), (0, 2, 1)])
    assert candidates.pairs() == {(0, 1), (0, 2)}
    assert candidates.delay_of == {(0, 1): 3.0, (0, 2): 1.0}
    assert candidates.graph.edges[0, 1]["attempts"] == 2
    assert candidates.graph.edges[0, 1]["length"] == pytest.approx(0.2)


def test_empty_candidates_keep_endpoints():
    topology = line_topology((0, 0), (0.2, 0), (0.5, 0))
    candidates = CandidateLinkSet.from_attempts(
        LinkSet(tx=np.array([0]), rx=np.array([2]), length=np.array([0.5])),
        np.array([0]),
        topology,
    )
    assert len(candidates) == 0
    assert set(candidates.graph.nodes) == {0, 2}

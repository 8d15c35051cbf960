# test_channel.py - Tests for the channel realization
"""
Tests for path loss, distance-dependent fading, shadowing and the
normalized power table
"""

import math
import unittest

import numpy as np
import pytest

from adhoc_routing_sim.channel import (
    ChannelConfig,
    ChannelRealization,
    build_channel,
    db_to_linear,
    draw_shadowing,
    nakagami_param,
    nakagami_params,
    path_loss,
)
from adhoc_routing_sim.errors import ConfigError, InvalidInputError
from adhoc_routing_sim.topology import NetworkConfig, Topology


def line_topology(*xs):
    """Mobiles on the x-axis at the given coordinates."""
    return Topology(np.array([[x, 0.0] for x in xs]))


class TestPathLoss(unittest.TestCase):
    """Tests for the power-law path loss"""

    def test_reference_distance(self):
        self.assertEqual(path_loss(0.05, 0.05, 3.5), 1.0)

    def test_inverse_square(self):
        self.assertAlmostEqual(path_loss(0.1, 0.05, 2.0), 0.25, places=15)

    def test_default_exponent(self):
        self.assertAlmostEqual(path_loss(0.5, 0.05, 3.5), 10**-3.5, delta=1e-15)

    def test_below_reference_distance(self):
        """
        Given a distance shorter than d_0
        When the path loss is evaluated
        Then a domain error is raised
        """
        with self.assertRaises(InvalidInputError):
            path_loss(0.01, 0.05, 3.5)

    def test_array_input(self):
        gains = path_loss(np.array([0.05, 0.1]), 0.05, 2.0)
        np.testing.assert_allclose(gains, [1.0, 0.25])


class TestNakagamiParam(unittest.TestCase):
    """Tests for the distance-dependent Nakagami parameter"""

    def test_branches(self):
        self.assertEqual(nakagami_param(0.05, 0.2), 3)
        self.assertEqual(nakagami_param(0.15, 0.2), 2)
        self.assertEqual(nakagami_param(0.25, 0.2), 1)

    def test_boundaries_belong_to_the_closer_branch(self):
        self.assertEqual(nakagami_param(0.1, 0.2), 3)
        self.assertEqual(nakagami_param(0.2, 0.2), 2)

    def test_vectorised_matches_scalar(self):
        """
        Given distances across all three branches
        When the vectorised parameter is evaluated
        Then it matches the scalar one and never increases with distance
        """
        distances = np.linspace(0.01, 1.0, 200)
        vectorised = nakagami_params(distances, 0.2)
        self.assertEqual(
            vectorised.tolist(), [nakagami_param(d, 0.2) for d in distances]
        )
        self.assertTrue(np.all(np.diff(vectorised) <= 0))


class TestShadowing(unittest.TestCase):
    """Tests for the ordered-pair Gaussian shadowing"""

    def test_disabled(self):
        topology = line_topology(0.0, 0.2, 0.5)
        table = draw_shadowing(topology, 0.0, np.random.default_rng(0))
        np.testing.assert_array_equal(table, np.zeros((3, 3)))

    def test_moments(self):
        """
        Given a large topology and sigma = 8 dB
        When the shadowing table is drawn
        Then the off-diagonal sample mean and variance match N(0, 64)
        """
        # Given: 1001 mobiles, about 10^6 ordered pairs
        topology = Topology(np.random.default_rng(0).random((1001, 2)))

        # When: We draw the shadowing
        table = draw_shadowing(topology, 8.0, np.random.default_rng(1))

        # Then: The diagonal is zero and the moments match
        np.testing.assert_array_equal(np.diag(table), 0.0)
        values = table[~np.eye(1001, dtype=bool)]
        self.assertLess(abs(values.mean()), 0.03)
        self.assertLess(abs(values.var() - 64.0), 1.0)

    def test_ordered_pairs_are_independent(self):
        topology = line_topology(0.0, 0.2, 0.5)
        table = draw_shadowing(topology, 8.0, np.random.default_rng(3))
        self.assertNotEqual(table[0, 1], table[1, 0])


class TestNormalizedPower(unittest.TestCase):
    """Tests for the normalized power of a transmitter at a receiver"""

    def setUp(self):
        """
        Given mobiles at x = 0, 0.5 and 1 and a channel without shadowing
        """
        self.topology = line_topology(0.0, 0.5, 1.0)
        self.config = ChannelConfig(shadowing_std_db=0.0)
        self.channel = ChannelRealization(
            self.topology, self.config, np.zeros((3, 3))
        )

    def test_desired_transmitter(self):
        """
        When the desired transmitter is 0.5 away
        Then its normalized power is 0.5 ** -3.5
        """
        self.assertAlmostEqual(
            self.channel.normalized_power(0, 1, 0), 0.5**-3.5, places=10
        )

    def test_interferer_scaled_by_spreading(self):
        """
        When an interferer is at unit distance with equal powers
        Then its normalized power is h / G = 1 / 48
        """
        self.assertAlmostEqual(
            self.channel.normalized_power(0, 2, 1), 1.0 / 48.0, places=15
        )

    def test_shadowing_factor(self):
        """
        When the interferer link has 10 dB of shadowing
        Then its normalized power grows by exactly a factor of 10
        """
        shadow = np.zeros((3, 3))
        shadow[0, 2] = 10.0
        shadowed = ChannelRealization(self.topology, self.config, shadow)
        ratio = shadowed.normalized_power(0, 2, 1) / self.channel.normalized_power(0, 2, 1)
        self.assertAlmostEqual(ratio, 10.0, places=12)

    def test_transmit_power_ratio(self):
        powers = np.array([2.0, 1.0, 1.0])
        channel = ChannelRealization(self.topology, self.config, np.zeros((3, 3)), powers)
        self.assertAlmostEqual(
            channel.normalized_power(0, 2, 1), 2.0 / 48.0, places=15
        )

    def test_same_mobile_rejected(self):
        with self.assertRaises(InvalidInputError):
            self.channel.normalized_power(1, 1, 0)

    def test_index_out_of_range(self):
        with self.assertRaises(InvalidInputError):
            self.channel.normalized_power(0, 3, 0)


def test_homogeneity_under_scaling():
    """Scaling every distance by c scales every normalized power by c ** -alpha."""
    config = ChannelConfig(shadowing_std_db=0.0, los_radius=10.0)
    base = Topology(np.array([[0.0, 0.0], [0.3, 0.1], [0.6, -0.2], [0.9, 0.0]]))
    scaled = Topology(base.positions * 2.0)
    first = ChannelRealization(base, config, np.zeros((4, 4)))
    second = ChannelRealization(scaled, config, np.zeros((4, 4)))
    for i, j, k in [(0, 1, 0), (2, 3, 1), (1, 3, 1), (3, 0, 2)]:
        assert second.normalized_power(i, j, k) == pytest.approx(
            first.normalized_power(i, j, k) * 2.0**-3.5, rel=1e-12
        )


def test_omega_decreases_with_distance():
    topology = line_topology(0.0, 0.1, 0.2, 0.4, 0.8)
    channel = ChannelRealization(topology, ChannelConfig(), np.zeros((5, 5)))
    omegas = [channel.normalized_power(0, j, 0) for j in range(1, 5)]
    assert all(a > b for a, b in zip(omegas, omegas[1:]))


def test_batch_omegas_match_scalar():
    topology = line_topology(0.0, 0.2, 0.45, 0.7)
    channel = build_channel(topology, ChannelConfig(), np.random.default_rng(9))
    tx = np.array([0, 1, 2])
    rx = np.array([3, 3, 1])

    desired = channel.desired_omegas(tx, rx)
    interference = channel.interference_omegas([1, 2], tx, rx)

    for row, (k, j) in enumerate(zip(tx, rx)):
        assert desired[row] == pytest.approx(channel.normalized_power(k, j, k))
        for column, i in enumerate([1, 2]):
            if i in (k, j):
                continue
            assert interference[row, column] == pytest.approx(
                channel.normalized_power(i, j, k)
            )


def test_nakagami_table_follows_distance():
    topology = line_topology(0.0, 0.05, 0.15, 0.5)
    channel = ChannelRealization(topology, ChannelConfig(), np.zeros((4, 4)))
    assert channel.nakagami_m[0, 1] == 3
    assert channel.nakagami_m[0, 2] == 2
    assert channel.nakagami_m[0, 3] == 1
    assert channel.nakagami_m[3, 0] == 1


def test_shadow_csv(tmp_path):
    topology = line_topology(0.0, 0.2, 0.5)
    channel = build_channel(topology, ChannelConfig(), np.random.default_rng(4))
    path = tmp_path / "shadow.csv"
    channel.shadow_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "i,j,xi_db"
    assert len(lines) == 1 + 6


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"path_loss_exponent": 1.5}, "path-loss exponent must be ≥ 2"),
        ({"snr": 0.0}, "SNR must be > 0"),
        ({"spreading_over_chip": -1.0}, "G/h must be > 0"),
        ({"sinr_threshold": 0.0}, "SINR threshold must be > 0"),
    ],
)
def test_invalid_channel_config(kwargs, message):
    with pytest.raises(ConfigError, match=message):
        ChannelConfig(**kwargs)


def test_exclusion_radius_below_reference_distance():
    with pytest.raises(ConfigError, match="reference distance"):
        ChannelConfig(reference_distance=0.1).validate_against(
            NetworkConfig(exclusion_radius=0.05)
        )


def test_from_db():
    config = ChannelConfig.from_db(snr_db=0.0, sinr_threshold_db=3.0)
    assert config.snr == 1.0
    assert config.inv_snr == 1.0
    assert config.sinr_threshold == pytest.approx(1.9952623149688795)
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert math.isclose(db_to_linear(-10.0), 0.1)

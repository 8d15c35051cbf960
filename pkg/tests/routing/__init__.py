# __init__.py - Routing test package
"""
Tests for the routing package, with a helper that builds candidate link
sets directly from attempt counts
"""

import numpy as np

from adhoc_routing_sim.routing import CandidateLinkSet, LinkSet
from adhoc_routing_sim.topology import Topology


def line_topology(*points):
    """Topology from (x, y) points; the first is the source, the last the destination."""
    return Topology(np.array(points, dtype=float))


def make_candidates(topology, links, transmission_delay=1.0, excess_delay=1.0):
    """Candidate links from (a, b, attempts) triples; attempts 0 drops the link."""
    links = list(links)
    tx = np.array([a for a, _, _ in links], dtype=int)
    rx = np.array([b for _, b, _ in links], dtype=int)
    attempts = np.array([n for _, _, n in links], dtype=int)
    link_set = LinkSet(tx=tx, rx=rx, length=topology.distances[tx, rx])
    return CandidateLinkSet.from_attempts(
        link_set, attempts, topology, transmission_delay, excess_delay
    )

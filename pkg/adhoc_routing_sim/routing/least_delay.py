# least_delay.py - Least-delay routing
"""
Least-delay routing picks the candidate path of minimum total delay, which
is the path the first flooded request packet would take.
"""

import networkx as nx

from ..topology import Topology
from .base import Protocol, RouteOutcome, RoutingProtocol
from .links import CandidateLinkSet


class LeastDelayRouting(RoutingProtocol):
    """
    LDR: Dijkstra over the candidate links with each link weighted by
    its delay.
    """

    id = Protocol.LDR
    name = "Least-delay routing"
    description = "Minimum-delay candidate path found with Dijkstra"

    def route(self, candidates: CandidateLinkSet, topology: Topology) -> RouteOutcome:
        try:
            _, path = nx.single_source_dijkstra(
                candidates.graph,
                candidates.source,
                candidates.destination,
                weight="delay",
            )
        except nx.NetworkXNoPath:
            return self.failure()
        return self.create_outcome(path, candidates)


def least_delay_path(candidates: CandidateLinkSet, topology: Topology) -> RouteOutcome:
    return LeastDelayRouting().route(candidates, topology)

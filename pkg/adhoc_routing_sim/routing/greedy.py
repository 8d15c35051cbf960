# greedy.py - Hop-by-hop geographic routing
"""
Nearest-neighbor and maximum-progress routing. Both grow the path one hop
at a time from the current relay without global knowledge and without
backtracking; a relay with no outgoing candidate link is a routing failure.
"""

from typing import Any, Dict

from ..topology import Topology
from .base import Protocol, RouteOutcome, RoutingProtocol
from .links import CandidateLinkSet


class GreedyRouting(RoutingProtocol):
    """Base class for protocols that choose the next hop by a local score."""

    def score(self, rx: int, edge: Dict[str, Any], topology: Topology) -> float:
        raise NotImplementedError("Greedy protocol must implement score method")

    def route(self, candidates: CandidateLinkSet, topology: Topology) -> RouteOutcome:
        graph = candidates.graph
        current = candidates.source
        path = [current]
        # Every hop reduces the remaining distance, so no node can repeat.
        for _ in range(graph.number_of_nodes()):
            if current == candidates.destination:
                return self.create_outcome(path, candidates)
            edges = list(graph.out_edges(current, data=True))
            if not edges:
                return self.failure()
            # Ties go to the lowest mobile index.
            _, current, _ = min(
                edges, key=lambda edge: (self.score(edge[1], edge[2], topology), edge[1])
            )
            path.append(current)
        if current == candidates.destination:
            return self.create_outcome(path, candidates)
        return self.failure()


class NearestNeighborRouting(GreedyRouting):
    """NNR: follow the shortest outgoing candidate link."""

    id = Protocol.NNR
    name = "Nearest-neighbor routing"
    description = "Greedy choice of the shortest candidate link"

    def score(self, rx: int, edge: Dict[str, Any], topology: Topology) -> float:
        return edge["length"]


class MaximumProgressRouting(GreedyRouting):
    """MPR: follow the candidate link ending closest to the destination."""

    id = Protocol.MPR
    name = "Maximum-progress routing"
    description = "Greedy choice of the candidate link minimizing remaining distance"

    def score(self, rx: int, edge: Dict[str, Any], topology: Topology) -> float:
        return float(topology.distance_to_destination[rx])


def nearest_neighbor_path(
    candidates: CandidateLinkSet, topology: Topology
) -> RouteOutcome:
    return NearestNeighborRouting().route(candidates, topology)


def maximum_progress_path(
    candidates: CandidateLinkSet, topology: Topology
) -> RouteOutcome:
    return MaximumProgressRouting().route(candidates, topology)

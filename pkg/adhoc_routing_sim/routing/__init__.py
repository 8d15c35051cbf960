# __init__.py - Routing package initialization
"""
This module exports the routing types, the link-level operations and the
three routing protocols, and registers the protocols with the registry.
"""

from .base import Protocol, RouteOutcome, RoutingProtocol, ProtocolRegistry
from .links import (
    ServiceRealization,
    LinkSet,
    CandidateLinkSet,
    draw_service,
    included_links,
    simulate_link_attempts,
    draw_attempts,
    link_delay,
)
from .least_delay import LeastDelayRouting, least_delay_path
from .greedy import (
    NearestNeighborRouting,
    MaximumProgressRouting,
    nearest_neighbor_path,
    maximum_progress_path,
)

for _protocol_class in (LeastDelayRouting, NearestNeighborRouting, MaximumProgressRouting):
    ProtocolRegistry.register_protocol(_protocol_class)

__all__ = [
    "Protocol",
    "RouteOutcome",
    "RoutingProtocol",
    "ProtocolRegistry",
    "ServiceRealization",
    "LinkSet",
    "CandidateLinkSet",
    "draw_service",
    "included_links",
    "simulate_link_attempts",
    "draw_attempts",
    "link_delay",
    "LeastDelayRouting",
    "NearestNeighborRouting",
    "MaximumProgressRouting",
    "least_delay_path",
    "nearest_neighbor_path",
    "maximum_progress_path",
]

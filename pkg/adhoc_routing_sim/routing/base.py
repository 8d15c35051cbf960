# base.py - Base functionality for routing protocols
"""
Base functionality and registry for routing protocols.
This module provides the route outcome type and the protocol base class
that the least-delay, nearest-neighbor and maximum-progress protocols extend.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Type

from ..topology import Topology
from .links import CandidateLinkSet


class Protocol(str, Enum):
    """
    Identifiers of the routing protocols.
    Inherits from str so values print and compare as their short names.
    """

    LDR = "LDR"
    NNR = "NNR"
    MPR = "MPR"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str) -> "Protocol":
        try:
            return cls(name.upper())
        except ValueError:
            raise ValueError(f"Unknown routing protocol {name!r}") from None


@dataclass(frozen=True)
class RouteOutcome:
    """Result of one protocol in one trial"""

    protocol: Protocol
    success: bool
    path: Tuple[int, ...] = ()
    delay: Optional[float] = None
    hops: int = 0

    @property
    def links(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(zip(self.path[:-1], self.path[1:]))

    @property
    def inverse_delay(self) -> float:
        """1 / T, which is zero on a routing failure."""
        if not self.success:
            return 0.0
        return 1.0 / self.delay


class RoutingProtocol:
    """Base class for all routing protocols"""

    id: Protocol = None  # Should be overridden by subclasses
    name: str = ""  # Should be overridden by subclasses
    description: str = ""  # Should be overridden by subclasses

    @property
    def protocol_id(self) -> Protocol:
        return self.id

    def route(self, candidates: CandidateLinkSet, topology: Topology) -> RouteOutcome:
        """
        Select a path from the source to the destination.
        Must be implemented by concrete protocol classes.

        Args:
            candidates: Candidate links of the current trial
            topology: Positions of the mobiles

        Returns:
            A successful outcome with its path, or a routing failure
        """
        raise NotImplementedError("Protocol must implement route method")

    def failure(self) -> RouteOutcome:
        """Helper method to record a routing failure"""
        return RouteOutcome(protocol=self.id, success=False)

    def create_outcome(
        self, path: Sequence[int], candidates: CandidateLinkSet
    ) -> RouteOutcome:
        """Helper method to create an outcome from a node sequence"""
        delays = candidates.delay_of
        delay = sum(delays[link] for link in zip(path[:-1], path[1:]))
        return RouteOutcome(
            protocol=self.id,
            success=True,
            path=tuple(int(node) for node in path),
            delay=float(delay),
            hops=len(path) - 1,
        )


class ProtocolRegistry:
    """Registry for all available routing protocols"""

    _protocols: Dict[Protocol, Type[RoutingProtocol]] = {}

    @classmethod
    def register_protocol(cls, protocol_class: Type[RoutingProtocol]) -> None:
        """Register a new protocol class"""
        cls._protocols[Protocol(protocol_class.id)] = protocol_class

    @classmethod
    def get_protocol(cls, protocol: str) -> Type[RoutingProtocol]:
        """Get a protocol class by its identifier"""
        return cls._protocols[Protocol.parse(protocol)]

    @classmethod
    def get_all_protocols(cls) -> List[Type[RoutingProtocol]]:
        """Get all registered protocols in identifier order"""
        return [cls._protocols[p] for p in Protocol if p in cls._protocols]

    @classmethod
    def create_protocols(
        cls, protocols: Optional[Sequence[str]] = None
    ) -> List[RoutingProtocol]:
        """Create instances of the selected (default: all) protocols"""
        if protocols is None:
            return [protocol_class() for protocol_class in cls.get_all_protocols()]
        return [cls.get_protocol(protocol)() for protocol in protocols]

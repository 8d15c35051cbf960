# links.py - Relay availability, included links and candidate links
"""
Service draws, the distance criterion, per-link retransmission trials and
the candidate link set that every routing protocol works on.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional, Set, Tuple, Union

import networkx as nx
import numpy as np

from ..errors import InvalidInputError
from ..topology import Topology

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class ServiceRealization:
    """
    Relay availability and transmit probabilities for one service draw.
    Arrays cover all M + 2 mobiles; the source and destination are always
    available endpoints and never transmit as interferers.
    """

    available: np.ndarray
    transmit_prob: np.ndarray

    def __post_init__(self):
        available = np.array(self.available, dtype=bool)
        transmit_prob = np.array(self.transmit_prob, dtype=float)
        if available.shape != transmit_prob.shape or available.ndim != 1:
            raise InvalidInputError("availability and transmit probabilities must align")
        if np.any(transmit_prob[available] != 0):
            raise InvalidInputError("available relays must have transmit probability 0")
        for name, value in (("available", available), ("transmit_prob", transmit_prob)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def num_mobiles(self) -> int:
        return len(self.available)

    @property
    def available_relays(self) -> np.ndarray:
        return np.flatnonzero(self.available[1:-1]) + 1

    @property
    def interferers(self) -> np.ndarray:
        """Relays that are out of service and may transmit."""
        relays = np.arange(1, self.num_mobiles - 1)
        return relays[~self.available[1:-1] & (self.transmit_prob[1:-1] > 0)]


def _per_mobile(value: ArrayLike, size: int, what: str) -> np.ndarray:
    array = np.broadcast_to(np.asarray(value, dtype=float), (size,)).copy()
    if np.any((array < 0) | (array > 1)):
        raise InvalidInputError(f"{what} must lie in [0, 1]")
    return array


def draw_service(
    mu: ArrayLike,
    p: ArrayLike,
    rng: np.random.Generator,
    num_relays: Optional[int] = None,
) -> ServiceRealization:
    """
    Mark each relay available with probability mu (per relay) and silence
    every available relay. p may be given per relay (M values) or per
    mobile (M + 2 values); the endpoints never transmit.
    """
    if num_relays is None:
        if np.ndim(mu) == 0:
            raise InvalidInputError("num_relays is required with a scalar mu")
        num_relays = len(mu)
    mu = _per_mobile(mu, num_relays, "service probability")
    p = np.asarray(p, dtype=float)
    if p.ndim == 1 and len(p) == num_relays + 2:
        p = p[1:-1]
    p = _per_mobile(p, num_relays, "transmit probability")

    relay_available = rng.random(num_relays) < mu
    available = np.concatenate(([True], relay_available, [True]))
    transmit_prob = np.concatenate(([0.0], np.where(relay_available, 0.0, p), [0.0]))
    return ServiceRealization(available=available, transmit_prob=transmit_prob)


@dataclass(frozen=True, eq=False)
class LinkSet:
    """Ordered links (tx[l], rx[l]) with their lengths"""

    tx: np.ndarray
    rx: np.ndarray
    length: np.ndarray

    def __len__(self) -> int:
        return len(self.tx)

    def pairs(self) -> Set[Tuple[int, int]]:
        return {(int(a), int(b)) for a, b in zip(self.tx, self.rx)}


def included_links(topology: Topology, service: ServiceRealization) -> LinkSet:
    """
    All links between the source, available relays and the destination
    that strictly reduce the remaining distance to the destination.
    """
    if service.num_mobiles != topology.num_mobiles:
        raise InvalidInputError("service realization does not match the topology")
    nodes = np.flatnonzero(service.available)
    remaining = topology.distance_to_destination
    a, b = np.meshgrid(nodes, nodes, indexing="ij")
    a, b = a.ravel(), b.ravel()
    keep = (
        (a != b)
        & (b != topology.source)
        & (a != topology.destination)
        & (remaining[b] < remaining[a])
    )
    a, b = a[keep], b[keep]
    return LinkSet(tx=a, rx=b, length=topology.distances[a, b])


def simulate_link_attempts(
    eps: float, max_attempts: int, rng: np.random.Generator
) -> Optional[int]:
    """
    Transmit until the first success, at most max_attempts times.
    Returns the number of attempts used, or None if every attempt failed.
    """
    if not 0 <= eps <= 1:
        raise InvalidInputError("outage probability must lie in [0, 1]")
    if max_attempts < 1:
        raise InvalidInputError("at least one transmission attempt is required")
    for attempt in range(1, max_attempts + 1):
        if rng.random() >= eps:
            return attempt
    return None


def draw_attempts(
    eps: np.ndarray, max_attempts: int, rng: np.random.Generator
) -> np.ndarray:
    """
    Vectorised simulate_link_attempts: truncated geometric attempt counts,
    with 0 marking links that failed all max_attempts transmissions.
    """
    eps = np.asarray(eps, dtype=float)
    if max_attempts < 1:
        raise InvalidInputError("at least one transmission attempt is required")
    success = np.where(eps < 1.0, 1.0 - eps, 1.0)
    attempts = rng.geometric(success)
    attempts[(attempts > max_attempts) | (eps >= 1.0)] = 0
    return attempts


def link_delay(attempts, transmission_delay: float = 1.0, excess_delay: float = 1.0):
    """N T + (N - 1) T_e"""
    if np.any(np.asarray(attempts) < 1):
        raise InvalidInputError("a candidate link needs at least one attempt")
    return attempts * transmission_delay + (attempts - 1) * excess_delay


@dataclass(frozen=True, eq=False)
class CandidateLinkSet:
    """Included links that delivered within the allowed attempts"""

    tx: np.ndarray
    rx: np.ndarray
    length: np.ndarray
    attempts: np.ndarray
    delay: np.ndarray
    source: int
    destination: int
    eps: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.tx)

    @classmethod
    def from_attempts(
        cls,
        links: LinkSet,
        attempts: np.ndarray,
        topology: Topology,
        transmission_delay: float = 1.0,
        excess_delay: float = 1.0,
        eps: Optional[np.ndarray] = None,
    ) -> "CandidateLinkSet":
        """Keep the links with attempts in 1..B and attach their delays."""
        attempts = np.asarray(attempts, dtype=int)
        keep = attempts > 0
        return cls(
            tx=links.tx[keep],
            rx=links.rx[keep],
            length=links.length[keep],
            attempts=attempts[keep],
            delay=link_delay(attempts[keep], transmission_delay, excess_delay),
            source=topology.source,
            destination=topology.destination,
            eps=None if eps is None else np.asarray(eps)[keep],
        )

    def pairs(self) -> Set[Tuple[int, int]]:
        return {(int(a), int(b)) for a, b in zip(self.tx, self.rx)}

    @cached_property
    def delay_of(self) -> Dict[Tuple[int, int], float]:
        return {
            (int(a), int(b)): float(d) for a, b, d in zip(self.tx, self.rx, self.delay)
        }

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Directed graph of the candidate links, source and destination included."""
        graph = nx.DiGraph()
        graph.add_nodes_from([self.source, self.destination])
        for a, b, length, attempts, delay in zip(
            self.tx, self.rx, self.length, self.attempts, self.delay
        ):
            graph.add_edge(
                int(a),
                int(b),
                length=float(length),
                attempts=int(attempts),
                delay=float(delay),
            )
        return graph

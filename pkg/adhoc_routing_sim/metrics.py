# metrics.py - Per-topology metrics and spatial averages
"""
Aggregation of route outcomes into path reliability, conditional average
delay and hop count, and normalized area spectral efficiency, first per
topology and then averaged over topologies.
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .errors import InvalidInputError
from .routing.base import Protocol, RouteOutcome


def transmitter_density(num_relays: int, net_radius: float = 1.0) -> float:
    """Every mobile except the destination is a potential transmitter."""
    return (num_relays + 1) / (math.pi * net_radius**2)


@dataclass(frozen=True)
class TopologyMetrics:
    """Metrics of one protocol over the K_t trials of one topology"""

    protocol: Protocol
    trials: int
    failures: int
    reliability: float
    cond_avg_delay: Optional[float]
    cond_avg_hops: Optional[float]
    ase: float
    topology_id: Optional[int] = None


@dataclass
class MetricsAccumulator:
    """
    Running sums for one protocol and one topology. Accumulators merge
    associatively so trial batches can be combined in any grouping.
    """

    protocol: Protocol
    trials: int = 0
    failures: int = 0
    delay_sum: float = 0.0
    hops_sum: int = 0
    inverse_delay_sum: float = 0.0

    def add(self, outcome: RouteOutcome) -> None:
        if outcome.protocol != self.protocol:
            raise InvalidInputError(
                f"outcome of {outcome.protocol} added to {self.protocol} metrics"
            )
        self.trials += 1
        if not outcome.success:
            self.failures += 1
            return
        self.delay_sum += outcome.delay
        self.hops_sum += outcome.hops
        self.inverse_delay_sum += outcome.inverse_delay

    def merge(self, other: "MetricsAccumulator") -> "MetricsAccumulator":
        if other.protocol != self.protocol:
            raise InvalidInputError("cannot merge metrics of different protocols")
        return MetricsAccumulator(
            protocol=self.protocol,
            trials=self.trials + other.trials,
            failures=self.failures + other.failures,
            delay_sum=self.delay_sum + other.delay_sum,
            hops_sum=self.hops_sum + other.hops_sum,
            inverse_delay_sum=self.inverse_delay_sum + other.inverse_delay_sum,
        )

    def finalize(
        self, density: float, topology_id: Optional[int] = None
    ) -> TopologyMetrics:
        if self.trials < 1:
            raise InvalidInputError("metrics need at least one trial")
        successes = self.trials - self.failures
        return TopologyMetrics(
            protocol=self.protocol,
            trials=self.trials,
            failures=self.failures,
            reliability=1.0 - self.failures / self.trials,
            cond_avg_delay=self.delay_sum / successes if successes else None,
            cond_avg_hops=self.hops_sum / successes if successes else None,
            ase=density / self.trials * self.inverse_delay_sum,
            topology_id=topology_id,
        )


def topology_metrics(
    outcomes: Sequence[RouteOutcome],
    trials: int,
    density: float,
    topology_id: Optional[int] = None,
) -> TopologyMetrics:
    """R_t, D_t, H_t and A_t from the outcomes of one protocol on one topology."""
    if trials < 1 or len(outcomes) != trials:
        raise InvalidInputError("expected exactly K_t ≥ 1 outcomes")
    protocols = {outcome.protocol for outcome in outcomes}
    if len(protocols) != 1:
        raise InvalidInputError("outcomes must all come from one protocol")
    accumulator = MetricsAccumulator(protocol=protocols.pop())
    for outcome in outcomes:
        accumulator.add(outcome)
    return accumulator.finalize(density, topology_id=topology_id)


@dataclass(frozen=True)
class SpatialAverages:
    """Unweighted means over topologies, with their standard errors"""

    protocol: Protocol
    topologies: int
    reliability: float
    cond_avg_delay: Optional[float]
    cond_avg_hops: Optional[float]
    ase: float
    reliability_se: float = 0.0
    delay_se: Optional[float] = None
    hops_se: Optional[float] = None
    ase_se: float = 0.0
    dropped_topologies: int = 0


def _mean_and_se(values: List[float]):
    if not values:
        return None, None
    array = np.asarray(values, dtype=float)
    se = float(array.std(ddof=1) / math.sqrt(len(array))) if len(array) > 1 else 0.0
    return float(array.mean()), se


def spatial_averages(per_topology: Iterable[TopologyMetrics]) -> SpatialAverages:
    """
    Average the per-topology metrics of one protocol. Topologies whose trials
    all failed have no conditional delay or hop count and are left out of
    those two means only; their number is reported as dropped_topologies.
    """
    per_topology = list(per_topology)
    if not per_topology:
        raise InvalidInputError("spatial averages need at least one topology")
    protocols = {metrics.protocol for metrics in per_topology}
    if len(protocols) != 1:
        raise InvalidInputError("metrics must all come from one protocol")

    reliability, reliability_se = _mean_and_se([m.reliability for m in per_topology])
    ase, ase_se = _mean_and_se([m.ase for m in per_topology])
    defined = [m for m in per_topology if m.cond_avg_delay is not None]
    delay, delay_se = _mean_and_se([m.cond_avg_delay for m in defined])
    hops, hops_se = _mean_and_se([m.cond_avg_hops for m in defined])
    return SpatialAverages(
        protocol=protocols.pop(),
        topologies=len(per_topology),
        reliability=reliability,
        cond_avg_delay=delay,
        cond_avg_hops=hops,
        ase=ase,
        reliability_se=reliability_se,
        delay_se=delay_se,
        hops_se=hops_se,
        ase_se=ase_se,
        dropped_topologies=len(per_topology) - len(defined),
    )

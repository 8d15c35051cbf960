# engine.py - Three-level Monte Carlo simulation
"""
Orchestrates topologies (level 1), service draws (level 2) and link-level
trials (level 3), wiring placement, channel, outage, routing and metrics
together. Every random stream is derived from the master seed and the
position in the loop nest, so results do not depend on execution order.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .channel import ChannelConfig, build_channel
from .errors import ConfigError, SimulationError
from .metrics import (
    MetricsAccumulator,
    SpatialAverages,
    TopologyMetrics,
    spatial_averages,
    transmitter_density,
)
from .outage import outage_table
from .routing import (
    CandidateLinkSet,
    Protocol,
    ProtocolRegistry,
    RouteOutcome,
    draw_attempts,
    draw_service,
    included_links,
)
from .topology import NetworkConfig, place_mobiles

logger = logging.getLogger(__name__)

ALL_PROTOCOLS: Tuple[str, ...] = tuple(str(p) for p in Protocol)


class StreamTag(IntEnum):
    """Independent random streams within one position of the loop nest"""

    PLACEMENT = 1
    SHADOWING = 2
    SERVICE = 3
    ATTEMPTS = 4
    ORACLE = 5


def derive_seed(
    master: int,
    topology_id: int,
    service_id: int,
    trial_id: int,
    stream_tag: int,
) -> int:
    """
    64-bit seed for one random stream, hashed from the master seed and the
    tuple (topology_id, service_id, trial_id, stream_tag) by numpy's
    SeedSequence. The mixing is fixed by numpy, so replays stay stable.
    """
    sequence = np.random.SeedSequence(
        entropy=int(master),
        spawn_key=(int(topology_id), int(service_id), int(trial_id), int(stream_tag)),
    )
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def stream(
    master: int, topology_id: int, service_id: int, trial_id: int, tag: StreamTag
) -> np.random.Generator:
    return np.random.default_rng(
        derive_seed(master, topology_id, service_id, trial_id, tag)
    )


@dataclass(frozen=True)
class SimulationPlan:
    """Loop sizes, retransmission limits, timing and protocol selection"""

    num_topologies: int = 100
    trials_per_topology: int = 400
    max_attempts: int = 4
    transmission_delay: float = 1.0
    excess_delay: float = 1.0
    master_seed: int = 0
    protocols: Tuple[str, ...] = ALL_PROTOCOLS

    def __post_init__(self):
        object.__setattr__(
            self, "protocols", tuple(str(Protocol.parse(p)) for p in self.protocols)
        )
        self.validate()

    def validate(self) -> None:
        if self.num_topologies < 1:
            raise ConfigError("number of topologies must be ≥ 1")
        if self.trials_per_topology < 1 or not _is_square(self.trials_per_topology):
            raise ConfigError("K_t must be a perfect square")
        if self.max_attempts < 1:
            raise ConfigError("maximum number of attempts B must be ≥ 1")
        if self.transmission_delay <= 0 or self.excess_delay < 0:
            raise ConfigError("delays must satisfy T > 0 and T_e ≥ 0")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master seed must be a 64-bit unsigned integer")
        if not self.protocols:
            raise ConfigError("at least one routing protocol is required")

    @property
    def draws_per_level(self) -> int:
        """sqrt(K_t): service draws per topology and trials per service draw"""
        return math.isqrt(self.trials_per_topology)


def _is_square(value: int) -> bool:
    return math.isqrt(value) ** 2 == value


@dataclass(frozen=True, eq=False)
class TrialRecord:
    """Outcomes of all selected protocols on the candidate links of one trial"""

    topology_id: int
    service_id: int
    trial_id: int
    outcomes: Dict[Protocol, RouteOutcome]
    candidates: Optional[CandidateLinkSet] = None

    def dominance_violated(self) -> bool:
        """True if a greedy path beats or outlives the least-delay path."""
        ldr = self.outcomes.get(Protocol.LDR)
        if ldr is None:
            return False
        for protocol in (Protocol.NNR, Protocol.MPR):
            greedy = self.outcomes.get(protocol)
            if greedy is None or not greedy.success:
                continue
            if not ldr.success or ldr.delay > greedy.delay:
                return True
        return False


@dataclass
class TopologyResult:
    """Everything one level-1 work unit produces"""

    topology_id: int
    metrics: Dict[Protocol, TopologyMetrics]
    dominance_violations: int = 0
    trials: List[TrialRecord] = field(default_factory=list)


@dataclass
class SimulationResult:
    """Per-topology metrics and spatial averages for every protocol"""

    plan: SimulationPlan
    per_topology: Dict[Protocol, List[TopologyMetrics]]
    averages: Dict[Protocol, SpatialAverages]
    dominance_violations: int = 0
    trials: List[TrialRecord] = field(default_factory=list)


class Simulator:
    """Main simulation class that coordinates the three nested levels"""

    def __init__(
        self,
        plan: SimulationPlan,
        network: NetworkConfig,
        channel: ChannelConfig,
        service_prob: Union[float, Sequence[float]] = 0.3,
        transmit_prob: Union[float, Sequence[float]] = 0.4,
        workers: int = 1,
        keep_trials: bool = False,
    ):
        channel.validate_against(network)
        self.plan = plan
        self.network = network
        self.channel = channel
        self.service_prob = service_prob
        self.transmit_prob = transmit_prob
        self.workers = max(1, int(workers))
        self.keep_trials = keep_trials
        self.protocols = ProtocolRegistry.create_protocols(plan.protocols)
        self.density = transmitter_density(network.num_relays, network.net_radius)

    def run(self) -> SimulationResult:
        """
        Run all topologies and merge their results in topology order

        This is the main entry point used by the sweep and the CLI
        """
        topology_ids = range(self.plan.num_topologies)
        if self.workers > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                results = list(self._logged(executor.map(self.run_topology, topology_ids)))
        else:
            results = list(self._logged(map(self.run_topology, topology_ids)))
        return self._merge(results)

    def _logged(self, results):
        total = self.plan.num_topologies
        for done, result in enumerate(results, 1):
            logger.info("topology %d/%d done", done, total)
            yield result

    def _merge(self, results: List[TopologyResult]) -> SimulationResult:
        results = sorted(results, key=lambda result: result.topology_id)
        per_topology = {
            protocol.id: [result.metrics[protocol.id] for result in results]
            for protocol in self.protocols
        }
        return SimulationResult(
            plan=self.plan,
            per_topology=per_topology,
            averages={
                protocol: spatial_averages(metrics)
                for protocol, metrics in per_topology.items()
            },
            dominance_violations=sum(r.dominance_violations for r in results),
            trials=[trial for result in results for trial in result.trials],
        )

    def run_topology(self, topology_id: int) -> TopologyResult:
        """Level 1: one topology with its shadowing, then all its service draws."""
        seed = self.plan.master_seed
        try:
            topology = place_mobiles(
                self.network, stream(seed, topology_id, 0, 0, StreamTag.PLACEMENT)
            )
            channel = build_channel(
                topology,
                self.channel,
                stream(seed, topology_id, 0, 0, StreamTag.SHADOWING),
            )
        except SimulationError as error:
            raise error.with_context(topology_id) from error

        result = TopologyResult(topology_id=topology_id, metrics={})
        accumulators = {
            protocol.id: MetricsAccumulator(protocol=protocol.id)
            for protocol in self.protocols
        }
        for service_id in range(self.plan.draws_per_level):
            try:
                self._run_service(
                    topology, channel, topology_id, service_id, accumulators, result
                )
            except SimulationError as error:
                raise error.with_context(topology_id, service_id) from error

        result.metrics = {
            protocol: accumulator.finalize(self.density, topology_id=topology_id)
            for protocol, accumulator in accumulators.items()
        }
        return result

    def _run_service(
        self,
        topology,
        channel,
        topology_id: int,
        service_id: int,
        accumulators: Dict[Protocol, MetricsAccumulator],
        result: TopologyResult,
    ) -> None:
        """Level 2: one availability draw, its outage table and its trials."""
        seed = self.plan.master_seed
        service = draw_service(
            self.service_prob,
            self.transmit_prob,
            stream(seed, topology_id, service_id, 0, StreamTag.SERVICE),
            num_relays=topology.num_relays,
        )
        links = included_links(topology, service)
        table = outage_table(
            channel, links.tx, links.rx, service.transmit_prob, service.interferers
        )

        for trial_id in range(self.plan.draws_per_level):
            # Level 3: all protocols share the candidate links of the trial.
            attempts = draw_attempts(
                table.eps,
                self.plan.max_attempts,
                stream(seed, topology_id, service_id, trial_id, StreamTag.ATTEMPTS),
            )
            candidates = CandidateLinkSet.from_attempts(
                links,
                attempts,
                topology,
                self.plan.transmission_delay,
                self.plan.excess_delay,
                eps=table.eps,
            )
            outcomes = {
                protocol.id: protocol.route(candidates, topology)
                for protocol in self.protocols
            }
            record = TrialRecord(
                topology_id=topology_id,
                service_id=service_id,
                trial_id=trial_id,
                outcomes=outcomes,
                candidates=candidates if self.keep_trials else None,
            )
            if record.dominance_violated():
                result.dominance_violations += 1
                logger.warning(
                    "dominance violated in topology %d, service %d, trial %d",
                    topology_id,
                    service_id,
                    trial_id,
                )
            if self.keep_trials:
                result.trials.append(record)
            for protocol, outcome in outcomes.items():
                accumulators[protocol].add(outcome)


def run(
    plan: SimulationPlan,
    network: NetworkConfig,
    channel: ChannelConfig,
    service_prob: Union[float, Sequence[float]],
    transmit_prob: Union[float, Sequence[float]],
    workers: int = 1,
    keep_trials: bool = False,
) -> SimulationResult:
    """Run a complete simulation and return its aggregated metrics."""
    return Simulator(
        plan,
        network,
        channel,
        service_prob=service_prob,
        transmit_prob=transmit_prob,
        workers=workers,
        keep_trials=keep_trials,
    ).run()

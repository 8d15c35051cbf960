# topology.py - Network realizations
"""
Placement of the source, the destination and the relays inside the
network disc using the uniform clustering process with exclusion zones.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from .errors import ConfigError, InvalidInputError, PlacementInfeasibleError

logger = logging.getLogger(__name__)

DEFAULT_MAX_REDRAWS = 10**6


@dataclass(frozen=True)
class NetworkConfig:
    """Geometry of the network disc and of the source/destination pair"""

    num_relays: int = 200
    net_radius: float = 1.0
    exclusion_radius: float = 0.05
    source_dest_distance: float = 0.5
    rng_seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.num_relays < 0:
            raise ConfigError("number of relays must be >= 0")
        if self.net_radius <= 0:
            raise ConfigError("network radius must be > 0")
        if not 0 <= self.exclusion_radius < self.net_radius:
            raise ConfigError("exclusion radius must satisfy 0 <= r_ex < r_net")
        if not 0 <= self.source_dest_distance <= self.net_radius:
            raise ConfigError(
                "source-destination distance must satisfy 0 <= distance <= r_net"
            )

    @property
    def num_mobiles(self) -> int:
        return self.num_relays + 2


@dataclass(frozen=True, eq=False)
class Topology:
    """
    Positions of the M + 2 mobiles of one network realization.
    Index 0 is the source, index M + 1 the destination, 1..M the relays.
    """

    positions: np.ndarray
    net_radius: float = 1.0
    exclusion_radius: float = 0.0
    distances: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float)
        if positions.ndim != 2 or positions.shape[1] != 2 or len(positions) < 2:
            raise InvalidInputError("positions must be an (M + 2) x 2 array")
        positions.setflags(write=False)
        diff = positions[:, None, :] - positions[None, :, :]
        distances = np.hypot(diff[..., 0], diff[..., 1])
        distances.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "distances", distances)

    @property
    def num_mobiles(self) -> int:
        return len(self.positions)

    @property
    def num_relays(self) -> int:
        return self.num_mobiles - 2

    @property
    def source(self) -> int:
        return 0

    @property
    def destination(self) -> int:
        return self.num_mobiles - 1

    @property
    def relays(self) -> np.ndarray:
        return np.arange(1, self.num_mobiles - 1)

    @property
    def distance_to_destination(self) -> np.ndarray:
        return self.distances[:, self.destination]

    def distance(self, i: int, j: int) -> float:
        return float(self.distances[i, j])

    def min_pairwise_distance(self) -> float:
        upper = np.triu_indices(self.num_mobiles, k=1)
        return float(self.distances[upper].min())

    def validate(self, tolerance: float = 1e-12) -> None:
        """Check the disc and exclusion-zone invariants."""
        radii = np.hypot(self.positions[:, 0], self.positions[:, 1])
        if np.any(radii > self.net_radius + tolerance):
            raise InvalidInputError("a mobile lies outside the network disc")
        if not np.allclose(self.positions[0], 0.0):
            raise InvalidInputError("the source must sit at the disc center")
        if self.min_pairwise_distance() < self.exclusion_radius - tolerance:
            raise InvalidInputError("two mobiles violate the exclusion radius")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "index": np.arange(self.num_mobiles),
                "x": self.positions[:, 0],
                "y": self.positions[:, 1],
            }
        )

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write one row per mobile with columns index,x,y."""
        self.to_frame().to_csv(path, index=False, float_format="%.17g")

    @classmethod
    def from_csv(
        cls,
        path: Union[str, Path],
        net_radius: float = 1.0,
        exclusion_radius: float = 0.0,
    ) -> "Topology":
        """Read a topology written by to_csv and check its invariants."""
        frame = pd.read_csv(path, float_precision="round_trip")
        missing = {"index", "x", "y"} - set(frame.columns)
        if missing:
            raise InvalidInputError(
                f"topology CSV is missing columns: {', '.join(sorted(missing))}"
            )
        frame = frame.sort_values("index")
        if not np.array_equal(frame["index"].to_numpy(), np.arange(len(frame))):
            raise InvalidInputError("topology CSV indices must be 0..M+1")
        topology = cls(
            frame[["x", "y"]].to_numpy(),
            net_radius=net_radius,
            exclusion_radius=exclusion_radius,
        )
        topology.validate()
        return topology


def uniform_disc_point(rng: np.random.Generator, radius: float) -> np.ndarray:
    """Draw one point uniformly from the disc of the given radius."""
    u, v = rng.random(2)
    r = radius * np.sqrt(u)
    theta = 2.0 * np.pi * v
    return np.array([r * np.cos(theta), r * np.sin(theta)])


def place_mobiles(
    cfg: NetworkConfig,
    rng: np.random.Generator,
    max_redraws: int = DEFAULT_MAX_REDRAWS,
) -> Topology:
    """
    Place the source at the disc center, the destination at distance
    source_dest_distance along the positive x-axis, then the relays one by one.
    A relay falling inside an exclusion zone is redrawn until it is clear of
    every previously placed mobile.
    """
    r_ex = cfg.exclusion_radius
    positions = np.zeros((cfg.num_mobiles, 2))
    positions[-1] = (cfg.source_dest_distance, 0.0)
    if cfg.source_dest_distance < r_ex:
        raise PlacementInfeasibleError(
            "destination lies inside the exclusion zone of the source"
        )

    # Source and destination first; relays are checked against both.
    placed = [positions[0], positions[-1]]
    total_redraws = 0
    for index in range(1, cfg.num_relays + 1):
        for attempt in range(max_redraws + 1):
            candidate = uniform_disc_point(rng, cfg.net_radius)
            if r_ex == 0:
                break
            gaps = np.hypot(*(np.asarray(placed) - candidate).T)
            if gaps.min() >= r_ex:
                break
        else:
            raise PlacementInfeasibleError(
                f"relay {index} needed more than {max_redraws} redraws; "
                "exclusion zones do not fit in the network disc"
            )
        total_redraws += attempt
        positions[index] = candidate
        placed.append(candidate)

    logger.debug(
        "placed %d relays with %d redraws", cfg.num_relays, total_redraws
    )
    return Topology(positions, net_radius=cfg.net_radius, exclusion_radius=r_ex)

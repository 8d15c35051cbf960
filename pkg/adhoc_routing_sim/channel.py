# channel.py - Channel realization for one topology
"""
Shadowing, distance-dependent Nakagami parameters, power-law path loss
and the normalized power table used by the outage computation.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from .errors import ConfigError, InvalidInputError
from .topology import NetworkConfig, Topology


def db_to_linear(value_db: float) -> float:
    return float(10.0 ** (value_db / 10.0))


@dataclass(frozen=True)
class ChannelConfig:
    """
    Propagation and receiver parameters. The SNR and the SINR threshold are
    stored as linear ratios; the shadowing spread stays in dB.
    """

    path_loss_exponent: float = 3.5
    shadowing_std_db: float = 8.0
    los_radius: float = 0.2
    snr: float = 1.0
    spreading_over_chip: float = 48.0
    sinr_threshold: float = db_to_linear(3.0)
    reference_distance: float = 0.05

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.path_loss_exponent < 2:
            raise ConfigError("path-loss exponent must be ≥ 2")
        if self.shadowing_std_db < 0:
            raise ConfigError("shadowing standard deviation must be ≥ 0 dB")
        if self.los_radius <= 0:
            raise ConfigError("line-of-sight radius must be > 0")
        if self.snr <= 0:
            raise ConfigError("SNR must be > 0")
        if self.spreading_over_chip <= 0:
            raise ConfigError("G/h must be > 0")
        if self.sinr_threshold <= 0:
            raise ConfigError("SINR threshold must be > 0")
        if self.reference_distance <= 0:
            raise ConfigError("reference distance must be > 0")

    def validate_against(self, network: NetworkConfig) -> None:
        if network.exclusion_radius < self.reference_distance:
            raise ConfigError(
                "exclusion radius must be ≥ the reference distance d_0"
            )

    @property
    def inv_snr(self) -> float:
        """z = 1 / Gamma"""
        return 1.0 / self.snr

    @classmethod
    def from_db(
        cls, snr_db: float = 0.0, sinr_threshold_db: float = 3.0, **kwargs
    ) -> "ChannelConfig":
        return cls(
            snr=db_to_linear(snr_db),
            sinr_threshold=db_to_linear(sinr_threshold_db),
            **kwargs,
        )


def path_loss(d, d_0: float, alpha: float):
    """Power-law path loss (d / d_0) ** -alpha, defined for d >= d_0."""
    d_arr = np.asarray(d, dtype=float)
    if d_0 <= 0:
        raise InvalidInputError("reference distance must be > 0")
    if np.any(d_arr < d_0):
        raise InvalidInputError(
            f"path loss is undefined below the reference distance {d_0}"
        )
    gain = (d_arr / d_0) ** -alpha
    return float(gain) if gain.ndim == 0 else gain


def nakagami_param(d: float, r_f: float) -> int:
    """Distance-dependent fading: 3 within r_f/2, 2 within r_f, 1 beyond."""
    if d <= r_f / 2:
        return 3
    if d <= r_f:
        return 2
    return 1


def nakagami_params(distances: np.ndarray, r_f: float) -> np.ndarray:
    """Vectorised nakagami_param."""
    distances = np.asarray(distances, dtype=float)
    return np.select(
        [distances <= r_f / 2, distances <= r_f], [3, 2], default=1
    ).astype(int)


def draw_shadowing(
    topology: Topology, shadowing_std_db: float, rng: np.random.Generator
) -> np.ndarray:
    """
    Independent zero-mean Gaussian shadowing in dB for every ordered pair.
    The diagonal is zero; the whole table is zero when shadowing is disabled.
    """
    if shadowing_std_db < 0:
        raise InvalidInputError("shadowing standard deviation must be ≥ 0")
    n = topology.num_mobiles
    if shadowing_std_db == 0:
        return np.zeros((n, n))
    table = rng.normal(0.0, shadowing_std_db, size=(n, n))
    np.fill_diagonal(table, 0.0)
    return table


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Channel state of one topology, fixed for all of its trials."""

    topology: Topology
    config: ChannelConfig
    shadow_db: np.ndarray
    powers: Optional[np.ndarray] = None
    nakagami_m: np.ndarray = field(init=False, repr=False)
    shadow_gain: np.ndarray = field(init=False, repr=False)
    attenuation: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.topology.num_mobiles
        shadow_db = np.array(self.shadow_db, dtype=float)
        if shadow_db.shape != (n, n):
            raise InvalidInputError("shadow table must be (M + 2) x (M + 2)")
        powers = np.ones(n) if self.powers is None else np.array(self.powers, float)
        if powers.shape != (n,) or np.any(powers <= 0):
            raise InvalidInputError("powers must be one positive value per mobile")

        distances = self.topology.distances
        off_diagonal = ~np.eye(n, dtype=bool)
        m = nakagami_params(distances, self.config.los_radius)
        m[~off_diagonal] = 0
        attenuation = np.zeros((n, n))
        d_0 = self.config.reference_distance
        attenuation[off_diagonal] = d_0 ** -self.config.path_loss_exponent * path_loss(
            distances[off_diagonal], d_0, self.config.path_loss_exponent
        )

        for name, value in (
            ("shadow_db", shadow_db),
            ("powers", powers),
            ("nakagami_m", m),
            ("shadow_gain", 10.0 ** (shadow_db / 10.0)),
            ("attenuation", attenuation),
        ):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def num_mobiles(self) -> int:
        return self.topology.num_mobiles

    def _check_index(self, *indices: int) -> None:
        for index in indices:
            if not 0 <= index < self.num_mobiles:
                raise InvalidInputError(f"mobile index {index} out of range")

    def normalized_power(self, i: int, j: int, k: int) -> float:
        """
        Normalized power of mobile i at receiver j when k is the desired
        transmitter. Interferers are scaled by h P_i / (G P_k).
        """
        self._check_index(i, j, k)
        if i == j:
            raise InvalidInputError("transmitter and receiver must differ")
        omega = self.shadow_gain[i, j] * self.attenuation[i, j]
        if i == k:
            return float(omega)
        ratio = self.powers[i] / self.powers[k]
        return float(ratio * omega / self.config.spreading_over_chip)

    def desired_omegas(self, tx: np.ndarray, rx: np.ndarray) -> np.ndarray:
        """Omega_{k,j} for each link (tx[l], rx[l])."""
        return self.shadow_gain[tx, rx] * self.attenuation[tx, rx]

    def interference_omegas(
        self, interferers: Sequence[int], tx: np.ndarray, rx: np.ndarray
    ) -> np.ndarray:
        """Omega_{i,j} for every link (rows) and interferer (columns)."""
        interferers = np.asarray(interferers, dtype=int)
        omega = (self.shadow_gain * self.attenuation)[np.ix_(interferers, rx)].T
        ratio = self.powers[interferers][None, :] / self.powers[tx][:, None]
        return ratio * omega / self.config.spreading_over_chip

    def shadow_frame(self) -> pd.DataFrame:
        n = self.num_mobiles
        i, j = np.nonzero(~np.eye(n, dtype=bool))
        return pd.DataFrame({"i": i, "j": j, "xi_db": self.shadow_db[i, j]})

    def shadow_csv(self, path: Union[str, Path]) -> None:
        """Debug dump of the shadowing table as i,j,xi_db."""
        self.shadow_frame().to_csv(path, index=False, float_format="%.17g")


def build_channel(
    topology: Topology,
    config: ChannelConfig,
    rng: np.random.Generator,
    powers: Optional[Sequence[float]] = None,
) -> ChannelRealization:
    """Draw the shadowing of a topology and wrap it in a realization."""
    shadow_db = draw_shadowing(topology, config.shadowing_std_db, rng)
    return ChannelRealization(
        topology=topology,
        config=config,
        shadow_db=shadow_db,
        powers=None if powers is None else np.asarray(powers, dtype=float),
    )

# config.py - Experiment configuration files
"""
Loading, validation and canonical emission of experiment configurations.

A configuration is a YAML document with one mapping per section. Key names
are unique across sections so that each key can also be given on the
command line as an option of the same name.
"""

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import yaml

from .channel import ChannelConfig, db_to_linear
from .engine import ALL_PROTOCOLS, SimulationPlan
from .errors import ConfigError, SimulationError
from .metrics import transmitter_density
from .outage import Interferer, LinkOutageInput
from .routing import Protocol
from .topology import NetworkConfig


@dataclass(frozen=True)
class ConfigKey:
    """One configurable value: where it lives, its type and default"""

    name: str
    section: str
    type: type
    default: Any
    help: str = ""


CONFIG_KEYS: Tuple[ConfigKey, ...] = (
    ConfigKey("num_relays", "network", int, 200, "Number of relays M"),
    ConfigKey("net_radius", "network", float, 1.0, "Network radius r_net"),
    ConfigKey("exclusion_radius", "network", float, 0.05, "Exclusion radius r_ex"),
    ConfigKey("source_dest_distance", "network", float, 0.5, "Source-destination distance"),
    ConfigKey("path_loss_exponent", "channel", float, 3.5, "Path-loss exponent alpha"),
    ConfigKey("shadowing_std_db", "channel", float, 8.0, "Shadowing standard deviation (dB)"),
    ConfigKey("los_radius", "channel", float, 0.2, "Line-of-sight radius r_f"),
    ConfigKey("snr_db", "channel", float, 0.0, "SNR Gamma at unit distance (dB)"),
    ConfigKey("spreading_over_chip", "channel", float, 48.0, "Spreading factor over chip factor G/h"),
    ConfigKey("sinr_threshold_db", "channel", float, 3.0, "SINR threshold beta (dB)"),
    ConfigKey("reference_distance", "channel", float, 0.05, "Reference distance d_0"),
    ConfigKey("service_prob", "service", float, 0.3, "Relay service probability mu"),
    ConfigKey("transmit_prob", "service", float, 0.4, "Interferer transmit probability p"),
    ConfigKey("num_topologies", "simulation", int, 100, "Number of topologies"),
    ConfigKey("trials_per_topology", "simulation", int, 400, "Trials per topology K_t"),
    ConfigKey("max_attempts", "simulation", int, 4, "Maximum transmission attempts B"),
    ConfigKey("transmission_delay", "simulation", float, 1.0, "Link transmission delay T"),
    ConfigKey("excess_delay", "simulation", float, 1.0, "Retransmission excess delay T_e"),
    ConfigKey("seed", "simulation", int, 0, "Master seed"),
    ConfigKey("threads", "simulation", int, 1, "Worker processes"),
    ConfigKey("protocols", "simulation", list, list(ALL_PROTOCOLS), "Routing protocols"),
    ConfigKey("out_dir", "output", str, "results", "Output directory"),
)

KEYS: Dict[str, ConfigKey] = {key.name: key for key in CONFIG_KEYS}
SECTIONS: Tuple[str, ...] = ("network", "channel", "service", "simulation", "output")

# Sweep axes that are not plain keys: densities over the transmitter density.
DENSITY_KEYS = {
    "contention_density": "transmit_prob",
    "relay_density": "service_prob",
}

PRESET_PACKAGE = "adhoc_routing_sim.presets"
DB_DECIMALS = 12


@dataclass(frozen=True)
class Axis:
    """A swept parameter and its values"""

    parameter: str
    values: Tuple[Any, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"parameter": self.parameter, "values": list(self.values)}


def _coerce(key: ConfigKey, value: Any) -> Any:
    if key.type is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key.name} must be a number, got {value!r}")
        return float(value)
    if key.type is int:
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            raise ConfigError(f"{key.name} must be an integer, got {value!r}")
        return value
    if key.type is list:
        if isinstance(value, str):
            value = [item.strip() for item in value.split(",") if item.strip()]
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{key.name} must be a list, got {value!r}")
        try:
            return [str(Protocol.parse(str(item))) for item in value]
        except ValueError as error:
            raise ConfigError(str(error)) from None
    return str(value)


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """
    A validated experiment. The declared settings (dB values as written)
    are kept for emission; the typed configs hold linear values.
    """

    settings: Dict[str, Any]
    sweep: Optional[Axis] = None
    series: Optional[Axis] = None
    name: str = ""
    network: NetworkConfig = field(init=False)
    channel: ChannelConfig = field(init=False)
    plan: SimulationPlan = field(init=False)

    def __post_init__(self):
        settings = {key.name: key.default for key in CONFIG_KEYS}
        for name, value in self.settings.items():
            if name not in KEYS:
                raise ConfigError(f"Unknown configuration key {name!r}")
            settings[name] = _coerce(KEYS[name], value)
        object.__setattr__(self, "settings", settings)

        try:
            network = NetworkConfig(
                num_relays=settings["num_relays"],
                net_radius=settings["net_radius"],
                exclusion_radius=settings["exclusion_radius"],
                source_dest_distance=settings["source_dest_distance"],
                rng_seed=settings["seed"],
            )
            channel = ChannelConfig.from_db(
                snr_db=settings["snr_db"],
                sinr_threshold_db=settings["sinr_threshold_db"],
                path_loss_exponent=settings["path_loss_exponent"],
                shadowing_std_db=settings["shadowing_std_db"],
                los_radius=settings["los_radius"],
                spreading_over_chip=settings["spreading_over_chip"],
                reference_distance=settings["reference_distance"],
            )
            channel.validate_against(network)
            plan = SimulationPlan(
                num_topologies=settings["num_topologies"],
                trials_per_topology=settings["trials_per_topology"],
                max_attempts=settings["max_attempts"],
                transmission_delay=settings["transmission_delay"],
                excess_delay=settings["excess_delay"],
                master_seed=settings["seed"],
                protocols=tuple(settings["protocols"]),
            )
        except SimulationError as error:
            raise ConfigError(error.message) from None
        for name in ("service_prob", "transmit_prob"):
            if not 0 <= settings[name] <= 1:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if settings["threads"] < 1:
            raise ConfigError("threads must be ≥ 1")

        object.__setattr__(self, "network", network)
        object.__setattr__(self, "channel", channel)
        object.__setattr__(self, "plan", plan)
        for axis in (self.sweep, self.series):
            if axis is not None:
                self._check_axis(axis)

    def _check_axis(self, axis: Axis) -> None:
        if axis.parameter not in KEYS and axis.parameter not in DENSITY_KEYS:
            raise ConfigError(f"Unknown sweep parameter {axis.parameter!r}")
        if axis.parameter in ("seed", "threads", "out_dir", "protocols"):
            raise ConfigError(f"{axis.parameter} cannot be swept")
        if not axis.values:
            raise ConfigError(f"sweep over {axis.parameter} has no values")
        for value in axis.values:
            self.with_value(axis.parameter, value, keep_axes=False)

    @property
    def service_prob(self) -> float:
        return self.settings["service_prob"]

    @property
    def transmit_prob(self) -> float:
        return self.settings["transmit_prob"]

    @property
    def threads(self) -> int:
        return self.settings["threads"]

    @property
    def out_dir(self) -> Path:
        return Path(self.settings["out_dir"])

    @property
    def density(self) -> float:
        return transmitter_density(self.network.num_relays, self.network.net_radius)

    def with_value(
        self, parameter: str, value: Any, keep_axes: bool = True
    ) -> "ExperimentConfig":
        """A copy with one parameter changed; densities set p or mu."""
        settings = dict(self.settings)
        if parameter in DENSITY_KEYS:
            settings[DENSITY_KEYS[parameter]] = float(value) / self.density
        else:
            settings[parameter] = value
        return ExperimentConfig(
            settings=settings,
            sweep=self.sweep if keep_axes else None,
            series=self.series if keep_axes else None,
            name=self.name,
        )

    def with_overrides(self, overrides: Dict[str, Any]) -> "ExperimentConfig":
        """A copy with command-line overrides applied (None means unset)."""
        settings = dict(self.settings)
        settings.update({k: v for k, v in overrides.items() if v is not None})
        return ExperimentConfig(
            settings=settings, sweep=self.sweep, series=self.series, name=self.name
        )

    def to_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {}
        if self.name:
            document["name"] = self.name
        for section in SECTIONS:
            document[section] = {
                key.name: self.settings[key.name]
                for key in CONFIG_KEYS
                if key.section == section
            }
        if self.sweep is not None:
            document["sweep"] = self.sweep.to_dict()
        if self.series is not None:
            document["series"] = self.series.to_dict()
        return document


def _axis(document: Dict[str, Any], section: str) -> Optional[Axis]:
    raw = document.get(section)
    if raw is None:
        return None
    if not isinstance(raw, dict) or set(raw) != {"parameter", "values"}:
        raise ConfigError(f"{section} must have exactly 'parameter' and 'values'")
    values = raw["values"]
    if not isinstance(values, list):
        values = [values]
    return Axis(parameter=str(raw["parameter"]), values=tuple(values))


def config_from_dict(document: Any) -> ExperimentConfig:
    """Build a config from an already parsed YAML document."""
    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ConfigError("configuration must be a mapping of sections")
    settings: Dict[str, Any] = {}
    for section, body in document.items():
        if section in ("name", "sweep", "series"):
            continue
        if section not in SECTIONS:
            raise ConfigError(f"Unknown configuration section {section!r}")
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError(f"section {section!r} must be a mapping")
        for name, value in body.items():
            key = KEYS.get(name)
            if key is None:
                raise ConfigError(f"Unknown configuration key {name!r}")
            if key.section != section:
                raise ConfigError(f"{name!r} belongs in section {key.section!r}")
            settings[name] = value
    return ExperimentConfig(
        settings=settings,
        sweep=_axis(document, "sweep"),
        series=_axis(document, "series"),
        name=str(document.get("name", "")),
    )


def parse_config_text(text: str) -> ExperimentConfig:
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as error:
        mark = getattr(error, "problem_mark", None)
        where = f"line {mark.line + 1}: " if mark is not None else ""
        problem = getattr(error, "problem", None) or str(error)
        raise ConfigError(f"Invalid configuration file: {where}{problem}") from None
    return config_from_dict(document)


def parse_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read and validate an experiment configuration file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise ConfigError(f"Cannot read configuration file: {error}") from None
    return parse_config_text(text)


def dump_config(cfg: ExperimentConfig) -> str:
    """Canonical YAML for a configuration; parse_config_text reads it back."""
    document = cfg.to_dict()
    for section in SECTIONS:
        for name, value in document[section].items():
            if name.endswith("_db"):
                document[section][name] = round(value, DB_DECIMALS)
    return yaml.safe_dump(document, sort_keys=False, allow_unicode=True)


def available_presets() -> List[str]:
    files = resources.files(PRESET_PACKAGE).iterdir()
    return sorted(f.name[: -len(".yml")] for f in files if f.name.endswith(".yml"))


def load_preset(name: str) -> ExperimentConfig:
    """Load one of the figure presets shipped with the package."""
    resource = resources.files(PRESET_PACKAGE) / f"{name}.yml"
    if not resource.is_file():
        raise ConfigError(
            f"Unknown preset {name!r}; choose from {', '.join(available_presets())}"
        )
    return parse_config_text(resource.read_text(encoding="utf-8"))


def axis_values(axis: Optional[Axis]) -> Sequence[Any]:
    return (None,) if axis is None else axis.values


@dataclass(frozen=True)
class LinkConfig:
    """A single link for the outage subcommand, with its oracle settings"""

    link: LinkOutageInput
    draws: int = 100_000
    seed: int = 0


LINK_KEYS = {
    "desired_omega",
    "desired_m",
    "snr_db",
    "sinr_threshold_db",
    "interferers",
    "draws",
    "seed",
}


def parse_link_config(path: Union[str, Path]) -> LinkConfig:
    """
    Read a link description: desired_omega, desired_m, snr_db,
    sinr_threshold_db, a list of interferers with omega, m and activity,
    and the number of oracle draws.
    """
    try:
        document = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except OSError as error:
        raise ConfigError(f"Cannot read link file: {error}") from None
    except yaml.YAMLError as error:
        raise ConfigError(f"Invalid link file: {error}") from None
    if not isinstance(document, dict):
        raise ConfigError("link file must be a mapping")
    unknown = sorted(set(document) - LINK_KEYS)
    if unknown:
        raise ConfigError(f"Unknown link keys: {', '.join(unknown)}")

    try:
        interferers = tuple(
            Interferer(
                omega=float(item["omega"]),
                m=int(item["m"]),
                activity=float(item.get("activity", 1.0)),
            )
            for item in document.get("interferers") or ()
        )
        link = LinkOutageInput(
            desired_omega=float(document["desired_omega"]),
            desired_m=int(document.get("desired_m", 1)),
            interferers=interferers,
            inv_snr=1.0 / db_to_linear(float(document.get("snr_db", 0.0))),
            threshold=db_to_linear(float(document.get("sinr_threshold_db", 3.0))),
        )
        link.validate()
    except SimulationError as error:
        raise ConfigError(error.message) from None
    except (KeyError, TypeError, ValueError) as error:
        raise ConfigError(f"Incomplete link description: {error}") from None
    return LinkConfig(
        link=link,
        draws=int(document.get("draws", 100_000)),
        seed=int(document.get("seed", 0)),
    )

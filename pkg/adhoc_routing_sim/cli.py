# cli.py - Command line interface
"""
Command line interface for the multihop routing simulator
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import click

from .channel import build_channel
from .config import (
    CONFIG_KEYS,
    ExperimentConfig,
    available_presets,
    config_from_dict,
    load_preset,
    parse_config,
    parse_link_config,
)
from .engine import StreamTag, stream
from .errors import SimulationError
from .outage import monte_carlo_outage, outage_probability
from .reporter import ConsoleReporter, CsvReporter, JsonReporter, Reporter
from .sweep import run_sweep, single_point
from .topology import place_mobiles

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

CLICK_TYPES = {int: int, float: float, str: str, list: str}


def get_reporter(format: str) -> Reporter:
    if format == "json":
        return JsonReporter()
    if format == "csv":
        return CsvReporter()
    if format == "plain":
        return ConsoleReporter(enable_color=False)
    if format == "console":
        return ConsoleReporter(enable_color=True)
    raise ValueError(f"Unrecognised format {format}")


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def experiment_options(func):
    """Add --config, --preset and one override option per configuration key."""
    for key in reversed(CONFIG_KEYS):
        func = click.option(
            "--" + key.name.replace("_", "-"),
            key.name,
            type=CLICK_TYPES[key.type],
            default=None,
            help=f"{key.help} (default: {key.default})",
        )(func)
    func = click.option(
        "--preset",
        type=click.Choice(available_presets()),
        help="Start from a shipped figure preset",
    )(func)
    func = click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="Path to configuration file",
    )(func)
    return func


def load_experiment(
    config_path: Optional[Path], preset: Optional[str], overrides: Dict[str, Any]
) -> ExperimentConfig:
    if config_path is not None and preset is not None:
        raise click.UsageError("--config and --preset are mutually exclusive")
    if config_path is not None:
        cfg = parse_config(config_path)
    elif preset is not None:
        cfg = load_preset(preset)
    else:
        cfg = config_from_dict({})
    return cfg.with_overrides(overrides)


format_option = click.option(
    "--format",
    "output_format",
    type=click.Choice(["console", "plain", "json", "csv"]),
    default="console",
    help="Output format (default: console)",
)
dump_trials_option = click.option(
    "--dump-trials",
    is_flag=True,
    help="Write candidate links and selected paths of every trial",
)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log debug messages")
def cli(verbose: bool) -> None:
    """Monte Carlo simulation of LDR, NNR and MPR multihop routing."""
    configure_logging(verbose)


@cli.command()
@experiment_options
@dump_trials_option
@format_option
def run(config_path, preset, dump_trials, output_format, **overrides) -> int:
    """Simulate a single configuration."""
    cfg = load_experiment(config_path, preset, overrides)
    if cfg.sweep is not None or cfg.series is not None:
        logger.warning("run ignores the sweep and series axes; use the sweep command")
    report = run_sweep(single_point(cfg), dump_trials=dump_trials, out_dir=cfg.out_dir)
    click.echo(get_reporter(output_format).format_report(report))
    return report.exit_code


@cli.command()
@experiment_options
@dump_trials_option
@format_option
def sweep(config_path, preset, dump_trials, output_format, **overrides) -> int:
    """Simulate every point of a sweep, one plot-data file per series value."""
    cfg = load_experiment(config_path, preset, overrides)
    if cfg.sweep is None:
        raise click.UsageError("the configuration has no sweep section")
    report = run_sweep(cfg, dump_trials=dump_trials)
    click.echo(get_reporter(output_format).format_report(report))
    return report.exit_code


@cli.command()
@experiment_options
@click.option("--topology-id", type=int, default=0, show_default=True)
@click.option(
    "--output",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Topology CSV path (default: <out-dir>/topology.csv)",
)
@click.option(
    "--dump-shadowing",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Also write the shadowing table of the topology to this path",
)
def topology(config_path, preset, topology_id, output, dump_shadowing, **overrides) -> int:
    """Write the placement the simulation uses for one topology."""
    cfg = load_experiment(config_path, preset, overrides)
    seed = cfg.plan.master_seed
    placed = place_mobiles(cfg.network, stream(seed, topology_id, 0, 0, StreamTag.PLACEMENT))
    output = output or cfg.out_dir / "topology.csv"
    output.parent.mkdir(parents=True, exist_ok=True)
    placed.to_csv(output)
    click.echo(f"Topology written to {output}")
    if dump_shadowing is not None:
        channel = build_channel(
            placed, cfg.channel, stream(seed, topology_id, 0, 0, StreamTag.SHADOWING)
        )
        dump_shadowing.parent.mkdir(parents=True, exist_ok=True)
        channel.shadow_csv(dump_shadowing)
        click.echo(f"Shadowing written to {dump_shadowing}")
    return 0


@cli.command()
@click.argument("link_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--draws", type=int, default=None, help="Monte Carlo draws")
def outage(link_file, draws) -> int:
    """Compare the closed-form outage probability of one link with sampling."""
    link_cfg = parse_link_config(link_file)
    draws = draws or link_cfg.draws
    eps = outage_probability(link_cfg.link)
    eps_hat, se = monte_carlo_outage(
        link_cfg.link, draws, stream(link_cfg.seed, 0, 0, 0, StreamTag.ORACLE)
    )
    click.echo(f"closed form: {eps:.17g}")
    click.echo(f"monte carlo: {eps_hat:.17g} ± {se:.3g} ({draws} draws)")
    return 0


def main(args: Optional[List[str]] = None) -> int:
    """Main entry point for the simulator"""
    if args is None:
        args = sys.argv[1:]

    try:
        result = cli.main(args=args, prog_name="adhoc-routing-sim", standalone_mode=False)
    except click.ClickException as error:
        error.show()
        return error.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except SimulationError as error:
        logger.error("%s", error)
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())

# sweep.py - Parameter sweeps over experiment configurations
"""
Runs one simulation per (series value, sweep value) point of an experiment
and writes the result files after every completed point, so a long sweep
leaves usable partial output behind.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional

import pandas as pd

from .config import ExperimentConfig, axis_values, dump_config
from .engine import SimulationResult, Simulator
from .reporter import (
    CsvReporter,
    PlotDataReporter,
    SimulationReport,
    TrialDumpWriter,
    topology_frame,
    write_csv,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepPoint:
    """One configuration of a sweep together with its axis values"""

    config: ExperimentConfig
    sweep_parameter: str = ""
    sweep_value: Any = None
    series_parameter: str = ""
    series_value: Any = None

    @property
    def label(self) -> str:
        parts = [
            f"{parameter}={value}"
            for parameter, value in (
                (self.series_parameter, self.series_value),
                (self.sweep_parameter, self.sweep_value),
            )
            if parameter
        ]
        return ", ".join(parts) or "single point"

    @property
    def file_stem(self) -> str:
        parts = [
            f"{parameter}_{value}"
            for parameter, value in (
                (self.series_parameter, self.series_value),
                (self.sweep_parameter, self.sweep_value),
            )
            if parameter
        ]
        return "__".join(parts) or "run"


def single_point(cfg: ExperimentConfig) -> ExperimentConfig:
    """The same settings with the sweep and series axes removed."""
    return ExperimentConfig(settings=cfg.settings, name=cfg.name)


def sweep_points(cfg: ExperimentConfig) -> List[SweepPoint]:
    """Expand the axes, series outermost, in declaration order."""
    sweep_parameter = cfg.sweep.parameter if cfg.sweep else ""
    series_parameter = cfg.series.parameter if cfg.series else ""
    points = []
    for series_value in axis_values(cfg.series):
        base = single_point(cfg)
        if series_parameter:
            base = base.with_value(series_parameter, series_value, keep_axes=False)
        for sweep_value in axis_values(cfg.sweep):
            config = base
            if sweep_parameter:
                config = config.with_value(sweep_parameter, sweep_value, keep_axes=False)
            points.append(
                SweepPoint(
                    config=config,
                    sweep_parameter=sweep_parameter,
                    sweep_value=sweep_value,
                    series_parameter=series_parameter,
                    series_value=series_value,
                )
            )
    return points


def run_point(point: SweepPoint, keep_trials: bool = False) -> SimulationResult:
    config = point.config
    return Simulator(
        config.plan,
        config.network,
        config.channel,
        service_prob=config.service_prob,
        transmit_prob=config.transmit_prob,
        workers=config.threads,
        keep_trials=keep_trials,
    ).run()


class SweepWriter:
    """Rewrites the summary, per-topology and plot-data files as points finish"""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.report = SimulationReport()
        self.topology_frames: List[pd.DataFrame] = []

    def add(self, point: SweepPoint, result: SimulationResult) -> None:
        self.report.add_result(
            result,
            sweep_parameter=point.sweep_parameter,
            sweep_value=point.sweep_value,
            series_parameter=point.series_parameter,
            series_value=point.series_value,
        )
        frame = topology_frame(result)
        frame.insert(0, "sweep_value", point.sweep_value)
        frame.insert(0, "sweep_parameter", point.sweep_parameter)
        frame.insert(0, "series_value", point.series_value)
        frame.insert(0, "series_parameter", point.series_parameter)
        self.topology_frames.append(frame)
        self.flush()

    def flush(self) -> None:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        (self.out_dir / "summary.csv").write_text(
            CsvReporter().format_report(self.report), encoding="utf-8"
        )
        write_csv(
            pd.concat(self.topology_frames, ignore_index=True),
            self.out_dir / "topology_metrics.csv",
        )
        self._write_plot_data()

    def _write_plot_data(self) -> None:
        series_values = []
        for row in self.report.rows:
            if row.series_value not in series_values:
                series_values.append(row.series_value)
        for series_value in series_values:
            rows = [row for row in self.report.rows if row.series_value == series_value]
            name = (
                f"{rows[0].series_parameter}_{series_value}.dat"
                if rows[0].series_parameter
                else "plot.dat"
            )
            (self.out_dir / name).write_text(
                PlotDataReporter().format_report(SimulationReport(rows=rows)),
                encoding="utf-8",
            )


def run_sweep(
    cfg: ExperimentConfig,
    dump_trials: bool = False,
    out_dir: Optional[Path] = None,
) -> SimulationReport:
    """
    Run every point of the experiment and write its result files

    All points share the master seed, so neighbouring sweep values see the
    same placements and draws wherever the changed parameter allows.
    """
    out_dir = Path(out_dir) if out_dir is not None else cfg.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.yml").write_text(dump_config(cfg), encoding="utf-8")

    points = sweep_points(cfg)
    writer = SweepWriter(out_dir)
    for index, point in enumerate(points, 1):
        logger.debug("starting %s", point.label)
        result = run_point(point, keep_trials=dump_trials)
        writer.add(point, result)
        if dump_trials:
            TrialDumpWriter(out_dir / "trials", prefix=f"{point.file_stem}_").write(
                result.trials
            )
        logger.info("sweep point %d/%d done (%s)", index, len(points), point.label)
    return writer.report

# reporter.py - Output formatters for simulation results
"""
Different output formatters for simulation results: CSV tables, gnuplot-style
plot data, a console summary, JSON, and the per-trial debug dump.
"""

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from .engine import SimulationResult, TrialRecord
from .metrics import SpatialAverages

FLOAT_FORMAT = "%.17g"


@dataclass
class SummaryRow:
    """Spatial averages of one protocol at one sweep point"""

    averages: SpatialAverages
    sweep_parameter: str = ""
    sweep_value: Any = None
    series_parameter: str = ""
    series_value: Any = None

    def to_record(self) -> Dict[str, Any]:
        a = self.averages
        return {
            "series_parameter": self.series_parameter,
            "series_value": self.series_value,
            "sweep_parameter": self.sweep_parameter,
            "sweep_value": self.sweep_value,
            "protocol": str(a.protocol),
            "R": a.reliability,
            "D": a.cond_avg_delay,
            "H": a.cond_avg_hops,
            "A": a.ase,
            "R_se": a.reliability_se,
            "D_se": a.delay_se,
            "H_se": a.hops_se,
            "A_se": a.ase_se,
            "topologies": a.topologies,
            "dropped_topologies": a.dropped_topologies,
        }


@dataclass
class SimulationReport:
    """All summary rows of a run or sweep"""

    rows: List[SummaryRow] = field(default_factory=list)
    dominance_violations: int = 0

    def add_result(
        self,
        result: SimulationResult,
        sweep_parameter: str = "",
        sweep_value: Any = None,
        series_parameter: str = "",
        series_value: Any = None,
    ) -> List[SummaryRow]:
        rows = [
            SummaryRow(
                averages=averages,
                sweep_parameter=sweep_parameter,
                sweep_value=sweep_value,
                series_parameter=series_parameter,
                series_value=series_value,
            )
            for averages in result.averages.values()
        ]
        self.rows.extend(rows)
        self.dominance_violations += result.dominance_violations
        return rows

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.to_record() for row in self.rows])

    @property
    def exit_code(self) -> int:
        return 1 if self.dominance_violations else 0

    def __len__(self):
        return len(self.rows)


def topology_frame(result: SimulationResult) -> pd.DataFrame:
    """One row per (topology, protocol)"""
    records = [
        {
            "topology_id": metrics.topology_id,
            "protocol": str(protocol),
            "R_t": metrics.reliability,
            "D_t": metrics.cond_avg_delay,
            "H_t": metrics.cond_avg_hops,
            "A_t": metrics.ase,
            "F_t": metrics.failures,
        }
        for protocol, per_topology in result.per_topology.items()
        for metrics in per_topology
    ]
    return pd.DataFrame(
        records, columns=["topology_id", "protocol", "R_t", "D_t", "H_t", "A_t", "F_t"]
    )


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8")
    return path


class Reporter(ABC):
    """Base class for simulation report formatters."""

    @abstractmethod
    def format_report(self, report: SimulationReport) -> str:
        pass


class CsvReporter(Reporter):
    """Reports the summary rows as CSV"""

    def format_report(self, report: SimulationReport) -> str:
        return report.frame().to_csv(index=False, float_format=FLOAT_FORMAT)


class PlotDataReporter(Reporter):
    """Whitespace-separated plot data with a commented header"""

    columns = ["sweep_value", "protocol", "R", "D", "H", "A"]

    def format_report(self, report: SimulationReport) -> str:
        lines = ["# " + " ".join(self.columns)]
        for row in report.rows:
            record = row.to_record()
            lines.append(" ".join(self._cell(record[column]) for column in self.columns))
        return "\n".join(lines) + "\n"

    @staticmethod
    def _cell(value: Any) -> str:
        if value is None:
            return "nan"
        if isinstance(value, float):
            return repr(value)
        return str(value)


class ConsoleReporter(Reporter):
    """Formats the summary as a table for the terminal"""

    def __init__(self, enable_color):
        self.enable_color = enable_color

    def _green(self, text):
        if not self.enable_color:
            return text
        return f"\033[32m{text}\033[0m"

    def _red(self, text):
        if not self.enable_color:
            return text
        return f"\033[31m{text}\033[0m"

    @staticmethod
    def _number(value: Optional[float]) -> str:
        return "undefined" if value is None else f"{value:.4f}"

    def format_report(self, report: SimulationReport) -> str:
        """Format the report as string"""
        if not report:
            return self._red("✗ No results")

        output = []
        for row in report.rows:
            point = []
            if row.series_parameter:
                point.append(f"{row.series_parameter}={row.series_value}")
            if row.sweep_parameter:
                point.append(f"{row.sweep_parameter}={row.sweep_value}")
            a = row.averages
            prefix = f"[{', '.join(point)}] " if point else ""
            output.append(
                f"{prefix}{a.protocol}: R={self._number(a.reliability)} "
                f"D={self._number(a.cond_avg_delay)} H={self._number(a.cond_avg_hops)} "
                f"A={self._number(a.ase)}"
            )
        if report.dominance_violations:
            output.append(
                self._red(f"✗ {report.dominance_violations} dominance violations")
            )
        else:
            output.append(self._green("✓ Simulation finished"))
        return "\n".join(output)


class JsonReporter(Reporter):
    """Reports the summary in JSON format"""

    def format_report(self, report: SimulationReport) -> str:
        return json.dumps(
            {
                "summary": [row.to_record() for row in report.rows],
                "dominance_violations": report.dominance_violations,
            },
            indent=2,
        )


class TrialDumpWriter:
    """Writes candidate links and selected paths of every kept trial"""

    def __init__(self, out_dir: Union[str, Path], prefix: str = ""):
        self.out_dir = Path(out_dir)
        self.prefix = prefix

    def write(self, trials: List[TrialRecord]) -> List[Path]:
        link_records = []
        path_records = []
        for trial in trials:
            ids = {
                "topology_id": trial.topology_id,
                "service_id": trial.service_id,
                "trial_id": trial.trial_id,
            }
            candidates = trial.candidates
            if candidates is not None:
                eps = candidates.eps
                for index in range(len(candidates)):
                    link_records.append(
                        {
                            **ids,
                            "a": int(candidates.tx[index]),
                            "b": int(candidates.rx[index]),
                            "distance": float(candidates.length[index]),
                            "eps": None if eps is None else float(eps[index]),
                            "N": int(candidates.attempts[index]),
                            "delay": float(candidates.delay[index]),
                        }
                    )
            for protocol, outcome in trial.outcomes.items():
                path_records.append(
                    {
                        **ids,
                        "protocol": str(protocol),
                        "success": outcome.success,
                        "delay": outcome.delay,
                        "hops": outcome.hops,
                        "path": " ".join(str(node) for node in outcome.path),
                    }
                )
        return [
            write_csv(
                pd.DataFrame(
                    link_records,
                    columns=["topology_id", "service_id", "trial_id", "a", "b",
                             "distance", "eps", "N", "delay"],
                ),
                self.out_dir / f"{self.prefix}candidate_links.csv",
            ),
            write_csv(
                pd.DataFrame(
                    path_records,
                    columns=["topology_id", "service_id", "trial_id", "protocol",
                             "success", "delay", "hops", "path"],
                ),
                self.out_dir / f"{self.prefix}paths.csv",
            ),
        ]


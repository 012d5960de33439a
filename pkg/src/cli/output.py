"""
CSV emission: header row, comma separator, '.' decimal, LF line endings.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from src.core.config import get_settings
from src.core.models import (
    AuditReport,
    BoundResult,
    CriticalEstimate,
    DistancePartition,
    Estimate,
    PartitionVerdict,
    ProbeRecord,
    SphereNeighborProfile,
)

logger = logging.getLogger(__name__)

ESTIMATE_COLUMNS = ["p", "trials", "successes", "p_hat", "ci_lo", "ci_hi"]
PROBE_COLUMNS = ["p", "trials", "successes", "ci_lo", "ci_hi", "seed", "decision"]


class CsvWriter:
    """Writes DataFrames to a file or stdout with a fixed float format."""

    def __init__(self, float_format: str = "%.10g"):
        self.float_format = float_format

    def write(self, frame: pd.DataFrame, output: Optional[str] = None) -> None:
        if output is None:
            frame.to_csv(
                sys.stdout, index=False, lineterminator="\n", float_format=self.float_format
            )
            return
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            frame.to_csv(handle, index=False, lineterminator="\n", float_format=self.float_format)
        logger.info(f"Wrote {len(frame)} rows to {path}")


def get_writer() -> CsvWriter:
    return CsvWriter(float_format=get_settings().float_format)


def estimates_frame(estimates: Sequence[Estimate]) -> pd.DataFrame:
    return pd.DataFrame([e.model_dump() for e in estimates], columns=ESTIMATE_COLUMNS)


def probes_frame(probes: Sequence[ProbeRecord]) -> pd.DataFrame:
    return pd.DataFrame([pr.model_dump() for pr in probes], columns=PROBE_COLUMNS)


def critical_row(graph: str, schedule: str, estimate: CriticalEstimate) -> Dict[str, Any]:
    return {
        "graph": graph,
        "schedule": schedule,
        "method": estimate.method,
        "target": estimate.target,
        "pc_hat": estimate.pc_hat,
        "p_lo": estimate.p_lo,
        "p_hi": estimate.p_hi,
        "width": estimate.width,
        "converged": estimate.converged,
        "degenerate": estimate.degenerate,
    }


def rows_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(rows)


def bound_row(result: BoundResult) -> Dict[str, Any]:
    """Flatten a BoundResult; parameters and preconditions become prefixed columns."""
    row: Dict[str, Any] = {
        "bound_name": result.name,
        "direction": result.direction,
        "value": result.value,
        "log_value": result.log_value,
        "preconds_ok": result.preconditions_met,
    }
    row.update({f"param_{k}": v for k, v in result.params.items()})
    row.update({f"pre_{k}": v for k, v in result.preconditions.items()})
    row.update(result.details)
    return row


def profile_frame(profile: SphereNeighborProfile) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "graph": profile.graph,
            "i": range(1, profile.k + 1),
            "f_i": profile.f,
            "exact": profile.exact,
        }
    )


def partition_row(
    graph: str, x: int, k: int, partition: DistancePartition, verdict: PartitionVerdict
) -> Dict[str, Any]:
    return {
        "graph": graph,
        "x": x,
        "k": k,
        "num_classes": partition.num_classes,
        "class_bound": partition.class_bound,
        "min_distance": partition.min_distance,
        "min_observed_distance": verdict.min_observed_distance,
        "disjoint": verdict.disjoint,
        "covers": verdict.covers,
        "distance_ok": verdict.distance_ok,
        "count_ok": verdict.count_ok,
        "sizes": " ".join(str(s) for s in partition.sizes),
    }


def classes_frame(partition: DistancePartition) -> pd.DataFrame:
    """``vertex,class`` rows, sorted by vertex."""
    rows = [(v, c) for c, members in enumerate(partition.classes) for v in members]
    return pd.DataFrame(sorted(rows), columns=["vertex", "class"])


def audit_row(graph: str, report: AuditReport) -> Dict[str, Any]:
    marginals = report.marginal_frequencies
    return {
        "graph": graph,
        "rounds": report.rounds,
        "structural_ok": report.structural_ok,
        "trials": report.trials,
        "pairs": report.pairs,
        "max_abs_correlation": report.max_abs_correlation,
        "threshold": report.threshold,
        "fraction_below": report.fraction_below,
        "marginal_min": min(marginals),
        "marginal_max": max(marginals),
        "marginal_ok": report.marginal_ok,
    }

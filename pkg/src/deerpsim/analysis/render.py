"""
Comparison tables and grouped-bar charts.

Charts are SVG. The hash salt is fixed and the date stamp left out, so
rendering the same table twice gives byte-identical files.
"""

from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from ..utils.error_handling import (  # noqa: E402
    EmptyTableError,
    FileProcessingError,
    ValidationError,
)
from ..utils.file_utils import ensure_directory  # noqa: E402
from ..utils.logging_config import get_logger  # noqa: E402
from .comparison import SUMMARY_METRICS, ComparisonResult, summarize  # noqa: E402
from .metrics import FIGURE_METRICS  # noqa: E402

logger = get_logger(__name__)

plt.rcParams["svg.hashsalt"] = "deerpsim"
plt.rcParams["svg.fonttype"] = "path"


def load_runs(path: Union[str, Path]) -> pd.DataFrame:
    """Read a saved raw comparison (``runs.csv``)."""
    path = Path(path)
    try:
        runs = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as e:
        raise FileProcessingError(str(path), "read", e) from e
    except pd.errors.EmptyDataError:
        raise EmptyTableError(f"runs table {path}")
    missing = {"protocol", "node_count"} - set(runs.columns)
    if missing:
        columns = ", ".join(sorted(missing))
        raise ValidationError("runs", str(path), f"{path} lacks columns: {columns}")
    return runs


def bar_chart(summary: pd.DataFrame, title: str, path: Path) -> Path:
    """
    Grouped bars: node counts on the x axis, one bar per protocol and the
    sample stddev as error bars.
    """
    protocols = list(dict.fromkeys(summary["protocol"]))
    counts = sorted(summary["node_count"].unique())
    x = np.arange(len(counts))
    width = 0.8 / len(protocols)

    fig, ax = plt.subplots(figsize=(8, 5))
    for i, protocol in enumerate(protocols):
        rows = (
            summary[summary["protocol"] == protocol]
            .set_index("node_count")
            .reindex(counts)
        )
        ax.bar(
            x + (i - (len(protocols) - 1) / 2) * width,
            rows["mean"].fillna(0.0).to_numpy(),
            width,
            yerr=rows["stddev"].fillna(0.0).to_numpy(),
            capsize=3,
            label=protocol,
        )
    ax.set_xticks(x)
    ax.set_xticklabels([str(c) for c in counts])
    ax.set_xlabel("Number of nodes")
    ax.set_ylabel(title)
    ax.set_title(title)
    ax.legend()
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def render(
    table: Union[ComparisonResult, pd.DataFrame],
    out_dir: Union[str, Path],
    metrics: Optional[Sequence[str]] = None,
    protocols: Optional[Sequence[str]] = None,
) -> Dict[str, str]:
    """
    Write ``metric_<name>.csv`` for every summarized metric and
    ``fig_<name>.svg`` for the energy figures.

    Returns a mapping of artifact name to path.
    """
    if isinstance(table, ComparisonResult):
        runs, protocols = table.runs, protocols or table.protocols
    else:
        runs = table
    if runs is None or runs.empty:
        raise EmptyTableError()

    out = ensure_directory(out_dir)
    files: Dict[str, str] = {}
    wanted = [m for m in (metrics or SUMMARY_METRICS) if m in runs.columns]

    for metric in wanted:
        summary = summarize(runs, metric, protocols)
        csv_path = out / f"metric_{metric}.csv"
        summary.to_csv(csv_path, index=False)
        files[f"metric_{metric}"] = str(csv_path)
        if metric in FIGURE_METRICS:
            fig_path = bar_chart(
                summary, FIGURE_METRICS[metric], out / f"fig_{metric}.svg"
            )
            files[f"fig_{metric}"] = str(fig_path)

    logger.info(f"Rendered {len(files)} report files to {out}")
    return files

"""Service rendering scatter, histogram and metric-curve figures as SVG."""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import numpy as np
import pandas as pd
from matplotlib import pyplot as plt
from statsmodels.stats.weightstats import DescrStatsW

from src.config.settings import settings
from src.core.errors import DimensionError, UsageError


def confidence_band(values: np.ndarray, level: float = settings.CONFIDENCE_LEVEL):
    """
    Per-column mean and normal-approximation confidence interval over seeds.

    Args:
        values: Array of shape (seeds, points)
        level: Coverage, 0.95 gives mean +/- 1.96 stderr

    Returns:
        (mean, lower, upper) arrays of length points
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] < 2:
        raise UsageError("confidence bands need at least two runs")
    stats = DescrStatsW(values)
    lower, upper = stats.zconfint_mean(alpha=1.0 - level)
    return stats.mean, np.asarray(lower), np.asarray(upper)


class SvgPlotService:
    """Service responsible only for writing figures to SVG files."""

    def _save(self, figure, path: Union[str, Path]) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            figure.savefig(path, format="svg")
            logging.info("Saved figure %s", path)
            return path
        except Exception as e:
            logging.error("Error saving figure %s: %s", path, e)
            raise
        finally:
            plt.close(figure)

    def scatter(
        self,
        point_sets: Sequence[np.ndarray],
        path: Union[str, Path],
        outlines: Optional[List[np.ndarray]] = None,
        labels: Optional[Sequence[str]] = None,
        x_label: str = "x1",
        y_label: str = "x2",
        title: Optional[str] = None,
    ) -> Path:
        """Two-dimensional scatter with optional verifier outlines."""
        figure, axis = plt.subplots(figsize=(6, 6))
        for index, points in enumerate(point_sets):
            points = np.atleast_2d(points)
            if points.shape[1] != 2:
                raise DimensionError(f"scatter2d needs 2-D points, got d={points.shape[1]}")
            label = labels[index] if labels else None
            axis.scatter(points[:, 0], points[:, 1], s=2, alpha=0.5, label=label)
        for line in outlines or []:
            axis.plot(line[:, 0], line[:, 1], color="red", linewidth=1.5)
        axis.set_xlabel(x_label)
        axis.set_ylabel(y_label)
        axis.set_aspect("equal", adjustable="datalim")
        if labels:
            axis.legend()
        if title:
            axis.set_title(title)
        return self._save(figure, path)

    def histogram(
        self,
        values: Sequence[np.ndarray],
        path: Union[str, Path],
        bins: int = 60,
        labels: Optional[Sequence[str]] = None,
        x_label: str = "x1",
        title: Optional[str] = None,
    ) -> List[np.ndarray]:
        """
        Marginal histograms on shared bin edges.

        Returns:
            Bin counts per input; each sums to its sample count
        """
        arrays = [np.asarray(v, dtype=np.float64).reshape(-1) for v in values]
        edges = np.histogram_bin_edges(np.concatenate(arrays), bins=bins)
        figure, axis = plt.subplots(figsize=(7, 4))
        counts = []
        for index, array in enumerate(arrays):
            count, _ = np.histogram(array, bins=edges)
            counts.append(count)
            label = labels[index] if labels else None
            axis.stairs(count, edges, label=label)
        axis.set_xlabel(x_label)
        axis.set_ylabel("count")
        if labels:
            axis.legend()
        if title:
            axis.set_title(title)
        self._save(figure, path)
        return counts

    def curve(
        self,
        frames: Sequence[pd.DataFrame],
        path: Union[str, Path],
        column: str = "entropy",
        phase: Optional[str] = None,
        x_label: str = "k",
        title: Optional[str] = None,
    ) -> pd.DataFrame:
        """
        Metric against k; a 95% band when several seed runs are given.

        Returns:
            Frame with columns k, mean, lower, upper
        """
        series = []
        for frame in frames:
            if column not in frame.columns:
                raise UsageError(f"metrics table has no column '{column}'")
            rows = frame if phase is None else frame[frame["phase"] == phase]
            series.append(rows.set_index("k")[column].astype(float))
        table = pd.concat(series, axis=1).dropna()
        if table.empty:
            raise UsageError("no common iterations to plot")
        ks = table.index.to_numpy()
        values = table.to_numpy().T
        if values.shape[0] >= 2:
            mean, lower, upper = confidence_band(values)
        else:
            mean = lower = upper = values[0]

        figure, axis = plt.subplots(figsize=(7, 4))
        axis.plot(ks, mean, marker="o")
        if values.shape[0] >= 2:
            axis.fill_between(ks, lower, upper, alpha=0.3)
        axis.set_xlabel(x_label)
        axis.set_ylabel(column)
        if title:
            axis.set_title(title)
        self._save(figure, path)
        return pd.DataFrame({"k": ks, "mean": mean, "lower": lower, "upper": upper})

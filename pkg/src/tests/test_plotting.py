from xml.etree import ElementTree

import numpy as np
import pandas as pd
import pytest

from src.core.errors import DimensionError, UsageError
from src.core.services.plotting import SvgPlotService, confidence_band
from src.core.services.verifiers import ellipse_verifier


@pytest.fixture
def plots():
    return SvgPlotService()


def is_svg(path) -> bool:
    return ElementTree.parse(path).getroot().tag.endswith("svg")


def metrics_frame(values):
    rows = [{"k": 0, "phase": "pretrained", "entropy": values[0]}]
    for k, value in enumerate(values[1:], start=1):
        rows.append({"k": k, "phase": "expand", "entropy": value + 0.5})
        rows.append({"k": k, "phase": "iterate", "entropy": value})
    return pd.DataFrame(rows)


def test_scatter_writes_valid_svg(plots, rng, tmp_path):
    outline = ellipse_verifier((0.0, 0.0), (2.0, 1.0), 0.3).outline()
    path = plots.scatter([rng.standard_normal((200, 2))], tmp_path / "figs" / "scatter.svg", outlines=outline)
    assert path.is_file()
    assert is_svg(path)


def test_scatter_rejects_other_dimensions(plots, rng, tmp_path):
    with pytest.raises(DimensionError):
        plots.scatter([rng.standard_normal((10, 3))], tmp_path / "scatter.svg")


def test_histogram_counts_sum_to_sample_size(plots, rng, tmp_path):
    first, second = rng.standard_normal(300), rng.uniform(-1.0, 1.0, 120)
    counts = plots.histogram([first, second], tmp_path / "hist.svg", bins=25, labels=["a", "b"])
    assert [int(c.sum()) for c in counts] == [300, 120]
    assert all(c.shape == (25,) for c in counts)
    assert is_svg(tmp_path / "hist.svg")


def test_confidence_band_two_runs():
    mean, lower, upper = confidence_band(np.array([[1.0, 0.0], [3.0, 0.0]]))
    np.testing.assert_allclose(mean, [2.0, 0.0])
    np.testing.assert_allclose(upper - mean, [1.959964, 0.0], atol=1e-6)
    np.testing.assert_allclose(mean - lower, upper - mean)


def test_confidence_band_needs_two_runs():
    with pytest.raises(UsageError):
        confidence_band(np.array([[1.0, 2.0]]))


def test_curve_over_seeds(plots, tmp_path):
    frames = [metrics_frame([1.0, 1.5, 2.0]), metrics_frame([1.2, 1.7, 2.4])]
    table = plots.curve(frames, tmp_path / "curve.svg", phase="iterate")
    assert list(table["k"]) == [1, 2]
    np.testing.assert_allclose(table["mean"], [1.6, 2.2])
    assert np.all(table["lower"] <= table["mean"]) and np.all(table["mean"] <= table["upper"])
    assert is_svg(tmp_path / "curve.svg")


def test_curve_single_run_has_no_band(plots, tmp_path):
    table = plots.curve([metrics_frame([1.0, 1.5])], tmp_path / "curve.svg", phase="iterate")
    np.testing.assert_array_equal(table["lower"], table["upper"])


def test_curve_needs_known_column(plots, tmp_path):
    with pytest.raises(UsageError):
        plots.curve([metrics_frame([1.0, 1.5])], tmp_path / "curve.svg", column="fid")

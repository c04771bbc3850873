"""SVG figures for samples and metric curves."""

from .svg_plot_service import SvgPlotService, confidence_band

__all__ = ["SvgPlotService", "confidence_band"]

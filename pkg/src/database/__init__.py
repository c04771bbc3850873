"""Data layer for checkpoints and CSV artifacts."""

"""Core numerical machinery of the flow expander."""

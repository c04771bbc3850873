"""Configuration models and plain records for the flow expander."""

"""Services package for the flow expander."""

"""Configuration package for application settings."""

"""Bundled scenario presets (JSON)."""

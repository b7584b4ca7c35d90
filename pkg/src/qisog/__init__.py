"""Supersingular l-isogeny graphs and their quaternion-side counterparts,
computed exactly at desk scale."""

__version__ = "0.1.0"

"""Irregular phased-array configuration and MU-MIMO assessment toolkit."""
__version__ = "0.1.0"

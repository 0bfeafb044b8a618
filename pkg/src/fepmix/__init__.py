"""Simulation and exact analysis of the facilitated exclusion process."""
__version__ = "0.1.0"

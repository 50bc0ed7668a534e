"""Crowd-navigation deep Q-learning with pluggable exploration strategies."""

__version__ = "0.1.0"

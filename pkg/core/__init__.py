"""
Core package for the VILLAIN link simulator.
Contains the channel, pilot, estimation, precoding and metric models plus the
experiment harness.
"""

__version__ = "0.1.0"

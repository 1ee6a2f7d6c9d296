"""
Utils package for the VILLAIN link simulator.
Contains logging and random-stream helpers shared by the core modules.
"""

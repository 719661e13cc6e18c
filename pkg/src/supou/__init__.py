"""Simulation and limit-theory toolkit for integrated supOU processes with heavy-tailed marginals."""
__version__ = "0.1.0"

"""
Satellite-assisted entanglement distribution over LEO constellations.

This package provides tools for:
- Positioning Walker-Star satellites and ground stations over time
- Building the static logical graph of a time window
- Serving entanglement requests with greedy and exact solvers
- Reproducing the evaluation scenarios as CSV tables

Example:
    >>> from src.config_loader import RunConfig
    >>> from src.commands import cmd_solve
    >>> config = RunConfig.from_file("input/config.json")
    >>> cmd_solve(config)
"""

__version__ = "1.0.0"

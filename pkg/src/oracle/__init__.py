"""
Reference oracles.

Exhaustive and closed-form checks used to validate the solvers and the
geometry on small inputs.
"""

from .brute_force import brute_force_oed
from .chord import chord_distance

__all__ = ["brute_force_oed", "chord_distance"]

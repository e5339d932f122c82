"""
Utility module.

This module provides helper functions for file system operations and
counter-based random draws.
"""

from .filesystem import ensure_directory, resolve_relative, write_json
from .rng import CounterRng, hash_ints, mix64

__all__ = ["CounterRng", "ensure_directory", "hash_ints", "mix64", "resolve_relative", "write_json"]

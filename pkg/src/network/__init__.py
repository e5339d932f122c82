"""
Logical network module.

This module provides the static logical graph of a time window, its
residual resource bookkeeping, and connection-request batches.
"""

from .logical_graph import (
    EntanglementPath,
    LogicalGraph,
    ResourceProfile,
    build_logical_graph,
)
from .requests import Request, RequestBatch, generate_requests

__all__ = [
    "EntanglementPath",
    "LogicalGraph",
    "ResourceProfile",
    "Request",
    "RequestBatch",
    "build_logical_graph",
    "generate_requests",
]

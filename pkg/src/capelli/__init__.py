"""Exact verification engine for Capelli-type invariant operators on Grassmannians."""

__version__ = "0.1.0"

"""
Command-line interface for deerpsim.

Single runs, protocol comparisons, preset inspection and report rendering.
"""

from .main import cli, main

__all__ = ["cli", "main"]

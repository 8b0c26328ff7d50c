"""Toolkit-wide error types with the CLI exit-code contract in mind."""
from __future__ import annotations


class Unreachable(Exception):
    """No path within the link budget (CLI exit code 1)."""

    def __init__(self, max_links=None):
        self.max_links = max_links
        super().__init__(f"no path within {max_links} links"
                         if max_links is not None else "no path")


class Inconclusive(Exception):
    """No path found while some sampling-based tests hit their depth limit."""


class ResourceLimit(Exception):
    """Desk-scale guard tripped (CLI exit code 3)."""


class BadWidth(ValueError):
    """Slit width outside the safe drift bound."""


class BadAngle(ValueError):
    """Crease angle outside the admissible range."""

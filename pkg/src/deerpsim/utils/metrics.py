"""
Run counters for deerpsim.

One collector belongs to one simulation run. Counters are keyed by name plus
optional tags, flattened as ``name|k=v,...`` so they export as one CSV column
per counter.
"""

from collections import defaultdict
from typing import Dict, Mapping, Optional


class MetricsCollector:
    """Collects counters for a single simulation run."""

    def __init__(self) -> None:
        self._counters: Dict[str, int] = defaultdict(int)

    def increment_counter(
        self, name: str, value: int = 1, tags: Optional[Dict[str, str]] = None
    ) -> None:
        """Increment a counter metric."""
        self._counters[self._make_key(name, tags)] += value

    def get_counter(self, name: str, tags: Optional[Dict[str, str]] = None) -> int:
        """Get counter value."""
        return self._counters.get(self._make_key(name, tags), 0)

    def counters(self) -> Dict[str, int]:
        """Snapshot of all counters, sorted by key."""
        return {k: self._counters[k] for k in sorted(self._counters)}

    @staticmethod
    def _make_key(name: str, tags: Optional[Dict[str, str]] = None) -> str:
        """Create metric key with tags."""
        if not tags:
            return name
        tag_str = ",".join(f"{k}={v}" for k, v in sorted(tags.items()))
        return f"{name}|{tag_str}"


def sum_counters(counters: Mapping[str, int], name: str) -> int:
    """Sum every counter called ``name``, whatever its tags."""
    return sum(v for k, v in counters.items() if k.split("|", 1)[0] == name)

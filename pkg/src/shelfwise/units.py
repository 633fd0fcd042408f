"""Time units used for rate estimation.

All timestamps are ingested at second resolution; rates are expressed
per one of these units. The unit travels with every discovered chain so
downstream computations cannot silently mix units.
"""
from __future__ import annotations

import enum


class TimeUnit(enum.Enum):
    SECONDS = "seconds"
    MINUTES = "minutes"
    HOURS = "hours"
    DAYS = "days"

    @property
    def seconds(self) -> float:
        """Length of one unit in seconds."""
        return _SECONDS[self]

    @classmethod
    def parse(cls, name: str) -> "TimeUnit":
        try:
            return cls(name.lower())
        except ValueError:
            valid = ", ".join(u.value for u in cls)
            raise ValueError(f"unknown time unit {name!r} (expected one of: {valid})") from None


_SECONDS = {
    TimeUnit.SECONDS: 1.0,
    TimeUnit.MINUTES: 60.0,
    TimeUnit.HOURS: 3600.0,
    TimeUnit.DAYS: 86400.0,
}

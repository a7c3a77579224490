"""Outcome reason codes shared by the protocols and the wire format."""

from __future__ import annotations

from enum import IntEnum


class Reason(IntEnum):
    OK = 0
    SMALL_INTERSECTION = 1
    INVALID_ENCODING = 2
    MALFORMED_MESSAGE = 3
    DISTANCE_EXCEEDED = 4
    DIGEST_MISMATCH = 5
    VALUE_MISMATCH = 6
    DECODE_FAILURE = 7
    DEPENDENT_QUERY = 8

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")

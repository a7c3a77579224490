"""Interactive hashing: m-1 rounds of linear queries pin the respondent's
m-bit input to a pair of strings without revealing which one it holds.

The querier sends uniformly random queries, each linearly independent of the
ones before it (drawn by rejection sampling); the respondent answers with the
inner product of the query and its input W.  After m-1 rounds the affine
solution set of the transcript has exactly two elements, published in
lexicographic order (bit 0 compared first).  Over the querier's randomness
the partner string of a fixed W is uniform over the remaining strings, and a
transcript never distinguishes its two solutions: both produce identical
responses to every query.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import gf2
from .bits import BitString

__all__ = ["IHOutcome", "Querier", "Respondent", "DependentQueryError", "solve_pair"]


class DependentQueryError(ValueError):
    """A query was linearly dependent on earlier ones (or zero)."""


class ProtocolStateError(RuntimeError):
    pass


@dataclass(frozen=True)
class IHOutcome:
    w0: BitString
    w1: BitString
    d: int | None = None  # respondent side: which output equals its input

    def __post_init__(self):
        if self.w0.lex_key() >= self.w1.lex_key():
            raise ValueError("outputs must be in strict lexicographic order")

    @property
    def pair(self) -> tuple[BitString, BitString]:
        return (self.w0, self.w1)


def solve_pair(queries: list[int], responses: list[int], m: int) -> tuple[BitString, BitString]:
    """The two solutions of the transcript, lexicographically ordered."""
    a, b = gf2.solve_affine_pair(queries, responses, m)
    sa, sb = BitString(m, a), BitString(m, b)
    return (sa, sb) if sa.lex_key() < sb.lex_key() else (sb, sa)


class Querier:
    """Query side of interactive hashing (sends m-1 independent queries)."""

    def __init__(self, m: int, rng: random.Random):
        if m < 2:
            raise ValueError("m must be at least 2")
        self.m = m
        self._rng = rng
        self._ech = gf2.Echelon()
        self._queries: list[int] = []
        self._responses: list[int] = []
        self._awaiting = False

    @property
    def rounds_done(self) -> int:
        return len(self._responses)

    @property
    def finished(self) -> bool:
        return len(self._responses) == self.m - 1

    def next_query(self) -> BitString:
        if self._awaiting:
            raise ProtocolStateError("previous response still pending")
        if self.finished:
            raise ProtocolStateError("all rounds are complete")
        while True:
            candidate = self._rng.getrandbits(self.m)
            if self._ech.reduce(candidate):
                break
        self._ech.add(candidate)
        self._queries.append(candidate)
        self._awaiting = True
        return BitString(self.m, candidate)

    def take_response(self, bit: int) -> None:
        if not self._awaiting:
            raise ProtocolStateError("no query is pending")
        if bit not in (0, 1):
            raise ValueError("response must be a bit")
        self._responses.append(bit)
        self._awaiting = False

    def outcome(self) -> IHOutcome:
        if not self.finished:
            raise ProtocolStateError("rounds still remaining")
        w0, w1 = solve_pair(self._queries, self._responses, self.m)
        return IHOutcome(w0, w1)


class Respondent:
    """Response side: holds the input W, validates query independence."""

    def __init__(self, m: int, w: BitString):
        if m < 2:
            raise ValueError("m must be at least 2")
        if w.length != m:
            raise ValueError("input length mismatch")
        self.m = m
        self._w = w.to_int()
        self._ech = gf2.Echelon()
        self._queries: list[int] = []
        self._responses: list[int] = []

    @property
    def finished(self) -> bool:
        return len(self._responses) == self.m - 1

    def respond(self, query: BitString) -> int:
        if self.finished:
            raise ProtocolStateError("all rounds are complete")
        if query.length != self.m:
            raise ValueError("query length mismatch")
        q = query.to_int()
        if not self._ech.add(q):
            raise DependentQueryError("query depends on earlier queries")
        bit = (q & self._w).bit_count() & 1
        self._queries.append(q)
        self._responses.append(bit)
        return bit

    def outcome(self) -> IHOutcome:
        if not self.finished:
            raise ProtocolStateError("rounds still remaining")
        w0, w1 = solve_pair(self._queries, self._responses, self.m)
        d = 0 if w0.to_int() == self._w else 1
        if (self._w == w0.to_int()) == (self._w == w1.to_int()):
            raise AssertionError("input must match exactly one output")
        return IHOutcome(w0, w1, d)

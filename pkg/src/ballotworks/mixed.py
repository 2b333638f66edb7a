"""Mixed systems: MMP compensation and parallel (two-tier) allocation."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ballotworks.apportionment import (
    DivisorFamily,
    SeatAllocation,
    highest_averages,
    largest_remainder,
)
from ballotworks.core import DEFAULT_TIE, TiePolicy, as_fraction


@dataclass(frozen=True)
class ApportionmentRule:
    """Which list method distributes the proportional seats."""

    family: DivisorFamily | None = DivisorFamily()
    quota_kind: str | None = None
    threshold: object = 0
    tie: TiePolicy = DEFAULT_TIE

    def allocate(self, party_votes: Mapping[str, object], seats: int) -> SeatAllocation:
        if self.quota_kind is not None:
            return largest_remainder(party_votes, seats, self.quota_kind, self.threshold, self.tie)
        return highest_averages(party_votes, seats, self.family or DivisorFamily(), self.threshold, self.tie)


@dataclass(frozen=True)
class MixedInput:
    constituency_seats: Mapping[str, int]
    party_votes: Mapping[str, object]
    rule: ApportionmentRule = field(default_factory=ApportionmentRule)

    def parties(self) -> list[str]:
        out = list(self.party_votes)
        out += [p for p in self.constituency_seats if p not in self.party_votes]
        return out


@dataclass(frozen=True)
class MixedRow:
    constituency: int
    list_seats: int
    target: int | None = None
    overhang: int = 0


def aggregate_party_votes(districts: Iterable[Mapping[str, tuple[str, int]]]) -> dict[str, int]:
    """Sum per-party candidate votes over constituencies.

    Each district maps candidate name to ``(party, votes)``; used when voters
    only vote for a constituency representative.
    """
    totals: dict[str, int] = defaultdict(int)
    for district in districts:
        for party, votes in district.values():
            totals[party] += votes
    return dict(totals)


def _check(inp: MixedInput) -> None:
    for p, s in inp.constituency_seats.items():
        if s < 0:
            raise ValueError(f"negative constituency seats for {p}")


def mmp(inp: MixedInput, total_seats: int) -> SeatAllocation:
    """Top up constituency seats towards a proportional share of ``total_seats``.

    Overhang seats are kept and not levelled, so the house can exceed
    ``total_seats``.
    """
    _check(inp)
    if sum(inp.constituency_seats.values()) > total_seats:
        raise ValueError("more constituency seats than the house size")
    votes = {p: inp.party_votes.get(p, 0) for p in inp.parties()}
    target = inp.rule.allocate(votes, total_seats)
    seats, rows, notes = {}, {}, []
    for p in inp.parties():
        won = inp.constituency_seats.get(p, 0)
        t = target.seats[p]
        top_up = max(0, t - won)
        over = max(0, won - t)
        seats[p] = won + top_up
        rows[p] = MixedRow(won, top_up, t, over)
        if over:
            notes.append(f"{p} keeps {over} overhang seat(s)")
    return SeatAllocation("mmp", seats, target.votes, rows, target.excluded_below_threshold,
                          notes=tuple(notes))


def parallel(inp: MixedInput, list_seats: int) -> SeatAllocation:
    """Constituency seats plus an independent list allocation of ``list_seats``."""
    _check(inp)
    if list_seats < 0:
        raise ValueError("list seats must be non-negative")
    parties = inp.parties()
    if list_seats:
        listed = inp.rule.allocate({p: inp.party_votes.get(p, 0) for p in parties}, list_seats)
        extra, votes, excl = listed.seats, listed.votes, listed.excluded_below_threshold
    else:
        extra, excl = {p: 0 for p in parties}, frozenset()
        votes = {p: as_fraction(inp.party_votes.get(p, 0)) for p in parties}
    seats = {p: inp.constituency_seats.get(p, 0) + extra[p] for p in parties}
    rows = {p: MixedRow(inp.constituency_seats.get(p, 0), extra[p]) for p in parties}
    return SeatAllocation("parallel", seats, votes, rows, excl)

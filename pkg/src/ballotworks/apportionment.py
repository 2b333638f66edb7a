"""Party seat apportionment: quotas, highest averages, largest remainders, open lists."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ballotworks.core import DEFAULT_TIE, TiePolicy, as_fraction
from ballotworks.errors import (
    MoreExtrasThanParties,
    QuotaOverallocation,
    ZeroSeats,
)

QUOTA_KINDS = ("hare", "droop", "hagenbach_bischoff", "imperiali")
DIVISOR_KINDS = ("dhondt", "sainte_lague", "modified_sainte_lague", "imperiali_divisors", "danish", "custom")


def quota(kind: str, votes, seats: int) -> int:
    """Integer quota; fractions are discarded as in most electoral laws."""
    if seats < 1:
        raise ZeroSeats("the number of seats must be positive")
    v = as_fraction(votes)
    if kind == "hare":
        return math.floor(v / seats)
    if kind == "droop":
        return 1 + math.floor(v / (seats + 1))
    if kind == "hagenbach_bischoff":
        return math.floor(v / (seats + 1))
    if kind == "imperiali":
        return math.floor(v / (seats + 2))
    raise ValueError(f"unknown quota kind {kind!r}")


@dataclass(frozen=True)
class DivisorFamily:
    kind: str = "dhondt"
    custom: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.kind not in DIVISOR_KINDS:
            raise ValueError(f"unknown divisor family {self.kind!r}")
        if self.kind == "custom":
            ds = [Fraction(d) for d in self.custom]
            if not ds or ds[0] <= 0 or any(a >= b for a, b in zip(ds, ds[1:])):
                raise ValueError("custom divisors must be positive and strictly increasing")

    def divisor(self, i: int) -> Fraction:
        """Divisor applied to a party that already holds ``i`` seats."""
        if self.kind == "dhondt":
            return Fraction(i + 1)
        if self.kind == "sainte_lague":
            return Fraction(2 * i + 1)
        if self.kind == "modified_sainte_lague":
            return Fraction(7, 5) if i == 0 else Fraction(2 * i + 1)
        if self.kind == "imperiali_divisors":
            return Fraction(i + 2)
        if self.kind == "danish":
            return Fraction(3 * i + 1)
        if i >= len(self.custom):
            raise ValueError("custom divisor sequence too short for the house size")
        return Fraction(self.custom[i])


@dataclass(frozen=True)
class RemainderRow:
    quotient: Fraction
    initial: int
    remainder: Fraction
    extra: int


@dataclass(frozen=True)
class SeatAllocation:
    """Seats per party plus the working that produced them.

    ``working`` maps each party to its list of averages (divisor methods) or
    to a :class:`RemainderRow` (largest remainder), or to method-specific
    rows for mixed systems.
    """

    method: str
    seats: Mapping[str, int]
    votes: Mapping[str, Fraction]
    working: Mapping[str, object] = field(default_factory=dict)
    excluded_below_threshold: frozenset[str] = frozenset()
    selected: tuple[tuple[str, int, Fraction], ...] = ()
    quota: int | None = None
    notes: tuple[str, ...] = ()

    @property
    def house_size(self) -> int:
        return sum(self.seats.values())


def _prepare(party_votes: Mapping[str, object], threshold) -> tuple[dict[str, Fraction], set[str]]:
    votes = {p: as_fraction(v) for p, v in party_votes.items()}
    for p, v in votes.items():
        if v < 0:
            raise ValueError(f"negative votes for {p}")
    total = sum(votes.values(), Fraction(0))
    t = as_fraction(threshold or 0)
    excluded = {p for p, v in votes.items() if v < t * total} if t > 0 else set()
    return votes, excluded


def _pick(tied: Sequence[str], order: Sequence[str], votes: Mapping[str, Fraction],
          tie: TiePolicy, context: str) -> str:
    idx = {p: order.index(p) for p in tied}
    chosen = tie.resolve([idx[p] for p in tied], highest=True,
                         history=[{idx[p]: votes[p] for p in tied}], context=context)
    return order[chosen]


def highest_averages(party_votes: Mapping[str, object], seats: int, family: DivisorFamily = DivisorFamily(),
                     threshold=0, tie: TiePolicy = DEFAULT_TIE) -> SeatAllocation:
    """Give the ``seats`` largest averages ``votes / divisor`` their seats.

    Ties on the last seat go to the larger raw vote, then to the party listed
    first, unless ``tie`` says otherwise.
    """
    if seats < 1:
        raise ZeroSeats("the number of seats must be positive")
    order = list(party_votes)
    votes, excluded = _prepare(party_votes, threshold)
    included = [p for p in order if p not in excluded]
    won = {p: 0 for p in order}
    selected: list[tuple[str, int, Fraction]] = []
    while len(selected) < seats and included:
        avgs = {p: votes[p] / family.divisor(won[p]) for p in included}
        best = max(avgs.values())
        group = [p for p in included if avgs[p] == best]
        remaining = seats - len(selected)
        if len(group) > remaining:
            winners = []
            pool = list(group)
            for _ in range(remaining):
                pick = _pick(pool, order, votes, tie, f"seat {len(selected) + len(winners) + 1}")
                winners.append(pick)
                pool.remove(pick)
            group = winners
        for p in group:
            selected.append((p, won[p], best))
            won[p] += 1
    width = max(seats, max(won.values(), default=0) + 1)
    working = {p: [votes[p] / family.divisor(i) for i in range(width)] for p in order}
    return SeatAllocation(family.kind, won, votes, working, frozenset(excluded), tuple(selected))


def largest_remainder(party_votes: Mapping[str, object], seats: int, quota_kind: str = "droop",
                      threshold=0, tie: TiePolicy = DEFAULT_TIE, *, total_votes=None) -> SeatAllocation:
    """Integer parts of ``votes / quota`` first, then one extra seat per largest remainder.

    ``total_votes`` is the valid-vote total used for the quota when the table
    lists only some of the parties.
    """
    if seats < 1:
        raise ZeroSeats("the number of seats must be positive")
    order = list(party_votes)
    votes, excluded = _prepare(party_votes, threshold)
    included = [p for p in order if p not in excluded]
    total = as_fraction(total_votes) if total_votes is not None else sum((votes[p] for p in included), Fraction(0))
    q = quota(quota_kind, total, seats)
    if q <= 0:
        raise ZeroSeats(f"{quota_kind} quota is zero for {total} votes")
    quotients = {p: votes[p] / q for p in included}
    initial = {p: math.floor(quotients[p]) for p in included}
    n_init = sum(initial.values())
    if n_init > seats:
        raise QuotaOverallocation(f"{quota_kind} quota {q} allocates {n_init} initial seats for a house of {seats}")
    extras_needed = seats - n_init
    if extras_needed > len(included):
        raise MoreExtrasThanParties(f"{extras_needed} extra seats but only {len(included)} parties")
    rem = {p: quotients[p] - initial[p] for p in included}
    extra = {p: 0 for p in included}
    pool = list(included)
    for i in range(extras_needed):
        best = max(rem[p] for p in pool)
        group = [p for p in pool if rem[p] == best]
        pick = group[0] if len(group) == 1 else _pick(group, order, votes, tie, f"extra seat {i + 1}")
        extra[pick] = 1
        pool.remove(pick)
    final = {p: (initial[p] + extra[p]) if p in initial else 0 for p in order}
    working = {p: RemainderRow(quotients[p], initial[p], rem[p], extra[p]) for p in included}
    return SeatAllocation(f"lr_{quota_kind}", final, votes, working, frozenset(excluded), quota=q)


def party_block_vote(party_votes: Mapping[str, object], seats: int, tie: TiePolicy = DEFAULT_TIE) -> SeatAllocation:
    """Winner takes all: the plurality party gets every seat."""
    if seats < 1:
        raise ZeroSeats("the number of seats must be positive")
    order = list(party_votes)
    votes = {p: as_fraction(v) for p, v in party_votes.items()}
    best = max(votes.values())
    group = [p for p in order if votes[p] == best]
    winner = group[0] if len(group) == 1 else order[tie.resolve([order.index(p) for p in group],
                                                               highest=True, context="party block")]
    return SeatAllocation("party_block", {p: seats if p == winner else 0 for p in order}, votes)


def open_list_order(party_seats: int, personal_votes: Mapping[str, int], tie: TiePolicy = TiePolicy("first_listed")) -> list[str]:
    """Elect the ``party_seats`` list candidates with most personal votes.

    Equal personal votes fall back to list position under the default policy.
    """
    order = list(personal_votes)
    if party_seats > len(order):
        raise ValueError(f"{party_seats} seats but only {len(order)} candidates on the list")
    elected: list[str] = []
    pool = list(order)
    while len(elected) < party_seats:
        best = max(personal_votes[c] for c in pool)
        group = [c for c in pool if personal_votes[c] == best]
        need = party_seats - len(elected)
        if len(group) <= need:
            elected.extend(group)
            for c in group:
                pool.remove(c)
            continue
        pick = order[tie.resolve([order.index(c) for c in group], highest=True, context="open list")]
        elected.append(pick)
        pool.remove(pick)
    return elected

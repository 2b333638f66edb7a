"""Candidate-based multi-winner methods: block, limited and single non-transferable votes, STV."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ballotworks.apportionment import SeatAllocation, party_block_vote, quota
from ballotworks.core import DEFAULT_TIE, Profile, TieEvent, TiePolicy, top_n
from ballotworks.errors import SeatsExceedCandidates, ZeroSeats
from ballotworks.rounds import Action, Piles, RoundReport, TallyResult
from ballotworks.single_winner import nominal_totals

__all__ = ["StvConfig", "block_vote", "sntv", "limited_vote", "party_block_vote", "stv", "SeatAllocation"]


def block_vote(profile: Profile, seats: int, mark_limit: int | None = None,
               tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """Top ``seats`` candidates by marks; each ballot marks at most ``mark_limit`` (default ``seats``)."""
    if seats < 1:
        raise ZeroSeats("the number of seats must be positive")
    if seats > profile.k:
        raise SeatsExceedCandidates(f"{seats} seats for {profile.k} candidates")
    limit = seats if mark_limit is None else mark_limit
    totals = nominal_totals(profile, limit)
    events: list[TieEvent] = []
    winners = top_n(totals, seats, tie, events=events)
    fr = {c: Fraction(v) for c, v in totals.items()}
    report = RoundReport(1, fr, Fraction(0), None, Action("elected", tuple(winners)))
    return TallyResult("block", profile.names, tuple(winners), (report,), tuple(events), fr)


def sntv(profile: Profile, seats: int, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    return block_vote(profile, seats, 1, tie)


def limited_vote(profile: Profile, seats: int, mark_limit: int, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    if not 1 < mark_limit < seats:
        raise ValueError("limited vote allows more than one but fewer than `seats` marks")
    return block_vote(profile, seats, mark_limit, tie)


@dataclass(frozen=True)
class StvConfig:
    seats: int
    quota_kind: str = "droop"
    surplus_method: str = "inclusive_gregory"
    tie: TiePolicy = DEFAULT_TIE
    display_scale: int = 2
    recompute_quota: bool = False

    def __post_init__(self):
        if self.seats < 1:
            raise ZeroSeats("the number of seats must be positive")
        if self.surplus_method != "inclusive_gregory":
            raise ValueError(f"unsupported surplus method {self.surplus_method!r}")


def stv(profile: Profile, config: StvConfig | int) -> TallyResult:
    """Single transferable vote with inclusive Gregory surplus transfers.

    A surplus is passed on by re-examining every ballot the elected candidate
    holds, each at ``surplus / total`` of its current value; the candidate
    keeps exactly the quota. Candidates reaching the quota together are
    elected one per round, highest first.
    """
    if isinstance(config, int):
        config = StvConfig(config)
    profile.require("ranked")
    seats, tie = config.seats, config.tie
    if seats > profile.k:
        raise SeatsExceedCandidates(f"{seats} seats for {profile.k} candidates")
    total = profile.total_weight
    q = Fraction(quota(config.quota_kind, total, seats))
    piles = Piles(profile, range(profile.k))
    elected: list[int] = []
    kept: dict[int, Fraction] = {}
    rounds: list[RoundReport] = []
    history: list[dict[int, Fraction]] = []
    events: list[TieEvent] = []
    r = 1
    while len(elected) < seats:
        totals = piles.totals()
        if config.recompute_quota:
            q = Fraction(quota(config.quota_kind, max(1, int(total - piles.exhausted)), seats))
        remaining = seats - len(elected)
        exhausted = piles.exhausted
        if len(totals) <= remaining:
            rest = top_n(totals, len(totals), tie, history=history, round_index=r, events=events)
            elected.extend(rest)
            rounds.append(RoundReport(r, totals, exhausted, q, Action("elected", tuple(rest)),
                                      elected_totals=dict(kept)))
            break
        best = max(totals.values())
        if best >= q:
            group = [c for c, v in totals.items() if v == best]
            c = tie.resolve(group, highest=True, history=history, context=f"round {r} election")
            if len(group) > 1:
                events.append(TieEvent(r, tuple(group), c, "elect"))
            elected.append(c)
            if len(elected) == seats:
                rounds.append(RoundReport(r, totals, exhausted, q, Action("elected", (c,)),
                                          elected_totals=dict(kept)))
                break
            surplus = best - q
            transfers, ex = piles.release([c], surplus / best)
            transfers[c] = -surplus
            rounds.append(RoundReport(r, totals, exhausted, q, Action("elected", (c,)), transfers, ex,
                                      elected_totals=dict(kept)))
            kept[c] = q
        else:
            low = min(totals.values())
            group = [c for c, v in totals.items() if v == low]
            c = tie.resolve(group, highest=False, history=history, context=f"round {r} exclusion")
            if len(group) > 1:
                events.append(TieEvent(r, tuple(group), c, "exclude"))
            transfers, ex = piles.release([c])
            rounds.append(RoundReport(r, totals, exhausted, q, Action("excluded", (c,)), transfers, ex,
                                      elected_totals=dict(kept)))
        history.append(totals)
        r += 1
    return TallyResult("stv", profile.names, tuple(elected), tuple(rounds), tuple(events))

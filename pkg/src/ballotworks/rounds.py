"""Round-by-round audit records and the transferable-ballot pile engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from ballotworks.core import Profile, TieEvent


@dataclass(frozen=True)
class Action:
    kind: str  # elected | excluded | runoff | none
    candidates: tuple[int, ...] = ()

    @classmethod
    def none(cls) -> Action:
        return cls("none")


@dataclass(frozen=True)
class RoundReport:
    """One count: totals at the start of the round and what was done with them.

    ``continuing_totals`` covers candidates still in the race, ``elected_totals``
    the value retained by candidates elected in earlier rounds (STV).
    ``transfers`` and ``exhausted_transfer`` are the signed movements caused by
    ``action``; they sum to zero.
    """

    round_index: int
    continuing_totals: Mapping[int, Fraction]
    exhausted: Fraction
    quota: Fraction | None
    action: Action
    transfers: Mapping[int, Fraction] = field(default_factory=dict)
    exhausted_transfer: Fraction = Fraction(0)
    elected_totals: Mapping[int, Fraction] = field(default_factory=dict)

    def accounted(self) -> Fraction:
        return (sum(self.continuing_totals.values(), Fraction(0))
                + sum(self.elected_totals.values(), Fraction(0))
                + self.exhausted)


@dataclass(frozen=True)
class TallyResult:
    method: str
    candidates: tuple[str, ...]
    winners: tuple[int, ...]
    rounds: tuple[RoundReport, ...]
    tie_events: tuple[TieEvent, ...] = ()
    scores: Mapping[int, Fraction] | None = None

    @property
    def winner(self) -> int:
        return self.winners[0]

    def winner_names(self) -> list[str]:
        return [self.candidates[c] for c in self.winners]


def F(x) -> Fraction:
    return Fraction(x)


class Piles:
    """Ballots sitting with their current top continuing candidate.

    Each entry is ``[ranking, position, value]`` where ``value`` is the whole
    group's current transfer value (weight times per-ballot value).
    """

    def __init__(self, profile: Profile, hopefuls: Iterable[int]):
        self.hopeful = set(hopefuls)
        self.piles: dict[int, list] = {c: [] for c in sorted(self.hopeful)}
        self.exhausted = Fraction(0)
        for b in profile.ballots:
            self._place(b.ranking, 0, Fraction(b.weight))

    def _place(self, ranking, start: int, value: Fraction) -> int | None:
        for pos in range(start, len(ranking)):
            c = ranking[pos]
            if c in self.hopeful:
                self.piles[c].append((ranking, pos, value))
                return c
        self.exhausted += value
        return None

    def totals(self) -> dict[int, Fraction]:
        return {c: sum((v for _, _, v in self.piles[c]), Fraction(0)) for c in sorted(self.hopeful)}

    def total_of(self, c: int) -> Fraction:
        return sum((v for _, _, v in self.piles[c]), Fraction(0))

    def release(self, cands: Iterable[int], factor: Fraction = Fraction(1)):
        """Remove ``cands`` from the race and pass their ballots on at ``factor``.

        Returns ``(transfers, exhausted_delta)``; released candidates appear in
        ``transfers`` with their full outgoing (negative) total.
        """
        cands = list(cands)
        for c in cands:
            self.hopeful.discard(c)
        gained = {c: Fraction(0) for c in self.hopeful}
        before = self.exhausted
        outflow = {}
        for c in cands:
            pile = self.piles.pop(c)
            outflow[c] = -sum((v for _, _, v in pile), Fraction(0))
            for ranking, pos, value in pile:
                moved = value * factor
                dest = self._place(ranking, pos + 1, moved)
                if dest is not None:
                    gained[dest] += moved
        transfers = {c: v for c, v in gained.items() if v}
        transfers.update(outflow)
        return transfers, self.exhausted - before

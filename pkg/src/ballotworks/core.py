"""Domain model: candidates, ballots, profiles, pairwise comparison, tie policy.

Every tally in the package takes a :class:`Profile`. Ballots carry integer
weights (a weight-``w`` ballot stands for ``w`` identical ballots) and all
fractional arithmetic elsewhere is done with :class:`fractions.Fraction`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from ballotworks.errors import (
    BallotError,
    DuplicateCandidateInBallot,
    EmptyRoster,
    OverBudget,
    OverCap,
    ScoreOutOfRange,
    TieUnresolved,
    UnknownCandidate,
    WrongBallotKind,
)

Number = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class Candidate:
    index: int
    name: str


@dataclass(frozen=True)
class RankedBallot:
    ranking: tuple[int, ...]
    weight: int = 1

    kind = "ranked"

    def candidates(self) -> tuple[int, ...]:
        return self.ranking


@dataclass(frozen=True)
class NominalBallot:
    marks: frozenset[int]
    weight: int = 1

    kind = "nominal"

    def candidates(self) -> tuple[int, ...]:
        return tuple(sorted(self.marks))


@dataclass(frozen=True)
class ScoreBallot:
    """Cardinal ballot; ``scores`` is a sorted tuple of ``(candidate, score)``."""

    scores: tuple[tuple[int, int], ...]
    weight: int = 1

    kind = "score"

    def candidates(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.scores)

    def as_dict(self) -> dict[int, int]:
        return dict(self.scores)


@dataclass(frozen=True)
class CumulativeBallot:
    points: tuple[tuple[int, int], ...]
    weight: int = 1

    kind = "cumulative"

    def candidates(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.points)

    def as_dict(self) -> dict[int, int]:
        return dict(self.points)


Ballot = Union[RankedBallot, NominalBallot, ScoreBallot, CumulativeBallot]


@dataclass(frozen=True)
class Profile:
    """Immutable multiset of weighted ballots of one kind over a roster."""

    roster: tuple[Candidate, ...]
    ballots: tuple[Ballot, ...]
    kind: str
    spoiled: int = 0
    score_range: tuple[int, int] | None = None
    budget: int | None = None
    cap: int | None = None

    @property
    def total_weight(self) -> int:
        return sum(b.weight for b in self.ballots)

    @property
    def k(self) -> int:
        return len(self.roster)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.roster)

    def name(self, index: int) -> str:
        return self.roster[index].name

    def index(self, name: str) -> int:
        for c in self.roster:
            if c.name == name:
                return c.index
        raise UnknownCandidate(f"no candidate named {name!r}")

    def require(self, *kinds: str) -> None:
        if self.kind not in kinds:
            raise WrongBallotKind(f"expected a {' or '.join(kinds)} profile, got {self.kind}")

    def replace_ballots(self, ballots: Iterable[Ballot]) -> Profile:
        return Profile(self.roster, tuple(ballots), self.kind, self.spoiled,
                       self.score_range, self.budget, self.cap)


def make_roster(names: Sequence[str]) -> tuple[Candidate, ...]:
    if not names:
        raise EmptyRoster("roster is empty")
    seen = set()
    for n in names:
        if not n:
            raise BallotError("candidate names must be non-empty")
        if n in seen:
            raise BallotError(f"duplicate candidate name {n!r}")
        seen.add(n)
    return tuple(Candidate(i, n) for i, n in enumerate(names))


def _validate(ballot: Ballot, k: int, score_range, budget, cap) -> None:
    if not isinstance(ballot.weight, int) or ballot.weight < 1:
        raise BallotError(f"ballot weight must be a positive integer, got {ballot.weight!r}")
    cands = ballot.candidates()
    if len(cands) == 0:
        raise BallotError("ballot marks no candidate")
    if len(set(cands)) != len(cands):
        raise DuplicateCandidateInBallot(f"candidate repeated in {cands}")
    for c in cands:
        if not isinstance(c, int) or not 0 <= c < k:
            raise UnknownCandidate(f"candidate index {c!r} not in roster")
    if isinstance(ballot, ScoreBallot) and score_range is not None:
        lo, hi = score_range
        for c, s in ballot.scores:
            if not lo <= s <= hi:
                raise ScoreOutOfRange(f"score {s} for candidate {c} outside [{lo}, {hi}]")
    if isinstance(ballot, CumulativeBallot):
        if any(p < 0 for _, p in ballot.points):
            raise BallotError("negative points")
        if cap is not None and any(p > cap for _, p in ballot.points):
            raise OverCap(f"more than {cap} points to one candidate")
        if budget is not None and sum(p for _, p in ballot.points) > budget:
            raise OverBudget(f"ballot spends more than {budget} points")


def build_profile(
    roster: Sequence[str] | Sequence[Candidate],
    ballots: Iterable[Ballot],
    *,
    strict: bool = True,
    score_range: tuple[int, int] | None = None,
    budget: int | None = None,
    cap: int | None = None,
    kind: str | None = None,
) -> Profile:
    """Validate ``ballots`` against ``roster``.

    With ``strict=False`` invalid ballots are dropped and their weight is
    recorded in ``Profile.spoiled`` instead of raising. ``kind`` fixes the
    ballot kind up front, which matters only when there are no ballots.
    """
    if roster and isinstance(roster[0], Candidate):
        cands = tuple(roster)  # type: ignore[arg-type]
        if not cands:
            raise EmptyRoster("roster is empty")
    else:
        cands = make_roster(list(roster))  # type: ignore[arg-type]
    k = len(cands)
    kept: list[Ballot] = []
    spoiled = 0
    for b in ballots:
        if kind is None:
            kind = b.kind
        elif b.kind != kind:
            raise WrongBallotKind("profiles must hold a single ballot kind")
        try:
            _validate(b, k, score_range, budget, cap)
        except BallotError:
            if strict:
                raise
            spoiled += b.weight if isinstance(b.weight, int) and b.weight > 0 else 0
            continue
        kept.append(b)
    return Profile(cands, tuple(kept), kind or "ranked", spoiled, score_range, budget, cap)


def _lookup(names: Sequence[str], c) -> int:
    if isinstance(c, int):
        return c
    try:
        return list(names).index(c)
    except ValueError:
        raise UnknownCandidate(f"no candidate named {c!r}") from None


def _split(spec, names: Sequence[str]) -> list:
    if isinstance(spec, str):
        if spec.split() != [spec.strip()] or spec.strip() in names:
            return spec.split()
        return list(spec)
    return list(spec)


def ranked_profile(names: Sequence[str], groups: Iterable[tuple[int, object]], **kw) -> Profile:
    """Build a ranked profile from ``(weight, ranking)`` pairs.

    A ranking may be a string of one-letter names (``"ABC"``), a
    space-separated string, or a sequence of names or indices.
    """
    names = list(names)
    ballots = [RankedBallot(tuple(_lookup(names, c) for c in _split(r, names)), w) for w, r in groups]
    return build_profile(names, ballots, kind="ranked", **kw)


def nominal_profile(names: Sequence[str], groups: Iterable[tuple[int, object]], **kw) -> Profile:
    names = list(names)
    ballots = [NominalBallot(frozenset(_lookup(names, c) for c in _split(m, names)), w) for w, m in groups]
    return build_profile(names, ballots, kind="nominal", **kw)


def score_profile(names: Sequence[str], groups: Iterable[tuple[int, Mapping]],
                  score_range: tuple[int, int], **kw) -> Profile:
    names = list(names)
    ballots = [
        ScoreBallot(tuple(sorted((_lookup(names, c), s) for c, s in m.items())), w)
        for w, m in groups
    ]
    return build_profile(names, ballots, score_range=score_range, kind="score", **kw)


def cumulative_profile(names: Sequence[str], groups: Iterable[tuple[int, Mapping]],
                       budget: int, cap: int | None = None, **kw) -> Profile:
    names = list(names)
    ballots = [
        CumulativeBallot(tuple(sorted((_lookup(names, c), p) for c, p in m.items() if p)), w)
        for w, m in groups
    ]
    return build_profile(names, ballots, budget=budget, cap=cap, kind="cumulative", **kw)


def first_preferences(profile: Profile) -> dict[int, int]:
    profile.require("ranked")
    counts = {c.index: 0 for c in profile.roster}
    for b in profile.ballots:
        counts[b.ranking[0]] += b.weight
    return counts


# -- pairwise comparison ------------------------------------------------------

@dataclass(frozen=True)
class PairwiseMatrix:
    """``d[x][y]`` is the weight of ballots ranking ``x`` above ``y``."""

    d: tuple[tuple[int, ...], ...]
    total: int

    @property
    def k(self) -> int:
        return len(self.d)

    def beats(self, x: int, y: int) -> bool:
        return self.d[x][y] > self.d[y][x]

    def __add__(self, other: PairwiseMatrix) -> PairwiseMatrix:
        if other.k != self.k:
            raise ValueError("matrix sizes differ")
        d = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.d, other.d))
        return PairwiseMatrix(d, self.total + other.total)


def pairwise_matrix(profile: Profile) -> PairwiseMatrix:
    profile.require("ranked")
    k = profile.k
    d = [[0] * k for _ in range(k)]
    for b in profile.ballots:
        w = b.weight
        r = b.ranking
        unranked = set(range(k)).difference(r)
        for i, x in enumerate(r):
            row = d[x]
            for y in r[i + 1:]:
                row[y] += w
            for y in unranked:
                row[y] += w
    return PairwiseMatrix(tuple(map(tuple, d)), profile.total_weight)


def condorcet_winner(m: PairwiseMatrix) -> int | None:
    for x in range(m.k):
        if all(m.beats(x, y) for y in range(m.k) if y != x):
            return x
    return None


def condorcet_loser(m: PairwiseMatrix) -> int | None:
    for x in range(m.k):
        if all(m.beats(y, x) for y in range(m.k) if y != x):
            return x
    return None


def majority_cycle_exists(m: PairwiseMatrix) -> bool:
    """True iff the strict pairwise-majority digraph contains a directed cycle."""
    k = m.k
    state = [0] * k  # 0 unvisited, 1 on stack, 2 done

    def visit(x: int) -> bool:
        state[x] = 1
        for y in range(k):
            if y != x and m.beats(x, y):
                if state[y] == 1 or (state[y] == 0 and visit(y)):
                    return True
        state[x] = 2
        return False

    return any(state[x] == 0 and visit(x) for x in range(k))


# -- tie policy ---------------------------------------------------------------

TIE_MODES = ("error", "first_listed", "backward_then_first_listed", "seeded_random")


@dataclass(frozen=True)
class TieEvent:
    round: int
    tied: tuple[int, ...]
    chosen: int
    role: str


@dataclass(frozen=True)
class TiePolicy:
    """How a tally settles a decision between equally placed candidates.

    ``first_listed`` always favours the candidate earlier in the roster: it is
    picked when choosing a winner and spared when choosing someone to exclude.
    ``backward_then_first_listed`` first compares the tied candidates' totals
    in earlier rounds, most recent first.
    """

    mode: str = "backward_then_first_listed"
    seed: int = 0

    def __post_init__(self):
        if self.mode not in TIE_MODES:
            raise ValueError(f"unknown tie mode {self.mode!r}")

    def resolve(
        self,
        tied: Iterable[int],
        *,
        highest: bool,
        history: Sequence[Mapping[int, Number]] = (),
        context: str = "",
    ) -> int:
        """Pick one of ``tied``: the favoured one if ``highest``, else the disfavoured."""
        tied = sorted(set(tied))
        if len(tied) == 1:
            return tied[0]
        if self.mode == "error":
            raise TieUnresolved(tied, context)
        if self.mode == "seeded_random":
            rng = random.Random(f"{self.seed}|{context}|{tied}")
            return rng.choice(tied)
        if self.mode == "backward_then_first_listed":
            for totals in reversed(history):
                vals = {c: totals.get(c, 0) for c in tied}
                best = max(vals.values()) if highest else min(vals.values())
                tied = [c for c in tied if vals[c] == best]
                if len(tied) == 1:
                    return tied[0]
        return tied[0] if highest else tied[-1]


DEFAULT_TIE = TiePolicy()


def top_n(
    totals: Mapping[int, Number],
    n: int,
    tie: TiePolicy,
    *,
    history: Sequence[Mapping[int, Number]] = (),
    round_index: int = 1,
    events: list[TieEvent] | None = None,
) -> list[int]:
    """The ``n`` candidates with the largest totals, best first."""
    remaining = dict(totals)
    chosen: list[int] = []
    while len(chosen) < n and remaining:
        best = max(remaining.values())
        group = sorted(c for c, v in remaining.items() if v == best)
        need = n - len(chosen)
        if len(group) <= need:
            ordered = []
            pool = list(group)
            while pool:
                if len(pool) == 1:
                    pick = pool[0]
                else:
                    pick = _quiet_order(tie, pool, history)
                ordered.append(pick)
                pool.remove(pick)
            chosen.extend(ordered)
            for c in group:
                del remaining[c]
        else:
            pick = tie.resolve(group, highest=True, history=history,
                               context=f"round {round_index} seat {len(chosen) + 1}")
            if events is not None:
                events.append(TieEvent(round_index, tuple(group), pick, "seat"))
            chosen.append(pick)
            del remaining[pick]
    return chosen


def _quiet_order(tie: TiePolicy, pool: list[int], history) -> int:
    # Ordering within a group that is elected in full never changes the outcome,
    # so the error policy must not fire here.
    if tie.mode == "error":
        return min(pool)
    return tie.resolve(pool, highest=True, history=history, context="order")


# -- display ------------------------------------------------------------------

def truncate_decimal(value: Number, scale: int = 2, *, signed: bool = False) -> str:
    """Render ``value`` truncated toward zero at ``scale`` decimal places.

    Integral values are shown without a fractional part.
    """
    value = Fraction(value)
    sign = "-" if value < 0 else ("+" if signed and value > 0 else "")
    a = abs(value)
    if a.denominator == 1 or scale == 0:
        return f"{sign}{a.numerator // a.denominator}"
    scaled = a.numerator * 10 ** scale // a.denominator
    whole, frac = divmod(scaled, 10 ** scale)
    return f"{sign}{whole}.{frac:0{scale}d}"


def as_fraction(value) -> Fraction:
    """Exact conversion; floats go through their shortest decimal repr."""
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)

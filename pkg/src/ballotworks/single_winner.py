"""Single-winner tallies: plurality family, runoff family, positional and Condorcet methods."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from ballotworks.core import (
    DEFAULT_TIE,
    NominalBallot,
    PairwiseMatrix,
    Profile,
    RankedBallot,
    ScoreBallot,
    TieEvent,
    TiePolicy,
    condorcet_winner,
    first_preferences,
    pairwise_matrix,
    top_n,
)
from ballotworks.errors import (
    IncompleteRankingForCoombs,
    InvalidQuota,
    MarkForEliminatedCandidate,
    MarkLimitViolation,
    NonFinalistMark,
    OverBudget,
    OverCap,
    ScoreOutOfRange,
    ElectionError,
)
from ballotworks.rounds import Action, Piles, RoundReport, TallyResult

ZERO = Fraction(0)


def _fr(d: Mapping[int, int | Fraction]) -> dict[int, Fraction]:
    return {c: Fraction(v) for c, v in d.items()}


def _majority(total) -> Fraction:
    return Fraction(int(Fraction(total) // 2) + 1)


def nominal_totals(profile: Profile, max_marks: int | None = None) -> dict[int, int]:
    profile.require("nominal")
    totals = {c.index: 0 for c in profile.roster}
    for b in profile.ballots:
        if max_marks is not None and len(b.marks) > max_marks:
            raise MarkLimitViolation(f"ballot marks {len(b.marks)} candidates, limit {max_marks}")
        for c in b.marks:
            totals[c] += b.weight
    return totals


def _plurality_result(method: str, profile: Profile, totals: Mapping[int, int],
                      tie: TiePolicy, seats: int = 1) -> TallyResult:
    events: list[TieEvent] = []
    winners = top_n(totals, seats, tie, events=events)
    report = RoundReport(1, _fr(totals), ZERO, None, Action("elected", tuple(winners)))
    return TallyResult(method, profile.names, tuple(winners), (report,), tuple(events), _fr(totals))


# -- plurality family ---------------------------------------------------------

def fptp(profile: Profile, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """First past the post over single-mark nominal ballots."""
    for b in profile.ballots:
        if profile.kind == "nominal" and len(b.marks) != 1:
            raise MarkLimitViolation("FPTP ballots mark exactly one candidate")
    return _plurality_result("fptp", profile, nominal_totals(profile, 1), tie)


def quota_winner(profile: Profile, quota_fraction) -> int | None:
    """Candidate whose share of valid votes strictly exceeds ``quota_fraction``."""
    q = Fraction(quota_fraction)
    if not Fraction(1, 2) < q <= 1:
        raise InvalidQuota(f"quota fraction must lie in (1/2, 1], got {q}")
    totals = nominal_totals(profile)
    valid = profile.total_weight
    for c, v in totals.items():
        if v > q * valid:
            return c
    return None


def approval(profile: Profile, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    return _plurality_result("approval", profile, nominal_totals(profile), tie)


def first_preference_profile(profile: Profile) -> Profile:
    """Nominal profile marking each ranked ballot's first choice."""
    profile.require("ranked")
    return profile.__class__(profile.roster,
                             tuple(NominalBallot(frozenset([b.ranking[0]]), b.weight) for b in profile.ballots),
                             "nominal")


def approval_from_ranking(profile: Profile, depths: Sequence[int] | int) -> Profile:
    """Nominal profile in which each ballot approves its top ``depth`` candidates."""
    profile.require("ranked")
    if isinstance(depths, int):
        depths = [depths] * len(profile.ballots)
    ballots = tuple(NominalBallot(frozenset(b.ranking[:d]), b.weight)
                    for b, d in zip(profile.ballots, depths))
    return Profile(profile.roster, ballots, "nominal")


# -- runoff family ------------------------------------------------------------

def _exclusion_loop(method: str, profile: Profile, tie: TiePolicy, hopefuls: Iterable[int],
                    choose: Callable[[Piles, dict, list, int, list], int]) -> TallyResult:
    piles = Piles(profile, hopefuls)
    rounds: list[RoundReport] = []
    history: list[dict[int, Fraction]] = []
    events: list[TieEvent] = []
    r = 1
    while True:
        totals = piles.totals()
        continuing = sum(totals.values(), ZERO)
        quota = _majority(continuing)
        best = max(totals.values())
        if best >= quota or len(totals) == 1:
            leaders = [c for c, v in totals.items() if v == best]
            winner = leaders[0]
            rounds.append(RoundReport(r, totals, piles.exhausted, quota, Action("elected", (winner,))))
            return TallyResult(method, profile.names, (winner,), tuple(rounds), tuple(events))
        loser = choose(piles, totals, history, r, events)
        before = piles.exhausted
        transfers, ex = piles.release([loser])
        rounds.append(RoundReport(r, totals, before, quota, Action("excluded", (loser,)),
                                  transfers, ex))
        history.append(totals)
        r += 1


def _lowest(tie: TiePolicy):
    def choose(piles, totals, history, r, events):
        low = min(totals.values())
        tied = [c for c, v in totals.items() if v == low]
        loser = tie.resolve(tied, highest=False, history=history, context=f"round {r} exclusion")
        if len(tied) > 1:
            events.append(TieEvent(r, tuple(tied), loser, "exclude"))
        return loser
    return choose


def irv(profile: Profile, tie: TiePolicy = DEFAULT_TIE, *, hopefuls: Iterable[int] | None = None) -> TallyResult:
    """Instant runoff; the majority bar is recomputed each round over non-exhausted ballots."""
    profile.require("ranked")
    hopefuls = range(profile.k) if hopefuls is None else hopefuls
    return _exclusion_loop("irv", profile, tie, hopefuls, _lowest(tie))


def coombs(profile: Profile, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """Coombs' method: exclude the candidate ranked last on the most ballots."""
    profile.require("ranked")
    for b in profile.ballots:
        if len(b.ranking) != profile.k:
            raise IncompleteRankingForCoombs("Coombs requires every ballot to rank every candidate")
    last_history: list[dict[int, int]] = []

    def choose(piles, totals, history, r, events):
        last = {c: 0 for c in totals}
        for b in profile.ballots:
            for c in reversed(b.ranking):
                if c in last:
                    last[c] += b.weight
                    break
        worst = max(last.values())
        tied = [c for c, v in last.items() if v == worst]
        # negated so that more earlier last places means more disfavoured
        loser = tie.resolve(tied, highest=False, history=[{c: -v for c, v in h.items()} for h in last_history],
                            context=f"round {r} exclusion")
        if len(tied) > 1:
            events.append(TieEvent(r, tuple(tied), loser, "exclude"))
        last_history.append(last)
        return loser

    return _exclusion_loop("coombs", profile, tie, range(profile.k), choose)


def contingent(profile: Profile, max_prefs: int | None = None, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """Contingent vote; ``max_prefs`` 2 gives the supplementary vote, 3 the Sri Lankan variant."""
    profile.require("ranked")
    if max_prefs is not None:
        if max_prefs < 1:
            raise ValueError("max_prefs must be positive")
        profile = profile.replace_ballots(RankedBallot(b.ranking[:max_prefs], b.weight) for b in profile.ballots)
    return _contingent(profile, tie, "contingent")


def _contingent(profile: Profile, tie: TiePolicy, method: str) -> TallyResult:
    piles = Piles(profile, range(profile.k))
    events: list[TieEvent] = []
    totals = piles.totals()
    quota = _majority(sum(totals.values(), ZERO))
    best = max(totals.values())
    if best >= quota or profile.k == 1:
        winner = min(c for c, v in totals.items() if v == best)
        report = RoundReport(1, totals, piles.exhausted, quota, Action("elected", (winner,)))
        return TallyResult(method, profile.names, (winner,), (report,))
    finalists = top_n(totals, 2, tie, events=events)
    out = [c for c in totals if c not in finalists]
    before = piles.exhausted
    transfers, ex = piles.release(out)
    r1 = RoundReport(1, totals, before, quota, Action("runoff", tuple(sorted(finalists))), transfers, ex)
    final = piles.totals()
    top = max(final.values())
    leaders = [c for c, v in final.items() if v == top]
    winner = tie.resolve(leaders, highest=True, history=[totals], context="final round")
    if len(leaders) > 1:
        events.append(TieEvent(2, tuple(leaders), winner, "winner"))
    r2 = RoundReport(2, final, piles.exhausted, None, Action("elected", (winner,)))
    return TallyResult(method, profile.names, (winner,), (r1, r2), tuple(events))


@dataclass(frozen=True)
class Decision:
    elected: int | None = None
    runoff: tuple[int, int] | None = None
    totals: Mapping[int, int] | None = None


def two_round_engine(round1: Profile, tie: TiePolicy = DEFAULT_TIE) -> Decision:
    """First round of a two-round election held over a fresh nominal profile."""
    totals = nominal_totals(round1, 1)
    valid = round1.total_weight
    best = max(totals.values())
    if 2 * best > valid:
        return Decision(elected=min(c for c, v in totals.items() if v == best), totals=totals)
    finalists = top_n(totals, 2, tie)
    return Decision(runoff=tuple(sorted(finalists)), totals=totals)


def two_round_final(finalists: tuple[int, int], round2: Profile, tie: TiePolicy = DEFAULT_TIE) -> int:
    totals = nominal_totals(round2, 1)
    for b in round2.ballots:
        if not b.marks <= set(finalists):
            raise NonFinalistMark(f"second-round ballot marks a non-finalist: {sorted(b.marks)}")
    sub = {c: totals[c] for c in finalists}
    best = max(sub.values())
    return tie.resolve([c for c, v in sub.items() if v == best], highest=True, context="second round")


def two_round(profile: Profile, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """Two-round system simulated from a ranked profile (voters keep their preferences)."""
    profile.require("ranked")
    return _contingent(profile, tie, "two_round")


def _exhaustive(method: str, names, next_round: Callable[[frozenset, int], Profile],
                roster_size: int, tie: TiePolicy, baseline: int | None) -> TallyResult:
    continuing = frozenset(range(roster_size))
    rounds: list[RoundReport] = []
    history: list[dict[int, Fraction]] = []
    events: list[TieEvent] = []
    prev_totals: dict[int, Fraction] | None = None
    prev_exhausted = ZERO
    r = 1
    while True:
        prof = next_round(continuing, r)
        for b in prof.ballots:
            if len(b.marks) != 1:
                raise MarkLimitViolation("each round's ballots mark exactly one candidate")
            if not b.marks <= continuing:
                raise MarkForEliminatedCandidate(f"round {r} ballot marks an eliminated candidate")
        raw = nominal_totals(prof)
        totals = {c: Fraction(raw[c]) for c in sorted(continuing)}
        valid = sum(totals.values(), ZERO)
        if baseline is None:
            baseline = int(valid)
        exhausted = max(ZERO, Fraction(baseline) - valid)
        if rounds:
            last = rounds[-1]
            gone = last.action.candidates[0]
            transfers = {c: totals[c] - prev_totals[c] for c in totals if totals[c] != prev_totals[c]}
            transfers[gone] = -prev_totals[gone]
            rounds[-1] = RoundReport(last.round_index, last.continuing_totals, last.exhausted, last.quota,
                                     last.action, transfers, exhausted - prev_exhausted)
        quota = _majority(valid)
        best = max(totals.values())
        if best >= quota or len(totals) == 1:
            winner = min(c for c, v in totals.items() if v == best)
            rounds.append(RoundReport(r, totals, exhausted, quota, Action("elected", (winner,))))
            return TallyResult(method, tuple(names), (winner,), tuple(rounds), tuple(events))
        low = min(totals.values())
        tied = [c for c, v in totals.items() if v == low]
        loser = tie.resolve(tied, highest=False, history=history, context=f"round {r} exclusion")
        if len(tied) > 1:
            events.append(TieEvent(r, tuple(tied), loser, "exclude"))
        rounds.append(RoundReport(r, totals, exhausted, quota, Action("excluded", (loser,))))
        history.append(totals)
        prev_totals, prev_exhausted = totals, exhausted
        continuing = continuing - {loser}
        r += 1


def exhaustive_engine(rounds: Sequence[Profile], tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """Exhaustive ballot over a fresh nominal profile per round.

    Round ``i`` uses ``rounds[i]``; voters may change their minds between
    rounds. Ballots present in round one but missing later are reported as
    exhausted.
    """
    if not rounds:
        raise ValueError("at least one round is required")

    def next_round(continuing, r):
        if r > len(rounds):
            raise ElectionError(f"no ballots supplied for round {r}")
        return rounds[r - 1]

    return _exhaustive("exhaustive", rounds[0].names, next_round, rounds[0].k, tie, None)


def exhaustive_simulated(profile: Profile, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """Exhaustive ballot where every voter backs their top continuing preference each round."""
    profile.require("ranked")

    def next_round(continuing, r):
        ballots = []
        for b in profile.ballots:
            top = next((c for c in b.ranking if c in continuing), None)
            if top is not None:
                ballots.append(NominalBallot(frozenset([top]), b.weight))
        return Profile(profile.roster, tuple(ballots), "nominal")

    return _exhaustive("exhaustive", profile.names, next_round, profile.k, tie, profile.total_weight)


# -- positional and cardinal methods ------------------------------------------

@dataclass(frozen=True)
class BordaScheme:
    kind: str = "standard"  # standard | slovenian | dowdall | custom
    custom: tuple[Fraction, ...] = ()

    def points(self, k: int) -> tuple[Fraction, ...]:
        if self.kind == "standard":
            pts = tuple(Fraction(k - i) for i in range(1, k + 1))
        elif self.kind == "slovenian":
            pts = tuple(Fraction(k + 1 - i) for i in range(1, k + 1))
        elif self.kind == "dowdall":
            pts = tuple(Fraction(1, i) for i in range(1, k + 1))
        elif self.kind == "custom":
            pts = tuple(Fraction(p) for p in self.custom)
            if len(pts) != k:
                raise ValueError(f"custom scheme has {len(pts)} entries for {k} candidates")
        else:
            raise ValueError(f"unknown Borda scheme {self.kind!r}")
        if any(a <= b for a, b in zip(pts, pts[1:])):
            raise ValueError("Borda points must strictly decrease with rank")
        return pts


def borda_scores(profile: Profile, scheme: BordaScheme = BordaScheme()) -> dict[int, Fraction]:
    profile.require("ranked")
    pts = scheme.points(profile.k)
    scores = {c.index: ZERO for c in profile.roster}
    for b in profile.ballots:
        for pos, c in enumerate(b.ranking):
            scores[c] += pts[pos] * b.weight
    return scores


def borda(profile: Profile, scheme: BordaScheme = BordaScheme(), tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """Borda count; unranked candidates on a truncated ballot score nothing."""
    return _plurality_result("borda", profile, borda_scores(profile, scheme), tie)


def _score_columns(profile: Profile) -> dict[int, list[tuple[int, int]]]:
    profile.require("score")
    lo = profile.score_range[0] if profile.score_range else 0
    cols: dict[int, list[tuple[int, int]]] = {c.index: [] for c in profile.roster}
    for b in profile.ballots:
        if profile.score_range:
            for _, s in b.scores:
                if not profile.score_range[0] <= s <= profile.score_range[1]:
                    raise ScoreOutOfRange(f"score {s} outside {profile.score_range}")
        given = b.as_dict()
        for c in cols:
            cols[c].append((given.get(c, lo), b.weight))
    return cols


def range_voting(profile: Profile, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """Highest score sum wins; an unscored candidate gets the bottom of the range."""
    cols = _score_columns(profile)
    totals = {c: sum(s * w for s, w in col) for c, col in cols.items()}
    return _plurality_result("range", profile, totals, tie)


def approval_as_scores(profile: Profile) -> Profile:
    profile.require("nominal")
    ballots = tuple(ScoreBallot(tuple((c.index, int(c.index in b.marks)) for c in profile.roster), b.weight)
                    for b in profile.ballots)
    return Profile(profile.roster, ballots, "score", score_range=(0, 1))


def _lower_median(grades: list[tuple[int, int]]) -> int | None:
    n = sum(w for _, w in grades)
    if n == 0:
        return None
    target = (n + 1) // 2
    seen = 0
    for g, w in sorted(grades):
        seen += w
        if seen >= target:
            return g
    raise AssertionError("unreachable")


def _drop_one(grades: list[tuple[int, int]], g: int) -> list[tuple[int, int]]:
    out, done = [], False
    for s, w in grades:
        if not done and s == g:
            done = True
            if w > 1:
                out.append((s, w - 1))
        else:
            out.append((s, w))
    return out


def majority_judgement(profile: Profile, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    """Highest (lower) median grade; ties broken by repeatedly removing one median grade."""
    cols = _score_columns(profile)
    medians = {c: _lower_median(col) for c, col in cols.items()}
    best = max(m for m in medians.values() if m is not None)
    tied = [c for c, m in medians.items() if m == best]
    grades = {c: list(cols[c]) for c in tied}
    sequence: list[dict[int, int]] = [{c: medians[c] for c in tied}]
    while len(tied) > 1:
        cur = {c: _lower_median(grades[c]) for c in tied}
        if any(v is None for v in cur.values()):
            break
        grades = {c: _drop_one(grades[c], cur[c]) for c in tied}
        nxt = {c: _lower_median(grades[c]) for c in tied}
        if any(v is None for v in nxt.values()):
            break
        top = max(nxt.values())
        tied = [c for c in tied if nxt[c] == top]
        sequence.append(nxt)
    events: list[TieEvent] = []
    winner = tie.resolve(tied, highest=True, context="median")
    if len(tied) > 1:
        events.append(TieEvent(1, tuple(sorted(tied)), winner, "winner"))
    report = RoundReport(1, _fr({c: m if m is not None else 0 for c, m in medians.items()}), ZERO, None,
                         Action("elected", (winner,)))
    return TallyResult("majority_judgement", profile.names, (winner,), (report,), tuple(events),
                       _fr({c: m if m is not None else 0 for c, m in medians.items()}))


def cumulative(profile: Profile, budget: int | None = None, per_candidate_cap: int | None = None,
               seats: int = 1, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    profile.require("cumulative")
    budget = profile.budget if budget is None else budget
    cap = profile.cap if per_candidate_cap is None else per_candidate_cap
    totals = {c.index: 0 for c in profile.roster}
    for b in profile.ballots:
        pts = b.as_dict()
        if budget is not None and sum(pts.values()) > budget:
            raise OverBudget(f"ballot spends more than {budget} points")
        if cap is not None and any(p > cap for p in pts.values()):
            raise OverCap(f"more than {cap} points to one candidate")
        for c, p in pts.items():
            totals[c] += p * b.weight
    result = _plurality_result("cumulative", profile, totals, tie, seats)
    return result


# -- Condorcet family ---------------------------------------------------------

def copeland_scores(m: PairwiseMatrix) -> dict[int, Fraction]:
    out = {}
    for x in range(m.k):
        s = Fraction(0)
        for y in range(m.k):
            if y == x:
                continue
            if m.beats(x, y):
                s += 1
            elif not m.beats(y, x):
                s += Fraction(1, 2)
        out[x] = s
    return out


def smith_set(m: PairwiseMatrix) -> frozenset[int]:
    """Smallest non-empty set whose members all beat every outsider.

    Grown from the Copeland maximizers: any outsider not strictly beaten by
    every member is pulled in until none is left.
    """
    scores = copeland_scores(m)
    best = max(scores.values())
    members = {c for c, s in scores.items() if s == best}
    changed = True
    while changed:
        changed = False
        for y in range(m.k):
            if y not in members and not all(m.beats(x, y) for x in members):
                members.add(y)
                changed = True
    return frozenset(members)


def smith_irv(profile: Profile, tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    profile.require("ranked")
    smith = smith_set(pairwise_matrix(profile))
    if len(smith) == 1:
        (winner,) = smith
        totals = _fr(first_preferences(profile))
        report = RoundReport(1, totals, ZERO, None, Action("elected", (winner,)))
        return TallyResult("smith_irv", profile.names, (winner,), (report,))
    result = irv(profile, tie, hopefuls=sorted(smith))
    return TallyResult("smith_irv", profile.names, result.winners, result.rounds, result.tie_events)


def black(profile: Profile, scheme: BordaScheme = BordaScheme(), tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    cw = condorcet_winner(pairwise_matrix(profile))
    if cw is None:
        result = borda(profile, scheme, tie)
        return TallyResult("black", result.candidates, result.winners, result.rounds,
                           result.tie_events, result.scores)
    scores = borda_scores(profile, scheme)
    report = RoundReport(1, scores, ZERO, None, Action("elected", (cw,)))
    return TallyResult("black", profile.names, (cw,), (report,), (), scores)


@dataclass(frozen=True)
class SchulzeResult:
    ranking: tuple[frozenset[int], ...]
    d: PairwiseMatrix
    strengths: tuple[tuple[int | Fraction, ...], ...]

    @property
    def winners(self) -> frozenset[int]:
        return self.ranking[0]


def link_strengths(m: PairwiseMatrix, strength: str = "winning_votes") -> list[list[int]]:
    k = m.k
    links = [[0] * k for _ in range(k)]
    for x in range(k):
        for y in range(k):
            if x == y:
                continue
            if strength == "winning_votes":
                links[x][y] = m.d[x][y] if m.d[x][y] > m.d[y][x] else 0
            elif strength == "margins":
                links[x][y] = m.d[x][y] - m.d[y][x]
            else:
                raise ValueError(f"unknown strength measure {strength!r}")
    return links


def widest_paths(links: list[list[int]]) -> list[list[int]]:
    """Maximal bottleneck strength over all paths, by Floyd-Warshall."""
    k = len(links)
    p = [row[:] for row in links]
    for z in range(k):
        for x in range(k):
            if x == z:
                continue
            pxz = p[x][z]
            row = p[x]
            for y in range(k):
                if y != x and y != z:
                    cand = min(pxz, p[z][y])
                    if cand > row[y]:
                        row[y] = cand
    return p


def schulze(profile: Profile, strength: str = "winning_votes") -> SchulzeResult:
    """Schulze ordering; candidates not beaten within a tier share it."""
    m = pairwise_matrix(profile)
    p = widest_paths(link_strengths(m, strength))
    remaining = set(range(m.k))
    tiers = []
    while remaining:
        top = frozenset(x for x in remaining if not any(p[y][x] > p[x][y] for y in remaining if y != x))
        if not top:  # the beat relation is transitive, so this cannot happen
            raise AssertionError("Schulze relation has no maximal element")
        tiers.append(top)
        remaining -= top
    return SchulzeResult(tuple(tiers), m, tuple(map(tuple, p)))


def schulze_tally(profile: Profile, strength: str = "winning_votes",
                  tie: TiePolicy = DEFAULT_TIE) -> TallyResult:
    res = schulze(profile, strength)
    events = []
    winner = tie.resolve(res.winners, highest=True, context="schulze winners")
    if len(res.winners) > 1:
        events.append(TieEvent(1, tuple(sorted(res.winners)), winner, "winner"))
    wins = {x: Fraction(sum(1 for y in range(res.d.k) if y != x and res.strengths[x][y] > res.strengths[y][x]))
            for x in range(res.d.k)}
    report = RoundReport(1, wins, ZERO, None, Action("elected", (winner,)))
    return TallyResult("schulze", profile.names, (winner,), (report,), tuple(events), wins)

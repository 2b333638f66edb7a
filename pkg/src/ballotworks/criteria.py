"""Fairness criteria as machine checks, with bounded counterexample search.

A tick can only ever be reported as "not refuted within bounds": the search
looks for a counterexample and fails to find one. A cross comes with a
witness that has been replayed through the public tallies before it is
returned.

Every search runs the method under the ``error`` tie policy and skips
instances where the outcome hinges on a tie, so results do not depend on an
arbitrary tie-break.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from ballotworks.apportionment import SeatAllocation
from ballotworks.core import (
    CumulativeBallot,
    NominalBallot,
    Profile,
    RankedBallot,
    TiePolicy,
    condorcet_winner,
    make_roster,
    pairwise_matrix,
    ranked_profile,
)
from ballotworks.errors import TieUnresolved
from ballotworks.rounds import TallyResult
from ballotworks import single_winner as sw

CRITERIA = ("equality", "neutrality", "majority", "condorcet", "monotonicity", "pareto", "iia")

HOLDS = "holds_on_instance"
VIOLATED = "violated"
NOT_REFUTED = "not_refuted_within_bounds"

STRICT = TiePolicy("error")


@dataclass(frozen=True)
class Witness:
    before: Profile
    outcome_before: int | None
    after: Profile | None = None
    outcome_after: int | None = None
    behavior_before: tuple | None = None
    behavior_after: tuple | None = None
    note: str = ""


@dataclass(frozen=True)
class Verdict:
    criterion: str
    method: str
    status: str
    witness: Witness | None = None
    searched: int = 0
    skipped: int = 0

    @property
    def violated(self) -> bool:
        return self.status == VIOLATED

    def describe(self) -> str:
        if self.status == VIOLATED:
            return f"{self.method}/{self.criterion}: violated ({self.witness.note})"
        if self.status == NOT_REFUTED:
            return (f"{self.method}/{self.criterion}: not refuted within bounds "
                    f"({self.searched} instances searched, {self.skipped} tied instances skipped)")
        return f"{self.method}/{self.criterion}: holds on this instance"


# -- methods under audit ------------------------------------------------------

Behavior = tuple | None


def _no_behavior(profile: Profile) -> Iterable[Behavior]:
    return (None,)


def _same_order(old: tuple, new: tuple, behavior_item, a: int, b: int) -> bool:
    def rel(r):
        ia = r.index(a) if a in r else len(r)
        ib = r.index(b) if b in r else len(r)
        return (ia > ib) - (ia < ib)
    return rel(old) == rel(new)


@dataclass(frozen=True)
class Method:
    """A single-winner rule viewed as a function of a ranked profile.

    ``behaviors`` enumerates how voters could express their rankings on the
    method's own ballot (approval depth, point splits); most methods have
    exactly one. ``keeps_pair`` decides whether replacing one ranking by
    another leaves the voter's expressed opinion of the pair ``(a, b)``
    unchanged, which is what independence of irrelevant alternatives fixes.
    """

    name: str
    run: Callable[[Profile, Behavior, TiePolicy], int]
    behaviors: Callable[[Profile], Iterable[Behavior]] = _no_behavior
    keeps_pair: Callable[[tuple, tuple, object, int, int], bool] = _same_order

    def winner(self, profile: Profile, behavior: Behavior = None, tie: TiePolicy = STRICT) -> int | None:
        try:
            return self.run(profile, behavior, tie)
        except TieUnresolved:
            return None


def _approval_depths(profile: Profile) -> Iterable[Behavior]:
    depths = range(1, max(2, profile.k))
    return itertools.product(depths, repeat=len(profile.ballots))


def _approval_run(profile: Profile, behavior: Behavior, tie: TiePolicy) -> int:
    depths = behavior if behavior is not None else (1,) * len(profile.ballots)
    return sw.approval(sw.approval_from_ranking(profile, depths), tie).winner


def _approval_keeps(old, new, depth, a, b) -> bool:
    d = depth if depth is not None else 1
    return _same_order(old, new, None, a, b) and (a in old[:d]) == (a in new[:d]) and (b in old[:d]) == (b in new[:d])


def point_pattern(name: str, k: int) -> tuple[int, ...]:
    if name == "plurality":
        return (1,) + (0,) * (k - 1)
    if name == "borda":
        return tuple(range(k - 1, -1, -1))
    raise ValueError(f"unknown point pattern {name!r}")


def cumulative_from_ranking(profile: Profile, patterns: Sequence[str]) -> Profile:
    """Cumulative ballots spending points down each ranking by a named pattern."""
    k = profile.k
    ballots = []
    for b, pat in zip(profile.ballots, patterns):
        pts = point_pattern(pat, k)
        ballots.append(CumulativeBallot(tuple(sorted((c, pts[i]) for i, c in enumerate(b.ranking) if pts[i])),
                                        b.weight))
    budget = max(sum(point_pattern(p, k)) for p in ("plurality", "borda"))
    return Profile(profile.roster, tuple(ballots), "cumulative", budget=budget)


def _cumulative_behaviors(profile: Profile) -> Iterable[Behavior]:
    n = len(profile.ballots)
    return (("plurality",) * n, ("borda",) * n)


def _cumulative_run(profile: Profile, behavior: Behavior, tie: TiePolicy) -> int:
    patterns = behavior if behavior is not None else ("plurality",) * len(profile.ballots)
    return sw.cumulative(cumulative_from_ranking(profile, patterns), tie=tie).winner


STANDARD_METHODS: dict[str, Method] = {
    "FPTP": Method("FPTP", lambda p, b, t: sw.fptp(sw.first_preference_profile(p), t).winner),
    "Approval": Method("Approval", _approval_run, _approval_depths, _approval_keeps),
    "TRS": Method("TRS", lambda p, b, t: sw.two_round(p, t).winner),
    "Contingent": Method("Contingent", lambda p, b, t: sw.contingent(p, tie=t).winner),
    "Exhaustive": Method("Exhaustive", lambda p, b, t: sw.exhaustive_simulated(p, t).winner),
    "IRV": Method("IRV", lambda p, b, t: sw.irv(p, t).winner),
    "Borda": Method("Borda", lambda p, b, t: sw.borda(p, tie=t).winner),
    "Cumulative": Method("Cumulative", _cumulative_run, _cumulative_behaviors),
    "Schulze": Method("Schulze", lambda p, b, t: sw.schulze_tally(p, tie=t).winner),
}

EXTRA_METHODS: dict[str, Method] = {
    "Coombs": Method("Coombs", lambda p, b, t: sw.coombs(p, t).winner),
    "SmithIRV": Method("SmithIRV", lambda p, b, t: sw.smith_irv(p, t).winner),
    "Black": Method("Black", lambda p, b, t: sw.black(p, tie=t).winner),
}

METHODS = {**STANDARD_METHODS, **EXTRA_METHODS}


def get_method(method: Method | str) -> Method:
    if isinstance(method, Method):
        return method
    for name, m in METHODS.items():
        if name.lower() == method.lower():
            return m
    raise KeyError(f"unknown method {method!r}; choose from {sorted(METHODS)}")


# -- profile helpers ----------------------------------------------------------

def _with_groups(profile: Profile, groups: Sequence[tuple[tuple[int, ...], int]]) -> Profile:
    return profile.replace_ballots(RankedBallot(r, w) for r, w in groups if w > 0)


def _groups(profile: Profile) -> list[tuple[tuple[int, ...], int]]:
    return [(b.ranking, b.weight) for b in profile.ballots]


def _rank_pos(r: tuple, c: int) -> int:
    return r.index(c) if c in r else len(r)


def first_preference_majority(profile: Profile) -> int | None:
    profile.require("ranked")
    fp = sw.first_preferences(profile) if profile.ballots else {}
    total = profile.total_weight
    for c, v in fp.items():
        if 2 * v > total:
            return c
    return None


def _verify(method: Method, w: Witness) -> Witness:
    again = method.winner(w.before, w.behavior_before)
    if again != w.outcome_before:
        raise AssertionError(f"witness replay mismatch for {method.name}: {again} != {w.outcome_before}")
    if w.after is not None:
        again = method.winner(w.after, w.behavior_after)
        if again != w.outcome_after:
            raise AssertionError(f"witness replay mismatch for {method.name}: {again} != {w.outcome_after}")
    return w


def _name(profile: Profile, c: int | None) -> str:
    return "no unique winner" if c is None else profile.name(c)


# -- single-profile criteria --------------------------------------------------

def _check_target(method: Method, profile: Profile, criterion: str, target: int | None, label: str) -> Verdict:
    if target is None:
        return Verdict(criterion, method.name, HOLDS, searched=1)
    skipped = searched = 0
    for behavior in method.behaviors(profile):
        searched += 1
        w = method.winner(profile, behavior)
        if w is None:
            skipped += 1
            continue
        if w != target:
            wit = _verify(method, Witness(profile, w, behavior_before=behavior,
                                          note=f"{label} {profile.name(target)} loses to {profile.name(w)}"))
            return Verdict(criterion, method.name, VIOLATED, wit, searched, skipped)
    return Verdict(criterion, method.name, HOLDS, searched=searched, skipped=skipped)


def check_majority(method: Method | str, profile: Profile) -> Verdict:
    """A first-preference majority candidate must win (vacuous otherwise)."""
    method = get_method(method)
    return _check_target(method, profile, "majority", first_preference_majority(profile), "majority candidate")


def check_condorcet(method: Method | str, profile: Profile) -> Verdict:
    method = get_method(method)
    cw = condorcet_winner(pairwise_matrix(profile))
    return _check_target(method, profile, "condorcet", cw, "Condorcet winner")


def check_pareto(method: Method | str, profile: Profile) -> Verdict:
    """No candidate that every voter ranks below some other candidate may win."""
    method = get_method(method)
    skipped = searched = 0
    for behavior in method.behaviors(profile):
        searched += 1
        w = method.winner(profile, behavior)
        if w is None:
            skipped += 1
            continue
        for a in range(profile.k):
            if a != w and profile.ballots and all(_rank_pos(b.ranking, a) < _rank_pos(b.ranking, w)
                                                  for b in profile.ballots):
                wit = _verify(method, Witness(profile, w, behavior_before=behavior,
                                              note=f"every voter prefers {profile.name(a)} to "
                                                   f"{profile.name(w)}, yet {profile.name(w)} wins"))
                return Verdict("pareto", method.name, VIOLATED, wit, searched, skipped)
    return Verdict("pareto", method.name, HOLDS, searched=searched, skipped=skipped)


def _relabel(profile: Profile, perm: Mapping[int, int]) -> Profile:
    return profile.replace_ballots(RankedBallot(tuple(perm[c] for c in b.ranking), b.weight)
                                   for b in profile.ballots)


def check_equality(method: Method | str, profile: Profile, trials: int = 24, seed: int = 0) -> Verdict:
    """Winner must not depend on the order in which ballots are listed."""
    method = get_method(method)
    groups = list(range(len(profile.ballots)))
    if len(groups) <= 4:
        orders = list(itertools.permutations(groups))
    else:
        rng = random.Random(seed)
        orders = [tuple(groups)]
        for _ in range(trials):
            g = groups[:]
            rng.shuffle(g)
            orders.append(tuple(g))
    searched = skipped = 0
    for behavior in method.behaviors(profile):
        base = method.winner(profile, behavior)
        if base is None:
            skipped += 1
            continue
        for order in orders:
            searched += 1
            p2 = profile.replace_ballots(profile.ballots[i] for i in order)
            b2 = None if behavior is None else tuple(behavior[i] for i in order)
            w2 = method.winner(p2, b2)
            if w2 is None:
                skipped += 1
            elif w2 != base:
                wit = _verify(method, Witness(profile, base, p2, w2, behavior, b2,
                                              "reordering the ballots changes the winner"))
                return Verdict("equality", method.name, VIOLATED, wit, searched, skipped)
    return Verdict("equality", method.name, HOLDS, searched=searched, skipped=skipped)


def check_neutrality(method: Method | str, profile: Profile) -> Verdict:
    """Swapping two candidates on every ballot must swap them in the outcome."""
    method = get_method(method)
    searched = skipped = 0
    for behavior in method.behaviors(profile):
        base = method.winner(profile, behavior)
        if base is None:
            skipped += 1
            continue
        for x, y in itertools.combinations(range(profile.k), 2):
            searched += 1
            perm = {c: c for c in range(profile.k)}
            perm[x], perm[y] = y, x
            p2 = _relabel(profile, perm)
            w2 = method.winner(p2, behavior)
            if w2 is None:
                skipped += 1
            elif w2 != perm[base]:
                wit = _verify(method, Witness(profile, base, p2, w2, behavior, behavior,
                                              f"swapping {profile.name(x)} and {profile.name(y)} "
                                              f"elects {profile.name(w2)} instead of {profile.name(perm[base])}"))
                return Verdict("neutrality", method.name, VIOLATED, wit, searched, skipped)
    return Verdict("neutrality", method.name, HOLDS, searched=searched, skipped=skipped)


def check_equality_neutrality(method: Method | str, profile: Profile, trials: int = 24,
                              seed: int = 0) -> tuple[Verdict, Verdict]:
    return check_equality(method, profile, trials, seed), check_neutrality(method, profile)


# -- bounded searches ---------------------------------------------------------

def _count_splits(options: Sequence[tuple[int, object]], capacity: Mapping[int, int], budget: int) -> Iterator[tuple[int, ...]]:
    """Assignments of counts to ``options`` with total 1..budget, smallest total first."""
    for total in range(1, budget + 1):
        yield from _splits_exact(options, capacity, total, 0, ())


def _splits_exact(options, capacity, left, i, acc):
    if i == len(options):
        if left == 0:
            yield acc
        return
    g = options[i][0]
    used = sum(c for (gg, _), c in zip(options[:i], acc) if gg == g)
    for c in range(min(left, capacity[g] - used), -1, -1):
        yield from _splits_exact(options, capacity, left - c, i + 1, acc + (c,))


def _apply_moves(groups, behavior, options, counts):
    new_groups = [list(g) for g in groups]
    new_beh = list(behavior) if behavior is not None else None
    for (g, ranking), c in zip(options, counts):
        if c == 0:
            continue
        new_groups[g][1] -= c
        new_groups.append([ranking, c])
        if new_beh is not None:
            new_beh.append(behavior[g])
    keep = [i for i, g in enumerate(new_groups) if g[1] > 0]
    out_groups = [tuple(new_groups[i]) for i in keep]
    out_beh = tuple(new_beh[i] for i in keep) if new_beh is not None else None
    return out_groups, out_beh


def improvement_options(profile: Profile, winner: int) -> list[tuple[int, tuple[int, ...]]]:
    """Ways to raise ``winner`` on one ballot: swap it with a candidate ranked above it."""
    opts = []
    for g, b in enumerate(profile.ballots):
        r = b.ranking
        if winner not in r:
            continue
        i = r.index(winner)
        for j in range(i):
            new = list(r)
            new[i], new[j] = new[j], new[i]
            opts.append((g, tuple(new)))
    return opts


def search_monotonicity(method: Method | str, base_profile: Profile, bounds: int = 1) -> Verdict:
    """Look for winner-raising moves on at most ``bounds`` ballots that make the winner lose."""
    method = get_method(method)
    searched = skipped = 0
    groups = _groups(base_profile)
    capacity = {g: w for g, (_, w) in enumerate(groups)}
    for behavior in method.behaviors(base_profile):
        w0 = method.winner(base_profile, behavior)
        if w0 is None:
            skipped += 1
            continue
        options = improvement_options(base_profile, w0)
        for counts in _count_splits(options, capacity, bounds):
            searched += 1
            new_groups, new_beh = _apply_moves(groups, behavior, options, counts)
            p2 = _with_groups(base_profile, new_groups)
            w1 = method.winner(p2, new_beh)
            if w1 is None:
                skipped += 1
                continue
            if w1 != w0:
                moved = sum(counts)
                wit = _verify(method, Witness(base_profile, w0, p2, w1, behavior, new_beh,
                                              f"raising {base_profile.name(w0)} on {moved} ballot(s) "
                                              f"makes {base_profile.name(w1)} win"))
                return Verdict("monotonicity", method.name, VIOLATED, wit, searched, skipped)
    return Verdict("monotonicity", method.name, NOT_REFUTED, searched=searched, skipped=skipped)


def _alternatives(ranking: tuple[int, ...]) -> list[tuple[int, ...]]:
    return [p for p in itertools.permutations(sorted(ranking)) if p != ranking]


def search_iia(method: Method | str, base_profile: Profile, bounds: int = 1) -> Verdict:
    """Re-rank up to ``bounds`` ballot groups, keeping each voter's view of (winner, rival).

    Violated when the rival then wins.
    """
    method = get_method(method)
    searched = skipped = 0
    groups = _groups(base_profile)
    for behavior in method.behaviors(base_profile):
        w0 = method.winner(base_profile, behavior)
        if w0 is None:
            skipped += 1
            continue
        for rival in range(base_profile.k):
            if rival == w0:
                continue
            alts = []
            for g, (r, _) in enumerate(groups):
                item = behavior[g] if behavior is not None else None
                alts.append([a for a in _alternatives(r) if method.keeps_pair(r, a, item, w0, rival)])
            for n in range(1, bounds + 1):
                for chosen in itertools.combinations(range(len(groups)), n):
                    for picks in itertools.product(*(alts[g] for g in chosen)):
                        searched += 1
                        new_groups = list(groups)
                        for g, a in zip(chosen, picks):
                            new_groups[g] = (a, groups[g][1])
                        p2 = _with_groups(base_profile, new_groups)
                        w1 = method.winner(p2, behavior)
                        if w1 is None:
                            skipped += 1
                            continue
                        if w1 == rival:
                            wit = _verify(method, Witness(
                                base_profile, w0, p2, w1, behavior, behavior,
                                f"{base_profile.name(rival)} wins after re-ranking {n} group(s) while every "
                                f"voter keeps their {base_profile.name(w0)}-vs-{base_profile.name(rival)} order"))
                            return Verdict("iia", method.name, VIOLATED, wit, searched, skipped)
    return Verdict("iia", method.name, NOT_REFUTED, searched=searched, skipped=skipped)


# -- May's theorem ------------------------------------------------------------

TwoCandidateMethod = Callable[[Profile], "int | None"]


def simple_majority(profile: Profile) -> int | None:
    t = sw.nominal_totals(profile, 1)
    if t[0] == t[1]:
        return None
    return 0 if t[0] > t[1] else 1


def super_majority(fraction) -> TwoCandidateMethod:
    def method(profile: Profile) -> int | None:
        if not profile.ballots:
            return None
        return sw.quota_winner(profile, fraction)
    method.__name__ = f"super_majority_{Fraction(fraction)}"
    return method


def constant_tie(profile: Profile) -> None:
    return None


MAY_PROPERTIES = ("egalitarian", "neutral", "monotone", "nearly_decisive")


def _two_profile(votes: Sequence[int | None]) -> Profile:
    ballots = [NominalBallot(frozenset([v]), 1) for v in votes if v is not None]
    return Profile(make_roster(["A", "B"]), tuple(ballots), "nominal")


def check_may_properties(method: TwoCandidateMethod, max_voters: int = 8) -> dict[str, Verdict]:
    """Exhaustively test the four May conditions on two-candidate electorates.

    Each voter votes A, B or abstains; all electorates of 1..``max_voters``
    voters are enumerated.
    """
    name = getattr(method, "__name__", "method")
    found: dict[str, Witness] = {}
    searched = 0
    cache: dict[tuple, int | None] = {}

    def outcome(votes):
        if votes not in cache:
            cache[votes] = method(_two_profile(votes))
        return cache[votes]

    for n in range(1, max_voters + 1):
        for votes in itertools.product((0, 1, None), repeat=n):
            searched += 1
            res = outcome(votes)
            prof = None
            if "egalitarian" not in found:
                canon = tuple(sorted(votes, key=lambda v: (v is None, v)))
                if outcome(canon) != res:
                    prof = _two_profile(votes)
                    found["egalitarian"] = Witness(prof, res, _two_profile(canon), outcome(canon),
                                                   note="reordering voters changes the outcome")
            if "neutral" not in found:
                swapped = tuple(None if v is None else 1 - v for v in votes)
                expect = None if res is None else 1 - res
                if outcome(swapped) != expect:
                    found["neutral"] = Witness(_two_profile(votes), res, _two_profile(swapped), outcome(swapped),
                                               note="swapping the candidates does not swap the outcome")
            if "monotone" not in found and res is not None:
                for i, v in enumerate(votes):
                    if v != res:
                        better = votes[:i] + (res,) + votes[i + 1:]
                        if outcome(better) != res:
                            found["monotone"] = Witness(_two_profile(votes), res, _two_profile(better),
                                                        outcome(better),
                                                        note="a voter moving to the winner makes them lose")
                            break
            if "nearly_decisive" not in found and res is None:
                a, b = votes.count(0), votes.count(1)
                if a != b:
                    found["nearly_decisive"] = Witness(_two_profile(votes), None,
                                                       note=f"tie declared at {a}-{b}")
    out = {}
    for prop in MAY_PROPERTIES:
        if prop in found:
            out[prop] = Verdict(prop, name, VIOLATED, found[prop], searched)
        else:
            out[prop] = Verdict(prop, name, NOT_REFUTED, searched=searched)
    return out


# -- profile pools and the criteria table --------------------------------------

def small_profile_pool(k: int = 3, max_ballots: int = 5, names: Sequence[str] | None = None) -> list[Profile]:
    """Every profile of 1..``max_ballots`` complete rankings over ``k`` candidates, canonically ordered."""
    names = list(names) if names else [chr(ord("A") + i) for i in range(k)]
    rankings = list(itertools.permutations(range(k)))
    pool = []
    for n in range(1, max_ballots + 1):
        for combo in itertools.combinations_with_replacement(range(len(rankings)), n):
            counts: dict[int, int] = {}
            for i in combo:
                counts[i] = counts.get(i, 0) + 1
            pool.append(ranked_profile(names, [(w, rankings[i]) for i, w in counts.items()]))
    return pool


def classic_profiles() -> dict[str, Profile]:
    """Small textbook elections that seed every criteria search."""
    return {
        "election1": ranked_profile("ABC", [(4, "ABC"), (2, "BCA"), (3, "CBA")]),
        "election2": ranked_profile("ABC", [(6, "ABC"), (5, "CAB"), (4, "BCA"), (2, "BAC")]),
        "election3": ranked_profile("ABC", [(30, "ABC"), (1, "ACB"), (29, "BAC"), (10, "BCA"), (10, "CAB"), (1, "CBA")]),
        "paradox": ranked_profile("ABC", [(1, "ABC"), (1, "BCA"), (1, "CAB")]),
    }


@dataclass(frozen=True)
class SearchBounds:
    seed_monotonicity: int = 2
    seed_iia: int = 2
    pool_monotonicity: int = 1
    pool_iia: int = 1


def audit(method: Method | str, criterion: str, seeds: Sequence[Profile], pool: Sequence[Profile],
          bounds: SearchBounds = SearchBounds()) -> Verdict:
    """Search seeds, then the pool, for a violation of ``criterion``."""
    method = get_method(method)
    searched = skipped = 0

    def run(profile: Profile, seeded: bool) -> Verdict:
        if criterion == "majority":
            return check_majority(method, profile)
        if criterion == "condorcet":
            return check_condorcet(method, profile)
        if criterion == "pareto":
            return check_pareto(method, profile)
        if criterion == "equality":
            return check_equality(method, profile)
        if criterion == "neutrality":
            return check_neutrality(method, profile)
        if criterion == "monotonicity":
            return search_monotonicity(method, profile, bounds.seed_monotonicity if seeded else bounds.pool_monotonicity)
        if criterion == "iia":
            return search_iia(method, profile, bounds.seed_iia if seeded else bounds.pool_iia)
        raise ValueError(f"unknown criterion {criterion!r}")

    for profiles, seeded in ((seeds, True), (pool, False)):
        for profile in profiles:
            v = run(profile, seeded)
            searched += max(1, v.searched)
            skipped += v.skipped
            if v.violated:
                return Verdict(criterion, method.name, VIOLATED, v.witness, searched, skipped)
    return Verdict(criterion, method.name, NOT_REFUTED, searched=searched, skipped=skipped)


def _cell(args):
    method_name, criterion, seeds, pool, bounds = args
    return audit(method_name, criterion, seeds, pool, bounds)


def criteria_table(methods: Sequence[str] = tuple(STANDARD_METHODS), profile_pool: Sequence[Profile] | None = None,
                   bounds: SearchBounds = SearchBounds(), seeds: Sequence[Profile] | None = None,
                   criteria: Sequence[str] = CRITERIA, workers: int = 1) -> dict[str, dict[str, Verdict]]:
    """Verdict for every (method, criterion) pair.

    Each cell is searched independently in canonical order, so the table is
    the same for any number of ``workers``.
    """
    seeds = list(classic_profiles().values()) if seeds is None else list(seeds)
    pool = small_profile_pool() if profile_pool is None else list(profile_pool)
    jobs = [(m, c, seeds, pool, bounds) for m in methods for c in criteria]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_cell, jobs, chunksize=1))
    else:
        results = [_cell(j) for j in jobs]
    table: dict[str, dict[str, Verdict]] = {m: {} for m in methods}
    for (m, c, *_), v in zip(jobs, results):
        table[m][c] = v
    return table


def format_table(table: Mapping[str, Mapping[str, Verdict]]) -> str:
    crits = list(next(iter(table.values())).keys()) if table else []
    short = {"equality": "Equ", "neutrality": "Neu", "majority": "Maj", "condorcet": "Con",
             "monotonicity": "Mon", "pareto": "Par", "iia": "IIA"}
    lines = ["System".ljust(12) + "".join(short.get(c, c[:3]).rjust(6) for c in crits)]
    for m, row in table.items():
        lines.append(m.ljust(12) + "".join(("x" if row[c].violated else "ok").rjust(6) for c in crits))
    lines.append("ok = not refuted within bounds; x = violated with a replayed witness")
    return "\n".join(lines)


# -- wasted votes -------------------------------------------------------------

@dataclass(frozen=True)
class WastedVotes:
    count: Fraction
    total: Fraction

    @property
    def fraction(self) -> Fraction:
        return self.count / self.total if self.total else Fraction(0)


def wasted_votes(result: TallyResult | SeatAllocation, profile: Profile | None = None) -> WastedVotes:
    """Votes that help elect nobody.

    For candidate tallies these are ballots on which every marked or ranked
    candidate lost; for list allocations, votes for parties left without seats.
    """
    if isinstance(result, SeatAllocation):
        total = sum(result.votes.values(), Fraction(0))
        wasted = sum((v for p, v in result.votes.items() if result.seats.get(p, 0) == 0), Fraction(0))
        return WastedVotes(wasted, total)
    if profile is None:
        raise ValueError("candidate tallies need the profile to count wasted ballots")
    winners = set(result.winners)
    wasted = 0
    for b in profile.ballots:
        if b.kind in ("score", "cumulative"):
            backed = {c for c, s in b.as_dict().items() if s > 0}
        else:
            backed = set(b.candidates())
        if not backed & winners:
            wasted += b.weight
    return WastedVotes(Fraction(wasted), Fraction(profile.total_weight))

"""Slow, obviously-correct reference computations used to cross-check the library."""

import itertools
from fractions import Fraction


def dominating_set(d, k):
    """Smallest non-empty set whose members all strictly beat every outsider."""
    for size in range(1, k + 1):
        for s in itertools.combinations(range(k), size):
            if all(d[x][y] > d[y][x] for x in s for y in range(k) if y not in s):
                return frozenset(s)
    raise AssertionError("the full roster always dominates")


def pairwise_counts(rankings_with_weights, k):
    d = [[0] * k for _ in range(k)]
    for ranking, w in rankings_with_weights:
        for i, x in enumerate(ranking):
            for y in range(k):
                if y != x and (y not in ranking or ranking.index(y) > i):
                    d[x][y] += w
    return d


def path_strengths(d, k, margins=False):
    """Best bottleneck over every simple path, by enumeration."""
    def link(x, y):
        if margins:
            return d[x][y] - d[y][x]
        return d[x][y] if d[x][y] > d[y][x] else 0

    p = [[0] * k for _ in range(k)]
    for x in range(k):
        for y in range(k):
            if x == y:
                continue
            others = [c for c in range(k) if c not in (x, y)]
            best = None
            for n in range(len(others) + 1):
                for mid in itertools.permutations(others, n):
                    path = (x, *mid, y)
                    s = min(link(a, b) for a, b in zip(path, path[1:]))
                    best = s if best is None else max(best, s)
            p[x][y] = best
    return p


def divisor_seats(votes, seats, divisor):
    """Rank every average votes/divisor(i) for i < seats and count the top ``seats``."""
    avgs = []
    for order, (party, v) in enumerate(votes.items()):
        for i in range(seats):
            avgs.append((Fraction(v) / divisor(i), Fraction(v), -order, party))
    avgs.sort(reverse=True)
    out = {p: 0 for p in votes}
    for *_, p in avgs[:seats]:
        out[p] += 1
    return out


def remainder_seats(votes, seats, q):
    """Integer-only floor/remainder bookkeeping as on a tally sheet."""
    initial = {p: v // q for p, v in votes.items()}
    rem = {p: v % q for p, v in votes.items()}
    left = seats - sum(initial.values())
    order = sorted(votes, key=lambda p: (-rem[p], -votes[p], list(votes).index(p)))
    return {p: initial[p] + (1 if p in order[:left] else 0) for p in votes}

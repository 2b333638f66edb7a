"""Reading and writing ballot files, party-vote tables and results.

Ballot files use the BLT layout common to STV software::

    3 1            <- candidates, seats
    -2             <- optional: withdrawn candidates, negated
    4 1 2 3 0      <- weight, preferences (1-based), terminating 0
    2 2 3 1 0
    0              <- end of ballots
    "A"
    "B"
    "C"
    "Election 1"   <- title

Results are written as JSON with sorted keys. Every rational is an object
``{"num", "den", "display"}`` so the file is exact and still readable.
"""

from __future__ import annotations

import csv
import io as _io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ballotworks.apportionment import RemainderRow, SeatAllocation
from ballotworks.core import (
    CumulativeBallot,
    NominalBallot,
    Profile,
    RankedBallot,
    ScoreBallot,
    TieEvent,
    build_profile,
    truncate_decimal,
)
from ballotworks.errors import (
    BallotSyntaxError,
    CandidateIndexOutOfRange,
    DuplicateParty,
    InputError,
    MissingTerminator,
    NegativeVotes,
)
from ballotworks.mixed import MixedRow
from ballotworks.rounds import Action, RoundReport, TallyResult


@dataclass(frozen=True)
class ElectionFile:
    profile: Profile
    seats: int
    withdrawn: frozenset[int] = frozenset()
    title: str = ""


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise BallotSyntaxError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _quoted(line: str, lineno: int, what: str) -> str:
    if len(line) < 2 or not (line.startswith('"') and line.endswith('"')):
        raise BallotSyntaxError(f"expected a quoted {what}, got {line!r}", lineno)
    return line[1:-1]


def parse_blt(text: str) -> ElectionFile:
    """Parse a BLT ballot file.

    Withdrawn candidates stay on the roster but are struck from every
    ballot; a ballot left empty by that is counted as spoiled.
    """
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.replace("\r\n", "\n").split("\n"))]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise BallotSyntaxError("empty file", 1)
    pos = 0

    n, first = lines[pos]
    head = _ints(first.split(), n)
    if len(head) != 2 or head[0] < 1 or head[1] < 1:
        raise BallotSyntaxError("first line must be 'candidates seats' with both positive", n)
    k, seats = head
    pos += 1

    withdrawn: set[int] = set()
    if pos < len(lines) and lines[pos][1].startswith("-"):
        n, ln = lines[pos]
        for c in _ints(ln.split(), n):
            if c >= 0:
                raise BallotSyntaxError("withdrawal line must hold negative indices only", n)
            if -c > k:
                raise CandidateIndexOutOfRange(f"withdrawn candidate {-c} is not among 1..{k}", n)
            withdrawn.add(-c - 1)
        pos += 1

    groups: list[tuple[tuple[int, ...], int]] = []
    terminated = False
    while pos < len(lines):
        n, ln = lines[pos]
        if ln.startswith('"'):
            break
        pos += 1
        nums = _ints(ln.split(), n)
        if nums == [0]:
            terminated = True
            break
        if nums[-1] != 0:
            raise MissingTerminator("ballot line must end with 0", n)
        weight, prefs = nums[0], nums[1:-1]
        if weight <= 0:
            raise BallotSyntaxError("ballot weight must be positive", n)
        if not prefs:
            raise BallotSyntaxError("ballot ranks no candidate", n)
        for c in prefs:
            if not 1 <= c <= k:
                raise CandidateIndexOutOfRange(f"candidate {c} is not among 1..{k}", n)
        if len(set(prefs)) != len(prefs):
            raise BallotSyntaxError("candidate ranked twice on one ballot", n)
        groups.append((tuple(c - 1 for c in prefs), weight))
    if not terminated:
        raise MissingTerminator("ballot section is not closed by a lone 0",
                                lines[pos][0] if pos < len(lines) else lines[-1][0])
    if not groups:
        raise BallotSyntaxError("no ballots before the closing 0", lines[pos - 1][0])

    names = []
    for _ in range(k):
        if pos >= len(lines):
            raise BallotSyntaxError(f"expected {k} candidate names, found {len(names)}", lines[-1][0])
        n, ln = lines[pos]
        names.append(_quoted(ln, n, "candidate name"))
        pos += 1
    title = ""
    if pos < len(lines):
        n, ln = lines[pos]
        title = _quoted(ln, n, "title")
        pos += 1
    if pos < len(lines):
        raise BallotSyntaxError("unexpected text after the title", lines[pos][0])

    ballots, spoiled = [], 0
    for ranking, weight in groups:
        kept = tuple(c for c in ranking if c not in withdrawn)
        if kept:
            ballots.append(RankedBallot(kept, weight))
        else:
            spoiled += weight
    profile = build_profile(names, ballots)
    if spoiled:
        profile = Profile(profile.roster, profile.ballots, profile.kind, spoiled)
    return ElectionFile(profile, seats, frozenset(withdrawn), title)


parse_ballots = parse_blt


def _quote(s: str) -> str:
    return '"' + s.replace('"', "'") + '"'


def format_blt(profile: Profile, seats: int = 1, title: str = "", withdrawn: Sequence[int] = ()) -> str:
    profile.require("ranked")
    out = [f"{profile.k} {seats}"]
    if withdrawn:
        out.append(" ".join(str(-(c + 1)) for c in sorted(withdrawn)))
    for b in profile.ballots:
        out.append(" ".join([str(b.weight), *(str(c + 1) for c in b.ranking), "0"]))
    out.append("0")
    out += [_quote(name) for name in profile.names]
    out.append(_quote(title))
    return "\n".join(out) + "\n"


def as_nominal(profile: Profile) -> Profile:
    """Read each ranked ballot as a set of marks for the candidates it lists."""
    profile.require("ranked", "nominal")
    if profile.kind == "nominal":
        return profile
    return Profile(profile.roster, tuple(NominalBallot(frozenset(b.ranking), b.weight) for b in profile.ballots),
                   "nominal", profile.spoiled)


# -- tables --------------------------------------------------------------------

def _number(text: str, row: int) -> Fraction | int:
    try:
        v = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"row {row}: {text!r} is not a number") from None
    return int(v) if v.denominator == 1 else v


def _rows(text: str) -> list[tuple[int, list[str]]]:
    reader = csv.reader(_io.StringIO(text.replace("\r\n", "\n")))
    return [(i + 1, [c.strip() for c in row]) for i, row in enumerate(reader) if any(c.strip() for c in row)]


def _is_number(s: str) -> bool:
    try:
        Fraction(s)
        return True
    except (ValueError, ZeroDivisionError):
        return False


def parse_party_votes(text: str) -> dict[str, Fraction | int]:
    """``party,votes`` rows, header optional. Decimal shares are kept exact."""
    return parse_mixed_table(text)[0]


def parse_mixed_table(text: str) -> tuple[dict[str, Fraction | int], dict[str, int]]:
    """``party,votes[,constituency_seats]`` rows, header optional."""
    rows = _rows(text)
    if rows and len(rows[0][1]) > 1 and not _is_number(rows[0][1][1]):
        rows = rows[1:]
    votes: dict[str, Fraction | int] = {}
    seats: dict[str, int] = {}
    for n, row in rows:
        if len(row) < 2 or not row[0]:
            raise InputError(f"row {n}: expected 'party,votes'")
        party = row[0]
        if party in votes:
            raise DuplicateParty(f"row {n}: party {party!r} listed twice")
        v = _number(row[1], n)
        if v < 0:
            raise NegativeVotes(f"row {n}: negative votes for {party!r}")
        votes[party] = v
        if len(row) > 2 and row[2]:
            s = _number(row[2], n)
            if not isinstance(s, int) or s < 0:
                raise InputError(f"row {n}: constituency seats must be a non-negative integer")
            seats[party] = s
    if not votes:
        raise InputError("no parties in table")
    return votes, seats


def format_party_votes(votes: Mapping[str, object]) -> str:
    out = ["party,votes"]
    for p, v in votes.items():
        f = Fraction(v)
        out.append(f"{p},{f.numerator if f.denominator == 1 else _decimal(f)}")
    return "\n".join(out) + "\n"


def _decimal(f: Fraction) -> str:
    # exact decimal when the denominator allows it, else num/den
    d = f.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d != 1:
        return f"{f.numerator}/{f.denominator}"
    scale = 0
    while (f * 10 ** scale).denominator != 1:
        scale += 1
    return truncate_decimal(f, scale)


def parse_score_table(text: str, kind: str = "score", *, score_range: tuple[int, int] | None = None,
                      budget: int | None = None, cap: int | None = None) -> Profile:
    """Cardinal ballots as CSV: header ``weight,<name>,...``; blank cells are unscored."""
    if kind not in ("score", "cumulative"):
        raise ValueError("kind must be 'score' or 'cumulative'")
    rows = _rows(text)
    if not rows:
        raise InputError("empty score table")
    header = rows[0][1]
    if not header or header[0].lower() != "weight" or len(header) < 2:
        raise InputError("score table header must be 'weight,<candidate>,...'")
    names = header[1:]
    ballots = []
    for n, row in rows[1:]:
        if len(row) != len(header):
            raise InputError(f"row {n}: expected {len(header)} cells")
        w = _number(row[0], n)
        if not isinstance(w, int) or w <= 0:
            raise InputError(f"row {n}: weight must be a positive integer")
        cells = []
        for c, cell in enumerate(row[1:]):
            if cell:
                v = _number(cell, n)
                if not isinstance(v, int):
                    raise InputError(f"row {n}: scores must be integers")
                cells.append((c, v))
        if kind == "score":
            ballots.append(ScoreBallot(tuple(cells), w))
        else:
            ballots.append(CumulativeBallot(tuple((c, v) for c, v in cells if v), w))
    return build_profile(names, ballots, score_range=score_range, budget=budget, cap=cap)


# -- results as JSON -----------------------------------------------------------

def _rat(value, scale: int) -> dict:
    f = Fraction(value)
    return {"num": f.numerator, "den": f.denominator, "display": truncate_decimal(f, scale)}


def _unrat(obj) -> Fraction:
    return Fraction(obj["num"], obj["den"])


def _named(d: Mapping[int, object], names: Sequence[str], scale: int) -> dict:
    return {names[c]: _rat(v, scale) for c, v in d.items()}


def _unnamed(d: Mapping[str, dict], names: Sequence[str]) -> dict[int, Fraction]:
    idx = {n: i for i, n in enumerate(names)}
    return {idx[n]: _unrat(v) for n, v in sorted(d.items(), key=lambda kv: idx[kv[0]])}


def _tally_doc(result: TallyResult, scale: int) -> dict:
    names = result.candidates
    rounds = []
    for r in result.rounds:
        rounds.append({
            "round": r.round_index,
            "totals": _named(r.continuing_totals, names, scale),
            "elected_totals": _named(r.elected_totals, names, scale),
            "exhausted": _rat(r.exhausted, scale),
            "quota": None if r.quota is None else _rat(r.quota, scale),
            "action": {"kind": r.action.kind, "candidates": [names[c] for c in r.action.candidates]},
            "transfers": _named(r.transfers, names, scale),
            "exhausted_transfer": _rat(r.exhausted_transfer, scale),
        })
    return {
        "type": "tally",
        "method": result.method,
        "candidates": list(names),
        "winners": [names[c] for c in result.winners],
        "rounds": rounds,
        "ties": [{"round": e.round, "tied": [names[c] for c in e.tied], "chosen": names[e.chosen], "role": e.role}
                 for e in result.tie_events],
        "scores": None if result.scores is None else _named(result.scores, names, scale),
    }


def _working_doc(w, scale: int):
    if isinstance(w, RemainderRow):
        return {"quotient": _rat(w.quotient, scale), "initial": w.initial,
                "remainder": _rat(w.remainder, scale), "extra": w.extra}
    if isinstance(w, MixedRow):
        return {"constituency": w.constituency, "list_seats": w.list_seats, "target": w.target,
                "overhang": w.overhang}
    return {"averages": [_rat(a, scale) for a in w]}


def _working_from(doc):
    if "averages" in doc:
        return [_unrat(a) for a in doc["averages"]]
    if "quotient" in doc:
        return RemainderRow(_unrat(doc["quotient"]), doc["initial"], _unrat(doc["remainder"]), doc["extra"])
    return MixedRow(doc["constituency"], doc["list_seats"], doc["target"], doc["overhang"])


def _allocation_doc(a: SeatAllocation, scale: int) -> dict:
    return {
        "type": "allocation",
        "method": a.method,
        "parties": list(a.seats),
        "seats": dict(a.seats),
        "votes": {p: _rat(v, scale) for p, v in a.votes.items()},
        "working": {p: _working_doc(w, scale) for p, w in a.working.items()},
        "excluded_below_threshold": sorted(a.excluded_below_threshold),
        "selected": [{"party": p, "held": i, "average": _rat(v, scale)} for p, i, v in a.selected],
        "quota": a.quota,
        "notes": list(a.notes),
    }


def serialize_result(result: TallyResult | SeatAllocation, *, wasted=None, display_scale: int = 2) -> str:
    """JSON text for a tally or seat allocation; byte-stable for equal inputs."""
    if isinstance(result, SeatAllocation):
        doc = _allocation_doc(result, display_scale)
    else:
        doc = _tally_doc(result, display_scale)
    doc["wasted"] = None if wasted is None else _rat(wasted, display_scale)
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_result(text: str) -> TallyResult | SeatAllocation:
    """Inverse of :func:`serialize_result`."""
    doc = json.loads(text)
    if doc.get("type") == "allocation":
        parties = doc["parties"]
        return SeatAllocation(
            doc["method"],
            {p: doc["seats"][p] for p in parties},
            {p: _unrat(doc["votes"][p]) for p in parties if p in doc["votes"]},
            {p: _working_from(doc["working"][p]) for p in parties if p in doc["working"]},
            frozenset(doc["excluded_below_threshold"]),
            tuple((s["party"], s["held"], _unrat(s["average"])) for s in doc["selected"]),
            doc["quota"],
            tuple(doc["notes"]),
        )
    names = tuple(doc["candidates"])
    idx = {n: i for i, n in enumerate(names)}
    rounds = tuple(
        RoundReport(
            r["round"],
            _unnamed(r["totals"], names),
            _unrat(r["exhausted"]),
            None if r["quota"] is None else _unrat(r["quota"]),
            Action(r["action"]["kind"], tuple(idx[c] for c in r["action"]["candidates"])),
            _unnamed(r["transfers"], names),
            _unrat(r["exhausted_transfer"]),
            _unnamed(r["elected_totals"], names),
        )
        for r in doc["rounds"]
    )
    ties = tuple(TieEvent(t["round"], tuple(idx[c] for c in t["tied"]), idx[t["chosen"]], t["role"])
                 for t in doc["ties"])
    scores = None if doc["scores"] is None else _unnamed(doc["scores"], names)
    return TallyResult(doc["method"], names, tuple(idx[w] for w in doc["winners"]), rounds, ties, scores)

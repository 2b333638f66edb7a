"""Command-line front end: ``ballotworks tally|apportion|mixed|audit|convert``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from ballotworks import criteria
from ballotworks import multi_winner as mw
from ballotworks import single_winner as sw
from ballotworks.apportionment import (
    DivisorFamily,
    RemainderRow,
    SeatAllocation,
    highest_averages,
    largest_remainder,
    party_block_vote,
)
from ballotworks.core import TIE_MODES, Profile, TiePolicy, truncate_decimal
from ballotworks.errors import ElectionError, TieUnresolved
from ballotworks.io import (
    as_nominal,
    format_blt,
    format_party_votes,
    parse_blt,
    parse_mixed_table,
    parse_party_votes,
    parse_result,
    parse_score_table,
    serialize_result,
)
from ballotworks.mixed import ApportionmentRule, MixedInput, MixedRow, mmp, parallel
from ballotworks.rounds import TallyResult

TALLY_METHODS = ("fptp", "approval", "irv", "coombs", "contingent", "two-round", "exhaustive", "borda",
                 "range", "mj", "cumulative", "smith-irv", "black", "schulze", "stv", "block", "sntv",
                 "limited", "pbv")
DIVISORS = {"dhondt": "dhondt", "sainte-lague": "sainte_lague", "msl": "modified_sainte_lague",
            "imperiali": "imperiali_divisors", "danish": "danish"}
QUOTAS = {"hare": "hare", "droop": "droop", "hb": "hagenbach_bischoff", "imperiali": "imperiali"}


# -- rendering -----------------------------------------------------------------

def _cell(v, scale: int, signed: bool = False) -> str:
    return "" if v is None else truncate_decimal(v, scale, signed=signed)


def _grid(rows: list[list[str]], left: int = 0) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for r in rows:
        cells = [c.ljust(w) if i < left or i == len(r) - 1 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out)


def _remark(result: TallyResult, action) -> str:
    names = ", ".join(result.candidates[c] for c in action.candidates)
    if action.kind == "elected":
        return f"{names} elected"
    if action.kind == "excluded":
        return f"{names} excluded"
    if action.kind == "runoff":
        return f"{names} to the runoff"
    return ""


def render_tally(result: TallyResult, scale: int = 2) -> str:
    """Rounds as a table: totals row, then the signed transfers it caused."""
    names = list(result.candidates)
    rows = [names + ["Exhausted", "Quota", "Remark"]]
    for r in result.rounds:
        shown = {**r.elected_totals, **r.continuing_totals}
        rows.append([_cell(shown.get(c), scale) for c in range(len(names))]
                    + [_cell(r.exhausted, scale), _cell(r.quota, scale), f"Count {r.round_index}"])
        moves = [_cell(r.transfers.get(c), scale, True) if r.transfers.get(c) else "" for c in range(len(names))]
        rows.append(moves + [_cell(r.exhausted_transfer, scale, True) if r.exhausted_transfer else "", "",
                             _remark(result, r.action)])
    lines = [f"Method: {result.method}", _grid(rows)]
    if result.scores is not None and len(result.rounds) <= 1:
        lines = [f"Method: {result.method}",
                 _grid([["Candidate", "Score"]] + [[names[c], _cell(v, scale)] for c, v in result.scores.items()],
                       left=1)]
    for e in result.tie_events:
        lines.append(f"Tie in round {e.round} among {', '.join(names[c] for c in e.tied)}: "
                     f"{names[e.chosen]} chosen ({e.role})")
    lines.append("Elected: " + ", ".join(result.winner_names()))
    return "\n".join(lines) + "\n"


def render_allocation(a: SeatAllocation, scale: int = 2) -> str:
    parties = list(a.seats)
    sample = next(iter(a.working.values()), None)
    if isinstance(sample, RemainderRow):
        rows = [["Party", "Votes", "Quotient", "Initial", "Remainder", "Extra", "Seats"]]
        for p in parties:
            w = a.working.get(p)
            rows.append([p, _cell(a.votes[p], scale)]
                        + ([_cell(w.quotient, scale), str(w.initial), _cell(w.remainder, scale), str(w.extra)]
                           if w else ["", "", "", ""]) + [str(a.seats[p])])
        head = f"Method: {a.method} (quota {a.quota})"
    elif isinstance(sample, MixedRow):
        rows = [["Party", "Votes", "Constituency", "List", "Target", "Overhang", "Seats"]]
        for p in parties:
            w = a.working[p]
            rows.append([p, _cell(a.votes.get(p, 0), scale), str(w.constituency), str(w.list_seats),
                         "" if w.target is None else str(w.target), str(w.overhang), str(a.seats[p])])
        head = f"Method: {a.method}"
    else:
        picked = {(p, i) for p, i, _ in a.selected}
        width = max((len(w) for w in a.working.values()), default=0)
        rows = [["Party", "Votes"] + [f"/{i + 1}" for i in range(width)] + ["Seats"]]
        for p in parties:
            avgs = a.working.get(p, [])
            rows.append([p, _cell(a.votes[p], scale)]
                        + [_cell(v, scale) + ("*" if (p, i) in picked else " ") for i, v in enumerate(avgs)]
                        + [""] * (width - len(avgs)) + [str(a.seats[p])])
        head = f"Method: {a.method} (* marks a seat-winning average)"
    lines = [head, _grid(rows, left=1)]
    if a.excluded_below_threshold:
        lines.append("Below threshold: " + ", ".join(sorted(a.excluded_below_threshold)))
    lines += list(a.notes)
    lines.append(f"Total seats: {a.house_size}")
    return "\n".join(lines) + "\n"


# -- argument handling -------------------------------------------------------

def _tie(args) -> TiePolicy:
    seed = args.seed if args.seed is not None else int(os.environ.get("BALLOTWORKS_SEED", "0"))
    return TiePolicy(args.tie, seed)


def _range(text: str | None) -> tuple[int, int] | None:
    if not text:
        return None
    lo, hi = (int(x) for x in text.split(","))
    return lo, hi


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="input", required=True, help="input file ('-' for stdin)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--tie", choices=TIE_MODES, default="backward_then_first_listed")
    p.add_argument("--seed", type=int, help="seed for --tie seeded_random (default: $BALLOTWORKS_SEED or 0)")
    p.add_argument("--display-scale", type=int, default=2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ballotworks", description="Exact, auditable election counting.")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tally", help="count a candidate election")
    _common(t)
    t.add_argument("--method", choices=TALLY_METHODS, required=True)
    t.add_argument("--seats", type=int, help="seats to fill (default: from the ballot file)")
    t.add_argument("--marks", type=int, help="mark limit for limited vote")
    t.add_argument("--depth", type=int, help="approval: approve each voter's top N (default: every ranked candidate)")
    t.add_argument("--scheme", choices=("standard", "slovenian", "dowdall"), default="standard")
    t.add_argument("--strength", choices=("winning_votes", "margins"), default="winning_votes")
    t.add_argument("--quota", choices=tuple(QUOTAS), default="droop")
    t.add_argument("--max-prefs", type=int, help="contingent vote: preferences a ballot may express")
    t.add_argument("--score-range", help="range/mj: 'lo,hi'")
    t.add_argument("--budget", type=int, help="cumulative: points per ballot")
    t.add_argument("--cap", type=int, help="cumulative: points per candidate")

    a = sub.add_parser("apportion", help="allocate seats to parties")
    _common(a)
    a.add_argument("--method", choices=tuple(DIVISORS) + ("lr",), required=True)
    a.add_argument("--quota", choices=tuple(QUOTAS), default="hare")
    a.add_argument("--seats", type=int, required=True)
    a.add_argument("--threshold", type=Fraction, default=Fraction(0), help="fraction of the vote, e.g. 0.05")
    a.add_argument("--total-votes", type=Fraction, help="valid-vote total when the table omits parties")

    m = sub.add_parser("mixed", help="mixed-member proportional or parallel allocation")
    _common(m)
    m.add_argument("--mode", choices=("mmp", "parallel"), required=True)
    m.add_argument("--seats", type=int, required=True, help="house size (mmp) or list seats (parallel)")
    m.add_argument("--method", choices=tuple(DIVISORS) + ("lr",), default="dhondt")
    m.add_argument("--quota", choices=tuple(QUOTAS), default="hare")
    m.add_argument("--threshold", type=Fraction, default=Fraction(0))

    u = sub.add_parser("audit", help="test a method against a fairness criterion")
    u.add_argument("--criterion", choices=criteria.CRITERIA + ("may", "table"), required=True)
    u.add_argument("--method", help="method name; for 'may': majority|supermajority|constant-tie")
    u.add_argument("--in", dest="input", help="ranked ballot file (omit to use the built-in profile pool)")
    u.add_argument("--bounds", type=int, default=1)
    u.add_argument("--max-voters", type=int, default=8)
    u.add_argument("--workers", type=int, default=1)
    u.add_argument("--witness", help="write the witness of a violation here as JSON")
    u.add_argument("--out")

    c = sub.add_parser("convert", help="normalise a ballot file or party table, or render a saved result")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--from", dest="src", choices=("blt", "csv", "json"), required=True)
    c.add_argument("--to", dest="dst", choices=("blt", "csv", "table", "json"), required=True)
    c.add_argument("--out")
    c.add_argument("--display-scale", type=int, default=2)
    return parser


def _load_profile(args, method: str) -> tuple[Profile, int]:
    text = _read(args.input)
    if method in ("range", "mj"):
        rng = _range(args.score_range)
        if rng is None:
            raise ElectionError("--score-range is required for score ballots")
        return parse_score_table(text, "score", score_range=rng), args.seats or 1
    if method == "cumulative":
        return parse_score_table(text, "cumulative", budget=args.budget, cap=args.cap), args.seats or 1
    ef = parse_blt(text)
    return ef.profile, args.seats or ef.seats


def _tally(args, tie: TiePolicy) -> TallyResult | SeatAllocation:
    m = args.method
    if m == "pbv":
        return party_block_vote(parse_party_votes(_read(args.input)), args.seats or 1, tie)
    profile, seats = _load_profile(args, m)
    if m == "fptp":
        return sw.fptp(sw.first_preference_profile(profile), tie)
    if m == "approval":
        ballots = as_nominal(profile) if args.depth is None else sw.approval_from_ranking(profile, args.depth)
        return sw.approval(ballots, tie)
    if m == "irv":
        return sw.irv(profile, tie)
    if m == "coombs":
        return sw.coombs(profile, tie)
    if m == "contingent":
        return sw.contingent(profile, args.max_prefs, tie)
    if m == "two-round":
        return sw.two_round(profile, tie)
    if m == "exhaustive":
        return sw.exhaustive_simulated(profile, tie)
    if m == "borda":
        return sw.borda(profile, sw.BordaScheme(args.scheme), tie)
    if m == "black":
        return sw.black(profile, sw.BordaScheme(args.scheme), tie)
    if m == "range":
        return sw.range_voting(profile, tie)
    if m == "mj":
        return sw.majority_judgement(profile, tie)
    if m == "cumulative":
        return sw.cumulative(profile, seats=seats, tie=tie)
    if m == "smith-irv":
        return sw.smith_irv(profile, tie)
    if m == "schulze":
        return sw.schulze_tally(profile, args.strength, tie)
    if m == "stv":
        return mw.stv(profile, mw.StvConfig(seats, QUOTAS[args.quota], tie=tie, display_scale=args.display_scale))
    if m == "block":
        return mw.block_vote(as_nominal(profile), seats, tie=tie)
    if m == "sntv":
        return mw.sntv(sw.first_preference_profile(profile), seats, tie)
    if m == "limited":
        if args.marks is None:
            raise ElectionError("--marks is required for limited vote")
        return mw.limited_vote(as_nominal(profile), seats, args.marks, tie)
    raise AssertionError(m)


def _rule(args, tie: TiePolicy) -> ApportionmentRule:
    if args.method == "lr":
        return ApportionmentRule(None, QUOTAS[args.quota], args.threshold, tie)
    return ApportionmentRule(DivisorFamily(DIVISORS[args.method]), None, args.threshold, tie)


def _report(result, args, wasted=None) -> str:
    if args.format == "json":
        return serialize_result(result, wasted=wasted, display_scale=args.display_scale)
    if isinstance(result, SeatAllocation):
        return render_allocation(result, args.display_scale)
    return render_tally(result, args.display_scale)


def _may_method(name: str | None):
    name = (name or "majority").lower()
    if name in ("majority", "simple-majority"):
        return criteria.simple_majority
    if name in ("supermajority", "super-majority"):
        return criteria.super_majority(Fraction(3, 5))
    if name in ("constant-tie", "tie"):
        return criteria.constant_tie
    raise ElectionError(f"unknown two-candidate method {name!r}")


def _witness_doc(w: criteria.Witness) -> dict:
    def outcome(p, c):
        return None if c is None else p.name(c)
    doc = {"note": w.note, "before": format_blt(w.before) if w.before.kind == "ranked" else None,
           "winner_before": outcome(w.before, w.outcome_before),
           "behavior_before": list(w.behavior_before) if w.behavior_before is not None else None}
    if w.after is not None:
        doc.update({"after": format_blt(w.after) if w.after.kind == "ranked" else None,
                    "winner_after": outcome(w.after, w.outcome_after),
                    "behavior_after": list(w.behavior_after) if w.behavior_after is not None else None})
    return doc


def _audit(args) -> tuple[str, list[criteria.Verdict]]:
    if args.criterion == "may":
        verdicts = criteria.check_may_properties(_may_method(args.method), args.max_voters)
        return "\n".join(v.describe() for v in verdicts.values()) + "\n", [v for v in verdicts.values()]
    if args.criterion == "table":
        methods = [criteria.get_method(args.method).name] if args.method else list(criteria.STANDARD_METHODS)
        table = criteria.criteria_table(methods, workers=args.workers)
        return criteria.format_table(table) + "\n", [v for row in table.values() for v in row.values()]
    if not args.method:
        raise ElectionError("--method is required")
    bounds = criteria.SearchBounds(args.bounds, args.bounds, args.bounds, args.bounds)
    if args.input:
        seeds, pool = [parse_blt(_read(args.input)).profile], []
    else:
        seeds, pool = list(criteria.classic_profiles().values()), criteria.small_profile_pool()
    v = criteria.audit(args.method, args.criterion, seeds, pool, bounds)
    return v.describe() + "\n", [v]


def _convert(args) -> str:
    text = _read(args.input)
    if args.src == "blt":
        ef = parse_blt(text)
        if args.dst != "blt":
            raise ElectionError("a ballot file converts only to blt")
        return format_blt(ef.profile, ef.seats, ef.title, sorted(ef.withdrawn))
    if args.src == "csv":
        if args.dst != "csv":
            raise ElectionError("a party table converts only to csv")
        return format_party_votes(parse_party_votes(text))
    result = parse_result(text)
    if args.dst == "json":
        return serialize_result(result, display_scale=args.display_scale)
    if args.dst != "table":
        raise ElectionError("a saved result converts only to table or json")
    if isinstance(result, SeatAllocation):
        return render_allocation(result, args.display_scale)
    return render_tally(result, args.display_scale)


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "tally":
            tie = _tie(args)
            result = _tally(args, tie)
            _emit(_report(result, args), args.out)
        elif args.command == "apportion":
            tie = _tie(args)
            votes = parse_party_votes(_read(args.input))
            if args.method == "lr":
                result = largest_remainder(votes, args.seats, QUOTAS[args.quota], args.threshold, tie,
                                           total_votes=args.total_votes)
            else:
                result = highest_averages(votes, args.seats, DivisorFamily(DIVISORS[args.method]),
                                          args.threshold, tie)
            _emit(_report(result, args, criteria.wasted_votes(result).fraction), args.out)
        elif args.command == "mixed":
            tie = _tie(args)
            votes, won = parse_mixed_table(_read(args.input))
            inp = MixedInput(won, votes, _rule(args, tie))
            result = mmp(inp, args.seats) if args.mode == "mmp" else parallel(inp, args.seats)
            _emit(_report(result, args), args.out)
        elif args.command == "audit":
            text, verdicts = _audit(args)
            found = [v for v in verdicts if v.violated]
            if args.witness and found:
                Path(args.witness).write_text(json.dumps(_witness_doc(found[0].witness), indent=2, sort_keys=True)
                                              + "\n", encoding="utf-8")
            _emit(text, args.out)
        else:
            _emit(_convert(args), args.out)
    except TieUnresolved as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ElectionError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

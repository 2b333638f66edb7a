"""Exception hierarchy shared by every tally, parser and audit."""

from __future__ import annotations


class ElectionError(Exception):
    """Base class for all ballotworks errors."""


class BallotError(ElectionError, ValueError):
    """A ballot or profile fails validation."""


class EmptyRoster(BallotError):
    pass


class DuplicateCandidateInBallot(BallotError):
    pass


class UnknownCandidate(BallotError):
    pass


class OverBudget(BallotError):
    pass


class OverCap(BallotError):
    pass


class ScoreOutOfRange(BallotError):
    pass


class MarkLimitViolation(BallotError):
    pass


class NonFinalistMark(BallotError):
    pass


class MarkForEliminatedCandidate(BallotError):
    pass


class IncompleteRankingForCoombs(BallotError):
    pass


class WrongBallotKind(BallotError):
    pass


class InvalidQuota(ElectionError, ValueError):
    pass


class ZeroSeats(ElectionError, ValueError):
    pass


class SeatsExceedCandidates(ElectionError, ValueError):
    pass


class MoreExtrasThanParties(ElectionError):
    pass


class QuotaOverallocation(ElectionError):
    """Integer parts of the quotients already exceed the house size."""


class TieUnresolved(ElectionError):
    """Raised under the ``error`` tie policy when a decision depends on a tie."""

    def __init__(self, tied, context: str = ""):
        self.tied = tuple(tied)
        self.context = context
        msg = f"unresolved tie between {list(self.tied)}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class InputError(ElectionError, ValueError):
    """Malformed input file or table."""


class BallotSyntaxError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CandidateIndexOutOfRange(BallotSyntaxError):
    pass


class MissingTerminator(BallotSyntaxError):
    pass


class DuplicateParty(InputError):
    pass


class NegativeVotes(InputError):
    pass

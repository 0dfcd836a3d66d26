"""Exception hierarchy. Every error carries a stable ``code`` used by the CLI."""


class CircIsoError(Exception):
    code = "E_GENERIC"


class InputError(CircIsoError, ValueError):
    code = "E_INPUT"


class DivisorRequired(InputError):
    code = "E_DIVISOR_REQUIRED"


class DomainMismatch(InputError):
    code = "E_DOMAIN_MISMATCH"


class UnitRequired(InputError):
    code = "E_UNIT_REQUIRED"


class NotAFullCycle(InputError):
    code = "E_NOT_A_FULL_CYCLE"


class NotMember(CircIsoError):
    """Raised when a permutation is not in Wr(C); ``witness`` names the failing level/node."""

    code = "E_NOT_MEMBER"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotApplicable(InputError):
    code = "E_NOT_APPLICABLE"


class NotCayley(InputError):
    code = "E_NOT_CAYLEY"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(InputError):
    code = "E_PARSE"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MalformedHeader(ParseError):
    code = "E_MALFORMED_HEADER"


class IndexOutOfRange(ParseError):
    code = "E_INDEX_OUT_OF_RANGE"


class DuplicateTuple(ParseError):
    code = "E_DUPLICATE_TUPLE"


class ArityMismatch(ParseError):
    code = "E_ARITY_MISMATCH"


class LimitExceeded(CircIsoError):
    """Base for budget/limit failures (CLI exit code 3)."""

    code = "E_LIMIT"

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress or {}


class EnumerationTooLarge(LimitExceeded):
    code = "E_ENUMERATION_TOO_LARGE"


class BudgetExceeded(LimitExceeded):
    code = "E_BUDGET_EXCEEDED"


class UniverseTooLarge(LimitExceeded):
    code = "E_UNIVERSE_TOO_LARGE"


class TimeLimitExceeded(LimitExceeded):
    code = "E_TIME_LIMIT"


class BranchLimitExceeded(LimitExceeded):
    code = "E_BRANCH_LIMIT"

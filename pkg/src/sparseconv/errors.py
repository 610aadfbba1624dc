"""Exception hierarchy.

Every error carries a short ``code`` string so the command line front end
can report it uniformly.
"""


class SparseConvError(Exception):
    code = "ERROR"


class EmptyPatternError(SparseConvError, ValueError):
    code = "EMPTY_PATTERN"


class DomainMismatchError(SparseConvError, ValueError):
    code = "DOMAIN_MISMATCH"


class OracleTooLargeError(SparseConvError, ValueError):
    code = "ORACLE_TOO_LARGE"


class InfeasibleInstanceError(SparseConvError, ValueError):
    code = "INFEASIBLE_INSTANCE"


class ParseError(SparseConvError, ValueError):
    code = "PARSE_ERROR"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FieldMismatchError(SparseConvError, ValueError):
    code = "FIELD_MISMATCH"


class NoNTTPrimeError(SparseConvError, ArithmeticError):
    code = "NO_NTT_PRIME"


class TransformOverflowError(SparseConvError, OverflowError):
    code = "OVERFLOW"


class LengthMismatchError(SparseConvError, ValueError):
    code = "LENGTH_MISMATCH"


class ReductionTooLargeError(SparseConvError, ValueError):
    code = "REDUCTION_TOO_LARGE"


class DomainTooLargeError(SparseConvError, ValueError):
    code = "DOMAIN_TOO_LARGE_FOR_POLY"


class AssignmentPoolExhaustedError(SparseConvError, ValueError):
    code = "ASSIGNMENT_POOL_EXHAUSTED"


class StaleTableError(SparseConvError, ValueError):
    code = "STALE_TABLE"


class PoolTooSmallError(SparseConvError, ValueError):
    code = "POOL_TOO_SMALL"

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound

"""Exception hierarchy.

Every error raised by the library derives from :class:`LtiError`.  The CLI
maps :class:`DomainError` to exit code 3 and :class:`NumericError` to exit
code 4; :class:`ParseError` maps to exit code 2.
"""


class LtiError(Exception):
    pass


class ParseError(LtiError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DomainError(LtiError):
    """Input is well-formed but violates a mathematical precondition."""


class NumericError(LtiError):
    """A floating point computation could not be completed reliably."""


class DimensionMismatch(DomainError):
    pass


class ShapeMismatch(DimensionMismatch):
    pass


class SignalDimensionMismatch(DimensionMismatch):
    pass


class NotSquare(DomainError):
    pass


class NotScalar(DomainError):
    pass


class ZeroMatrix(DomainError):
    pass


class RankDeficient(DomainError):
    def __init__(self, actual_rank, expected_rank):
        super().__init__(
            f"kernel has normal rank {actual_rank}, expected full row rank "
            f"{expected_rank}; use kernel_reduce to obtain an equivalent "
            "full-rank representation")
        self.actual_rank = actual_rank
        self.expected_rank = expected_rank


class NotUnimodular(DomainError):
    pass


class NotComplementary(DomainError):
    pass


class UnstableKernel(DomainError):
    def __init__(self, roots):
        roots = list(roots)
        worst = max(abs(r) for r in roots) if roots else float("nan")
        super().__init__(
            f"determinant has roots on or outside the unit circle "
            f"(max modulus {worst:.6g})")
        self.roots = roots


class CircleRoot(UnstableKernel):
    pass


class LeadingCoefficientSingular(DomainError):
    pass


class WindowTooShort(DomainError):
    pass


class NotParahermitian(DomainError):
    pass


class NotCoercive(DomainError):
    pass


class RootOnCircle(DomainError):
    pass


class SegmentTooLong(DomainError):
    pass


class GridMismatch(DomainError):
    pass


class SingularFactor(NumericError):
    pass


class EvaluationSingular(NumericError):
    pass


class FactorizationError(NumericError):
    pass

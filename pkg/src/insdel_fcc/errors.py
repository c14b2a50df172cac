"""Exception types shared across the package.

The CLI maps these onto exit codes: invalid input -> 2, size cap -> 3,
defect (a claim that failed verification) -> 1.
"""


class InvalidInputError(ValueError):
    """Malformed word, matrix, radius or parameter."""


class SizeLimitError(RuntimeError):
    """An exhaustive computation was asked to run beyond its size guard."""


class DefectError(RuntimeError):
    """A construction or bound-backed step failed its own verification.

    ``report`` carries the structured evidence (usually a
    :class:`~insdel_fcc.fcidc.VerificationReport`).
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report

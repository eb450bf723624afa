"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`EqkError`,
which carries a short machine-readable ``kind`` used by the CLI.
"""


class EqkError(Exception):
    kind = "Error"

    def to_dict(self):
        return {"kind": self.kind, "message": str(self)}


class ParseError(EqkError, ValueError):
    kind = "ParseError"


class OrderCapExceeded(EqkError):
    kind = "OrderCapExceeded"


class BudgetExceeded(EqkError):
    kind = "BudgetExceeded"


class SubgroupMismatch(EqkError):
    kind = "SubgroupMismatch"


class NotAGraph(EqkError):
    kind = "NotAGraph"


class FreenessViolated(EqkError):
    kind = "FreenessViolated"


class NotNormal(EqkError):
    kind = "NotNormal"


class NotInFamily(EqkError):
    kind = "NotInFamily"


class LevelOutOfRange(EqkError):
    kind = "LevelOutOfRange"


class ObjectMismatch(EqkError):
    kind = "ObjectMismatch"


class UniverseMismatch(EqkError):
    kind = "UniverseMismatch"


class NotGStable(EqkError):
    kind = "NotGStable"


class WindowExceeded(EqkError):
    kind = "WindowExceeded"


class TransferNotAdmissible(EqkError):
    kind = "TransferNotAdmissible"


class ConsistencyError(EqkError, AssertionError):
    """An internal invariant failed; always a bug, never bad input."""

    kind = "ConsistencyError"

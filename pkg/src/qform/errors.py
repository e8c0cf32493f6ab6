"""Exception hierarchy shared by the whole package.

Every failure that a caller can meaningfully react to gets its own class;
the CLI maps them onto distinct exit codes.
"""


class QformError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(QformError):
    """Matrix or vector dimensions do not line up."""


class NotWellDefined(QformError):
    """A map does not respect the relations of its source or target."""


class NotASummand(QformError):
    """A subgroup that was required to be a direct summand is not one."""


class NoSolution(QformError):
    """An exact linear system has no integral solution."""


class HypothesisError(QformError):
    """A stated hypothesis of an operation fails.

    ``condition`` names the failing requirement so callers (and the CLI)
    can report it without parsing the message.
    """

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class VMissing(HypothesisError):
    """An operation needed the quadratic refinement v but none is attached."""

    def __init__(self, detail: str = ""):
        super().__init__("v missing", detail)


class NodeLimitExceeded(QformError):
    """A bounded search ran out of its node budget."""


class SchemaError(QformError):
    """A JSON document does not match the expected schema.

    ``path`` locates the offending field, e.g. ``"form.lambda[2][0]"``.
    """

    def __init__(self, path: str, detail: str):
        self.path = path
        super().__init__(f"{path}: {detail}")

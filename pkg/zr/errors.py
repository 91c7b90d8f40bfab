"""Exception hierarchy shared by all zahr modules.

Every error belongs to one of three families, and the CLI maps each family
to its own exit code (see ``zahr.py``).
"""


class ZahrError(Exception):
    """Base class of all errors raised by zahr."""


class InputError(ZahrError, ValueError):
    """The caller passed data that violates a precondition."""


class DegenerateInput(InputError):
    """Fewer than two distinct values, so no regression line exists."""


class BudgetViolation(InputError):
    """A poison allocation uses more than the budget."""


class IndexOutOfRange(InputError):
    """A key index lies outside the range allowed by the operation."""


class InvalidBracket(InputError):
    """The value bracket of the bisection solver does not contain the optimum."""


class NoFeasiblePoison(InputError):
    """No poison can be placed, e.g. the interior is fully occupied."""


class DegenerateSample(InputError):
    """A synthetic sample collapsed to fewer than two distinct keys."""


class KeyNotFound(InputError):
    """A lookup query is not stored in the searched array."""


class SearchSpaceTooLarge(ZahrError):
    """An exhaustive enumeration would exceed the caller's candidate cap."""

    def __init__(self, count: int, limit: int) -> None:
        super().__init__(f"search space of {count} candidates exceeds the limit of {limit}")
        self.count = count
        self.limit = limit


class DataFileError(ZahrError, OSError):
    """A key file cannot be used."""


class FileTooSmall(DataFileError):
    """The key file holds fewer keys than requested."""


class MalformedFile(DataFileError):
    """The key file does not follow its format."""

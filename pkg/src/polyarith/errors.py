"""Exception types shared across the package.

The command line front end maps these onto process exit codes:
malformed input documents exit 1, violated mathematical preconditions
exit 2, internal consistency failures exit 3.
"""


class SchemaError(ValueError):
    """Malformed input document.  `path` is a JSON pointer to the bad field."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class PreconditionError(ValueError):
    """Input is well formed but violates a documented mathematical precondition."""


class InternalError(RuntimeError):
    """A consistency check that can only fail on a library bug."""

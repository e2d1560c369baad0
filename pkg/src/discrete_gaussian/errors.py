"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes, so every raise site in the library uses one
of the classes below rather than a bare ``ValueError``.
"""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole of a meromorphic function."""


class PreconditionError(DomainError):
    """A theorem hypothesis (e.g. lattice span, variance condition) fails."""


class DegenerateError(DomainError):
    """The input is degenerate (single-point support, trivial torus, ...)."""


class ResourceError(RuntimeError):
    """A size cap was exceeded."""


class ValidationError(DomainError):
    """Malformed or inconsistent input data (graph files, pmf files)."""

class ParameterError(ValueError):
    """Invalid model or sampler parameters."""


class DomainError(ValueError):
    """Operation undefined on the given input (e.g. an empty sequence)."""


class SizeError(RuntimeError):
    """Work would exceed a configured size guard."""


class FitError(ValueError):
    """A power-law fit could not be produced."""


class ParseError(ValueError):
    """Malformed input file."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class EmptyGraphError(ValueError):
    """A graph with no edges where at least one edge is required."""

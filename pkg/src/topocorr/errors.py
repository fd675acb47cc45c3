"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Bad run configuration or unparseable metric spec; CLI exit code 2."""


class ParseError(ValueError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalFailure(RuntimeError):
    """Numerical routine left its validity envelope; CLI exit code 3."""

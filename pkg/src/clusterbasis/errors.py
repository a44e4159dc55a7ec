class InputError(ValueError):
    """Malformed or unsupported input (CLI exit code 1)."""


class ValidationError(ValueError):
    """Input parses but fails a mathematical precondition (CLI exit code 2)."""

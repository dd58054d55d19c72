class ParseError(ValueError):
    """Malformed input text. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RingMismatch(ValueError):
    pass


class CircuitError(ValueError):
    """A circuit or branching program failed validation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class SLPError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """An oracle computation would exceed its size budget."""

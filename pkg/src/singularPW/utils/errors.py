class MeasureError(ValueError):
    """Raised when a measure violates its invariants."""


class RefinementCapError(MeasureError):
    """
    Raised when an IFS refinement would produce more atoms than allowed.

    Args:
        required (int): Number of atoms the refinement needs.
        cap (int): Configured atom cap.
    """

    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(
            f"refinement needs {required} atoms but the cap is {cap}; "
            f"raise the cap to at least {required} or lower the depth"
        )


class OrderError(ValueError):
    """Raised when a truncation order exceeds the available coefficients or samples."""


class TruncationError(ValueError):
    """Raised when a power series is too short to be trusted at a requested radius."""


class InputFormatError(ValueError):
    """
    Raised for malformed measure JSON or CSV input.

    Args:
        path (str): Offending file.
        message (str): What went wrong.
        line (int | None): 1-based line number, when the error is line-local.
    """

    def __init__(self, path: str, message: str, line: int | None = None):
        self.path = path
        self.line = line
        location = f"{path}:{line}" if line is not None else f"{path}"
        super().__init__(f"{location}: {message}")

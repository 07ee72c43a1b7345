"""Error types shared across the package.

Domain errors (bad forms, bad arguments) and resource-guard errors are kept
distinct so the CLI can map them to different exit codes.
"""


class DomainError(ValueError):
    """Invalid input: malformed form, out-of-range argument, wrong box."""


class InvalidFormError(DomainError):
    """Form violates a structural requirement (zero linear form, a7 = 0, ...)."""


class DegenerateBlockError(DomainError):
    """A block collapses to fewer than three variables; no normal form exists."""

    def __init__(self, block_index: int, message: str = ""):
        self.block_index = block_index
        super().__init__(message or f"block {block_index} is degenerate")


class ResourceLimitError(RuntimeError):
    """A size guard tripped before the computation was attempted."""

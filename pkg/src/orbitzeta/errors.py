"""Error taxonomy shared by the library and the command line tool.

Exit codes: 0 success, 2 validation, 3 budget, 4 internal inconsistency.
"""


class ToolError(Exception):
    exit_code = 1


class ValidationError(ToolError):
    """Malformed input or a domain precondition violated by the caller."""

    exit_code = 2


class BudgetError(ToolError):
    """A configured resource limit would be exceeded; names the limit."""

    exit_code = 3

    def __init__(self, budget_name: str, needed, limit):
        self.budget_name = budget_name
        self.needed = needed
        self.limit = limit
        super().__init__(f"budget {budget_name!r} exceeded: need {needed}, limit {limit}")


class InternalInconsistencyError(ToolError):
    """Two routes that must agree did not; always a bug or a broken invariant."""

    exit_code = 4

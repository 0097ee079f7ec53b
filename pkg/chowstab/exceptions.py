class ChowStabError(Exception):
    pass


class InputError(ChowStabError, ValueError):
    """Raised for unusable input: bad geometry, malformed files or arguments."""


class InvariantError(ChowStabError):
    """
    Raised when an exact self-check fails

    These are never expected; seeing one means a geometry, counting or LP
    bug, so the CLI exits with its own code and reports to Sentry.
    """


class IterationLimitExceeded(ChowStabError):
    def __init__(self, lower, upper, iterations):
        self.lower = lower
        self.upper = upper
        self.iterations = iterations

        super().__init__(
            f"no exact optimum after {iterations} cutting planes: "
            f"{lower} <= min J <= {upper}"
        )

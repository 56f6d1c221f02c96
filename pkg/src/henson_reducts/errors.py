class BudgetExceeded(RuntimeError):
    """An exhaustive search hit its configured size or work cap."""


class WitnessConstructionError(RuntimeError):
    """A certificate construction that should succeed did not.

    This signals either an edge case the case analysis does not cover or an
    implementation bug; it is never converted into a different verdict.
    """

class DomainError(ValueError):
    """Input outside the domain of an operation."""


class DegenerateError(DomainError):
    """Collinear or otherwise degenerate geometric configuration.

    ``index`` locates the offending edge, vertex or sample when known.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CollinearError(DegenerateError):
    pass


class NumericalError(RuntimeError):
    """Quadrature, integration or root finding failed to meet its tolerance."""

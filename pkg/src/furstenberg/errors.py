"""Exception types raised across the package."""


class FurstenbergError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDenominatorError(FurstenbergError, ValueError):
    pass


class NotInvariantError(FurstenbergError, ValueError):
    """A measure lacks the ×(2,3)-invariance an operation requires."""


class UnsupportedVariantError(FurstenbergError, TypeError):
    """The operation is undefined for this measure variant (e.g. Lebesgue)."""


class DomainError(FurstenbergError, ValueError):
    """A point or parameter lies outside the open unit disk / interval."""


class InvalidWindowError(FurstenbergError, ValueError):
    pass


class InsufficientNodesError(FurstenbergError, ValueError):
    pass


class BoundInapplicableError(FurstenbergError, ValueError):
    pass


class InvalidInputError(FurstenbergError, ValueError):
    pass


class NotAlmostInvariantError(FurstenbergError, ValueError):
    """Induction gave transversal-dependent values."""


class MeasureSpecError(FurstenbergError, ValueError):
    """A measure specification string could not be parsed."""


class ConfigError(FurstenbergError, ValueError):
    pass


class NotErgodicError(FurstenbergError, ValueError):
    pass

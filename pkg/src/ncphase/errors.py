"""Exception types shared across the engine."""


class NCPhaseError(Exception):
    """Base class for all engine errors."""


class IncompatibleSeriesError(NCPhaseError):
    """Operands live over different spaces, banks or parameter tables."""


class CompositionError(NCPhaseError):
    """Substituted series has a nonzero constant term, or banks do not line up."""


class ReversionError(NCPhaseError):
    """Series cannot be reverted (linear part is not the identity map)."""


class XDegreeCapError(NCPhaseError):
    """An operator product exceeded the configured coordinate-degree cap."""


class DecompositionError(NCPhaseError):
    """A commutator does not decompose in the expected coordinate-linear shape."""


class ExprSyntaxError(NCPhaseError):
    """Parse failure in the expression language; carries line/column info."""

    def __init__(self, message, line, col):
        super().__init__("%d:%d: %s" % (line, col, message))
        self.line = line
        self.col = col


class ExprLoweringError(NCPhaseError):
    """Expression is syntactically fine but cannot be lowered in this context."""


class ModelConfigError(NCPhaseError):
    """Malformed model configuration file."""

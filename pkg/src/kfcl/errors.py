"""Exception hierarchy shared by all kfcl modules."""


class KfclError(Exception):
    """Base class for every error raised by this package."""


class OutOfPosetError(KfclError, ValueError):
    """A degenerate pattern ([0], [+1], [-1]) was passed where a poset element is required."""


class IndexMismatchError(KfclError, ValueError):
    """Two objects that must share an index set (cover names, coordinate set R) do not."""


class NotRealizableError(KfclError, ValueError):
    """The sample does not contain both a + and a - entry."""


class InvariantViolation(KfclError, RuntimeError):
    """An internal invariant that is a theorem failed to hold. Always a bug."""


class CoverInvalidError(KfclError, ValueError):
    """The cover is malformed or not antipodal-free."""


class UnsupportedGeometryError(KfclError, ValueError):
    """The requested operation is only defined for cap-union sets."""


class EpsilonTooLargeError(KfclError, ValueError):
    def __init__(self, name, message=None):
        self.name = name
        super().__init__(message or f"epsilon too large: both {name} and -{name} are within epsilon")


class SizeGuardError(KfclError, ValueError):
    """Exact search refused because the instance exceeds the configured size guard."""


class ConfigError(KfclError, ValueError):
    """Experiment configuration could not be parsed or is incomplete."""

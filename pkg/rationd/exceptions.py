""""Exceptions for rationd"""


class RationdError(Exception):
    """Base class for rationd errors"""


class ContractViolation(RationdError, ValueError):
    """A caller broke an operation's precondition"""


class NegativeCycleError(RationdError):
    """Residual graph holds a negative-cost cycle reachable from the source"""


class OracleBudgetExceeded(RationdError):
    """Exact enumeration refused: instance too large for the configured budget"""


class ConfigurationError(RationdError):
    """Options incompatible with the instance or an invalid generator config"""


class DocumentError(RationdError):
    """Malformed instance, allocation or config document"""


class SchemaVersionError(DocumentError):
    """Document written with an unsupported schema version"""


class WrongFileExtension(RationdError):
    """Wrong file extension"""

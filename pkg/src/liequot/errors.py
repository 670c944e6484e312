"""Exception hierarchy shared by every module."""


class LiequotError(Exception):
    pass


class ConfigurationError(LiequotError, ValueError):
    """Bad or unsupported configuration (series, rank, affine data)."""


class CapabilityError(ConfigurationError):
    """Request outside the supported capability envelope."""


class DomainError(LiequotError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegeneratePointError(DomainError):
    """Reduction requested at a point where the action is not locally free."""


class PreconditionError(DomainError):
    pass

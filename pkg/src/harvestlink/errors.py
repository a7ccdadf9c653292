"""Exception types raised across the package."""


class HarvestLinkError(ValueError):
    """Base class for all package errors."""


class NonpositiveNoise(HarvestLinkError):
    pass


class InfeasibleStorage(HarvestLinkError):
    """Requested stored power exceeds what the downlink can deliver."""


class DomainError(HarvestLinkError):
    pass


class InvalidInterval(HarvestLinkError):
    pass


class NoSignChange(HarvestLinkError):
    pass


class InvalidLambda(HarvestLinkError):
    pass


class RateInfeasible(HarvestLinkError):
    """Rate target lies outside the achievable region."""


class SplitInfeasible(HarvestLinkError):
    pass


class TargetInfeasible(HarvestLinkError):
    pass


class InvalidFraction(HarvestLinkError):
    pass


class NonpositiveSlots(HarvestLinkError):
    pass


class ConfigError(HarvestLinkError):
    pass

"""Exception hierarchy shared by all evidentia modules."""


class EvidentiaError(Exception):
    """Base class for every error raised by the library."""


class ParameterError(EvidentiaError, ValueError):
    """A law or model was given invalid parameters."""


class DomainError(EvidentiaError, ValueError):
    """A density or distribution function was queried outside its support."""


class DegenerateLawError(EvidentiaError, ValueError):
    """A covariance matrix or anchor vector is singular."""


class EstimationError(EvidentiaError, ValueError):
    """An empirical estimate cannot be formed from the given sample."""


class ConfigurationError(EvidentiaError, ValueError):
    """An experiment or configuration file is inconsistent or incomplete."""

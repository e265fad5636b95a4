"""Exception hierarchy shared across the package."""


class QdnoiseError(Exception):
    """Base class for all package errors."""


class ConfigError(QdnoiseError):
    """Invalid or inconsistent experiment configuration (CLI exit code 2)."""


class NumericsError(QdnoiseError):
    """Quadrature or linear-algebra failure with diagnostics (CLI exit code 3)."""


class EvolutionError(NumericsError):
    """Integrator failure or trajectory sanity-monitor breach."""

"""Exception hierarchy for the workbench.

Every error raised on purpose by this package derives from QcfdError so
callers (and the CLI) can separate our failures from programming bugs.
"""


class QcfdError(Exception):
    """Base class for all package errors."""


class ConfigError(QcfdError):
    """Invalid configuration value, file, or command-line override."""


class IoFormatError(QcfdError):
    """Malformed input file (matrix, vector, or config text)."""


class SolverError(QcfdError):
    """A numerical procedure failed (divergence, degenerate input, ...)."""


class DivergenceError(SolverError):
    """The outer iteration blew up past the runaway guard."""


class PatternMismatchError(SolverError):
    """A matrix was paired with a template built for a different pattern."""


class ResourceLimitError(SolverError):
    """A request exceeds a deliberate size cap (e.g. full-scan decomposition)."""

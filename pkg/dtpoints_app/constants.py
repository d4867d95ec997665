"""
Constants and configuration values for the dtpoints application.

This module contains the constant values used throughout the package,
including configuration keys, default tolerances, verification suite names
and output formats.
"""

# Application naming
APP_NAME = "dtpoints"
APP_VERSION = "0.3.0"

# Environment variable that relocates the per-user data directory
APP_HOME_ENV = "DTPOINTS_HOME"


class ConfigSections:
    """Top-level sections for persisted configuration."""

    GLOBAL = "global"
    TOLERANCES = "tolerances"
    LIMITS = "limits"


class ConfigKeys:
    """String keys for persisted configuration."""

    JOBS = "jobs"
    FORMAT = "format"
    DEBUG = "debug"
    SUM_TOL = "sum_tol"
    SADDLE_RTOL = "saddle_rtol"
    SANDWICH_SLACK = "sandwich_slack"
    MAX_TERMS = "max_terms"
    ORACLE_BUDGET = "oracle_budget"


class OutputFormats:
    """Machine-readable output formats."""

    JSON = "json"
    CSV = "csv"


ALL_OUTPUT_FORMATS = [OutputFormats.JSON, OutputFormats.CSV]


class VerifySuites:
    """Names of the identity suites exposed by ``dtpoints verify``."""

    FACTORIZATION = "factorization"
    WALLCROSS = "wallcross"
    PLETHYSTIC = "plethystic"
    EULER = "euler"
    ENUMERATION = "enumeration"
    QPOLY = "qpoly"
    FEITFINE = "feitfine"
    TELESCOPING = "telescoping"


ALL_VERIFY_SUITES = [
    VerifySuites.FACTORIZATION,
    VerifySuites.WALLCROSS,
    VerifySuites.PLETHYSTIC,
    VerifySuites.EULER,
    VerifySuites.ENUMERATION,
    VerifySuites.QPOLY,
    VerifySuites.FEITFINE,
    VerifySuites.TELESCOPING,
]


class DistributionSources:
    """Where ``planepart.distribution`` takes its polynomial from."""

    ENUM = "enum"
    MPOLY = "mpoly"


class ExitCodes:
    """Process exit codes of the command-line front end."""

    OK = 0
    MISMATCH = 1
    USAGE = 2


# Default global settings
DEFAULT_JOBS = 1
DEFAULT_FORMAT = OutputFormats.JSON

# Numeric defaults for the asymptotic module
DEFAULT_SUM_TOL = 1e-12
DEFAULT_SADDLE_RTOL = 1e-12
DEFAULT_SANDWICH_SLACK = 1e-6
DEFAULT_MAX_TERMS = 10**7

# Brute-force oracles refuse to enumerate more matrix pairs than this
DEFAULT_ORACLE_BUDGET = 2**20

# Bracket factors around the leading-order saddle seed
SADDLE_BRACKET = (0.25, 4.0)

# Feit-Fine points checked by ``verify feitfine``: (matrix size, field order)
FEIT_FINE_POINTS = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)]

# Column order of the CSV sweep written by ``dtpoints saddle``
SADDLE_CSV_COLUMNS = [
    "n",
    "r",
    "rho",
    "mu_n",
    "sigma2_n",
    "ks_distance",
    "log_qn_exact",
    "log_qn_approx",
]

DIST_CSV_COLUMNS = ["r", "n", "s_value", "count"]

DT_CSV_COLUMNS = ["n", "t_exponent", "coefficient"]

import os
from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: str):
    """Integer environment setting, or None when it does not parse"""
    try:
        return int(os.getenv(name, default))
    except ValueError:
        return None


class Config:
    """Configuration class for runtime settings and numerical constants"""

    # Environment
    THREADS = _env_int("HQL_THREADS", "1")
    LOG_LEVEL = os.getenv("HQL_LOG_LEVEL", "INFO")
    LOG_FILE = os.getenv("HQL_LOG_FILE")
    DEFAULT_SEED = _env_int("HQL_SEED", "20240611")

    # Run config files
    CONFIG_SCHEMA_VERSION = 1

    # Newton solver
    NEWTON_MAX_ITERATIONS = 50
    NEWTON_TOLERANCE_FACTOR = 1e-10  # residual sup-norm <= factor * (1 + rhs)
    LINE_SEARCH_MAX_HALVINGS = 40
    LINE_SEARCH_DECREASE = 0.9
    ADMISSIBILITY_MARGIN = 1e-12
    CONTINUATION_STEPS = 4

    # Property suites
    GAMMA2_SAMPLE_LOW = -1.0
    GAMMA2_SAMPLE_HIGH = 3.0
    FD_RELATIVE_STEP = 1e-5

    # Exit codes
    EXIT_OK = 0
    EXIT_CHECK_FAILED = 1
    EXIT_USAGE = 2
    EXIT_DOMAIN = 3
    EXIT_SOLVER = 4

    @classmethod
    def validate(cls):
        """Validate environment-derived settings"""
        problems = []
        if cls.THREADS is None or cls.THREADS < 1:
            problems.append("HQL_THREADS must be a positive integer")
        if cls.DEFAULT_SEED is None or cls.DEFAULT_SEED < 0:
            problems.append("HQL_SEED must be a non-negative integer")
        if cls.LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            problems.append(f"HQL_LOG_LEVEL has unknown level {cls.LOG_LEVEL!r}")

        if problems:
            raise ValueError(f"Invalid environment configuration: {'; '.join(problems)}")

        return True

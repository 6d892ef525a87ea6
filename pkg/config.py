import os
from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
# Empty = console only. Set a path to also write a rotating log file.
LOG_FILE = os.getenv("LOG_FILE", "")


def _parse_float(val: str | None, default: float) -> float:
    if val is None or not str(val).strip():
        return default
    try:
        return float(str(val).strip())
    except ValueError:
        return default


def _parse_positive_int(val: str | None, default: int) -> int:
    if val is None or not str(val).strip():
        return default
    try:
        parsed = int(str(val).strip())
    except ValueError:
        return default
    return parsed if parsed > 0 else default


def _parse_non_negative_int(val: str | None, default: int) -> int:
    if val is None or not str(val).strip():
        return default
    try:
        parsed = int(str(val).strip())
    except ValueError:
        return default
    return parsed if parsed >= 0 else default


# Simplex solver
LP_PIVOT_TOL = _parse_float(os.getenv("LP_PIVOT_TOL"), 1e-9)
LP_FEASIBILITY_TOL = _parse_float(os.getenv("LP_FEASIBILITY_TOL"), 1e-8)
# Bland's rule takes over after this many consecutive degenerate pivots.
LP_BLAND_STREAK = _parse_positive_int(os.getenv("LP_BLAND_STREAK"), 1)
# Pivots between rebuilds of the tableau from the original rows.
LP_REFACTOR_EVERY = _parse_positive_int(os.getenv("LP_REFACTOR_EVERY"), 50)
# Solve through the dual when rows >= ratio * columns (0 disables).
LP_DUALIZE_RATIO = _parse_float(os.getenv("LP_DUALIZE_RATIO"), 3.0)
LP_MAX_ITERATIONS_FACTOR = _parse_positive_int(os.getenv("LP_MAX_ITERATIONS_FACTOR"), 50)

# Bound pipeline defaults: D = factor * max(v), N = factor * D + 1
BOUND_DEGREE_FACTOR = _parse_positive_int(os.getenv("BOUND_DEGREE_FACTOR"), 2)
BOUND_SAMPLE_FACTOR = _parse_positive_int(os.getenv("BOUND_SAMPLE_FACTOR"), 8)
BOUND_EXCHANGE_ROUNDS = _parse_non_negative_int(os.getenv("BOUND_EXCHANGE_ROUNDS"), 4)
BOUND_EXCHANGE_DENSITY = _parse_positive_int(os.getenv("BOUND_EXCHANGE_DENSITY"), 16)

# Certification
CERT_SLACK_REL = _parse_float(os.getenv("CERT_SLACK_REL"), 1e-9)
CERT_MAX_POINTS = _parse_positive_int(os.getenv("CERT_MAX_POINTS"), 4_000_000)
CERT_MIN_NORMALIZATION = _parse_float(os.getenv("CERT_MIN_NORMALIZATION"), 1e-6)

# Scan defaults
SCAN_N = _parse_positive_int(os.getenv("SCAN_N"), 6)
SCAN_MAX_SPEED = _parse_positive_int(os.getenv("SCAN_MAX_SPEED"), 50)
SCAN_COUNT = _parse_positive_int(os.getenv("SCAN_COUNT"), 200)
SCAN_SEED = _parse_non_negative_int(os.getenv("SCAN_SEED"), 1)
SCAN_THREADS = _parse_positive_int(os.getenv("SCAN_THREADS"), 1)
# Constraint-exchange rounds per bound inside a scan.
SCAN_EXCHANGE_ROUNDS = _parse_non_negative_int(os.getenv("SCAN_EXCHANGE_ROUNDS"), 1)

FIGURE_VLINE = _parse_float(os.getenv("FIGURE_VLINE"), 1.0 / 6.0)
TEMPLATE_DIR = os.getenv(
    "TEMPLATE_DIR",
    os.path.join(os.path.dirname(os.path.abspath(__file__)), "config", "templates"),
)

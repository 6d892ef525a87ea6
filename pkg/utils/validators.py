import re
from math import comb

_SEPARATORS = re.compile(r"[\s,;]+")


def parse_speed_list(raw):
    """Parse "1,2,3" (commas, semicolons or spaces) into a list of ints.

    Ordering and positivity are checked by SpeedVector; this only rejects
    tokens that are not integers.
    """
    if not raw or not isinstance(raw, str):
        raise ValueError("speed list is empty")
    tokens = [t for t in _SEPARATORS.split(raw.strip()) if t]
    if not tokens:
        raise ValueError("speed list is empty")
    speeds = []
    for token in tokens:
        if not re.fullmatch(r"[+-]?\d+", token):
            raise ValueError(f"speed '{token}' is not an integer")
        speeds.append(int(token))
    return speeds


def validate_scan_range(n, max_speed, count=None, exhaustive=False):
    """Check scan parameters: n runners means n-1 distinct speeds in 1..max_speed."""
    if n < 2:
        raise ValueError(f"--n must be at least 2 (got {n})")
    if max_speed < n - 1:
        raise ValueError(f"--max-speed {max_speed} cannot hold {n - 1} distinct speeds")
    if exhaustive:
        return
    if count is None or count < 1:
        raise ValueError("--count must be positive")
    available = comb(max_speed, n - 1)
    if count > available:
        raise ValueError(f"--count {count} exceeds the {available} distinct vectors in range")

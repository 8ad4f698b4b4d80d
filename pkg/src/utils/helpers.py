"""Helper functions for divsmooth input and output."""

import math
from typing import Any, Optional

import numpy as np

from src.errors import InputError
from src.prob_core import ProbVec, point_mass, uniform, validate

LN2 = math.log(2.0)


def format_number(x: float) -> Any:
    """12 significant digits; infinities become "inf"/"-inf"."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")


def format_csv_number(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "INF" if x > 0 else "-INF"
    return f"{x:.12g}"


def parse_number(raw: Any) -> float:
    """Inverse of format_number, also accepting the CSV spellings."""
    if isinstance(raw, (int, float)):
        return float(raw)
    text = str(raw).strip().lower()
    if text in ("inf", "+inf", "infinity", "∞"):
        return math.inf
    if text in ("-inf", "-infinity"):
        return -math.inf
    try:
        return float(text)
    except ValueError:
        raise InputError(f"cannot parse number '{raw}'")


def to_base(x: float, base: str) -> float:
    """Convert a value in bits to the requested log base ("2" or "e")."""
    if base == "2":
        return x
    if base == "e":
        return x * LN2
    raise InputError(f"unsupported log base '{base}'")


def encode(obj: Any) -> Any:
    """Recursively format numbers for a JSON document."""
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return format_number(obj)
    return obj


def parse_vector(raw: Any, dim: Optional[int] = None) -> ProbVec:
    """
    Parse a vector literal.

    Args:
        raw: Comma-separated decimals, a list of numbers, or one of the
            keywords "uniform" and "e1"
        dim: Dimension for the keywords

    Returns:
        The validated probability vector
    """
    if isinstance(raw, str):
        text = raw.strip().lower()
        if text in ("uniform", "e1"):
            if dim is None or dim < 1:
                raise InputError(f"'{text}' needs a positive --dim")
            return uniform(dim) if text == "uniform" else point_mass(dim)
        try:
            values = [parse_number(part) for part in text.split(",") if part.strip()]
        except InputError:
            raise InputError(f"cannot parse vector '{raw}'")
    elif isinstance(raw, (list, tuple)):
        values = [parse_number(v) for v in raw]
    else:
        raise InputError(f"cannot parse vector {raw!r}")
    return validate(values)

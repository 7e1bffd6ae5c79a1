"""Exact scalar values used throughout: nonnegative rationals plus infinity.

Finite quantities (capacities, cut values, rate bounds) are
:class:`fractions.Fraction`; the single infinite sentinel is ``math.inf``,
which orders above every rational and absorbs addition, exactly the
semantics needed for capacity arithmetic.  Entropies are ordinary floats
and are snapped to rationals only at the LP boundary.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf

#: Denominator used when snapping float-valued bounds to exact rationals.
SNAP_DENOMINATOR = 10**12


def is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def parse_scalar(value, *, allow_inf: bool = True):
    """Parse a capacity/bound value from a document field.

    Accepts an ``int``, a rational string (``"1"``, ``"3/2"``, ``"0.25"``)
    or ``"inf"``.  JSON floats are rejected: exact inputs must be written
    as strings so nothing is silently rounded.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a numeric value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ("inf", "infinity"):
            if not allow_inf:
                raise ValueError("infinite value not allowed here")
            return INF
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational value: {value!r}") from exc
    if isinstance(value, float):
        raise ValueError(
            f"float {value!r} is not exact; write it as a rational string like \"1/4\""
        )
    raise ValueError(f"not a numeric value: {value!r}")


def parse_probability(value):
    """Parse a pmf entry: JSON number, or exact rational string."""
    if isinstance(value, bool):
        raise ValueError(f"not a probability: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational value: {value!r}") from exc
    raise ValueError(f"not a probability: {value!r}")


def snap_to_rational(x, denominator: int = SNAP_DENOMINATOR) -> Fraction:
    """Round a float onto the grid of multiples of 1/denominator.

    Exact inputs (Fraction/int) pass through unchanged.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if is_inf(x):
        raise ValueError("cannot snap infinity to a rational")
    return Fraction(round(x * denominator), denominator)


def format_scalar(x) -> str:
    """Render a value for tables and structured documents.

    Rationals print exactly (``"3/2"``); floats print to 9 significant
    digits; infinity prints ``"inf"``.
    """
    if is_inf(x):
        return "inf"
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return f"{float(x):.9g}"


def as_float(x) -> float:
    return float(x)

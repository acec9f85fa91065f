"""Unit-suffixed quantities for the command line.  The library works in um and rad."""
from __future__ import annotations

import math
import re

from .errors import ParseError

LENGTH_UNITS = {"nm": 1e-3, "um": 1.0, "µm": 1.0, "mm": 1e3, "cm": 1e4, "m": 1e6}
_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"


def _split(text: str) -> tuple[str, str]:
    m = re.fullmatch(rf"\s*({_NUMBER})?\s*([^\d\s.+-][^\s]*)?\s*", text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ParseError(f"cannot parse quantity {text!r}")
    return m.group(1) or "", m.group(2) or ""


def parse_length(text: str) -> float:
    """'63cm' -> 630000.0 (um).  A bare number is taken in um."""
    num, unit = _split(str(text))
    if not num:
        raise ParseError(f"length {text!r} has no number")
    if unit and unit not in LENGTH_UNITS:
        raise ParseError(f"unknown length unit {unit!r} in {text!r}")
    return float(num) * LENGTH_UNITS.get(unit, 1.0)


def parse_angle(text: str) -> float:
    """'90deg', '1.2rad', 'pi/2', '4pi', '0.25pi' -> radians.  A bare number is radians."""
    s = str(text).strip().replace(" ", "")
    m = re.fullmatch(rf"({_NUMBER})?\*?pi(?:/({_NUMBER}))?", s)
    if m:
        coeff = float(m.group(1)) if m.group(1) else 1.0
        div = float(m.group(2)) if m.group(2) else 1.0
        if div == 0:
            raise ParseError(f"division by zero in {text!r}")
        return coeff * math.pi / div
    if s in ("-pi", "+pi"):
        return math.copysign(math.pi, -1.0 if s[0] == "-" else 1.0)
    num, unit = _split(s)
    if not num:
        raise ParseError(f"angle {text!r} has no number")
    if unit in ("", "rad"):
        return float(num)
    if unit in ("deg", "°"):
        return math.radians(float(num))
    raise ParseError(f"unknown angle unit {unit!r} in {text!r}")


def parse_float(text: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ParseError(f"not a number: {text!r}") from None


def parse_multiple(text: str, unit_name: str, unit_value: float, fallback) -> float:
    """'2L0' -> 2 * unit_value; anything else goes to ``fallback``."""
    s = str(text).strip()
    if s.endswith(unit_name):
        head = s[: -len(unit_name)].rstrip("*")
        coeff = 1.0 if head in ("", "+") else (-1.0 if head == "-" else parse_float(head))
        return coeff * unit_value
    return fallback(s)

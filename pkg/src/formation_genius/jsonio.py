"""Deterministic JSON rendering for result artifacts.

Floats are rounded to 9 significant digits before dumping so identical
inputs always produce byte-identical output files, regardless of where
the numbers came from.
"""

from __future__ import annotations

import json
from typing import Any


def round_floats(value: Any):
    """Recursively coerce every float to 9 significant digits."""
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(format(value, ".9g"))
    if isinstance(value, dict):
        return {k: round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v) for v in value]
    return value


def canonical_json(doc: Any) -> str:
    """Stable rendering: rounded floats, insertion-ordered keys, newline end."""
    return json.dumps(round_floats(doc), indent=2, allow_nan=False) + "\n"


def canonical_line(doc: Any) -> str:
    """Single-line rendering for event logs (JSON Lines)."""
    return json.dumps(round_floats(doc), separators=(",", ":"), allow_nan=False)

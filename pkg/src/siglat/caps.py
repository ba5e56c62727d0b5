"""Process-wide analysis caps.

The order cap defaults to ``$SIGLAT_MAX_ORDER`` when set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

DEFAULT_MAX_ORDER = 2000
DEFAULT_MAX_SUBGROUPS = 20000
DEFAULT_MAX_AUT_ORDER = 128


@dataclass(frozen=True)
class Caps:
    max_order: int = DEFAULT_MAX_ORDER
    max_subgroups: int = DEFAULT_MAX_SUBGROUPS
    max_aut_order: int = DEFAULT_MAX_AUT_ORDER


def _from_env() -> Caps:
    raw = os.environ.get("SIGLAT_MAX_ORDER")
    if raw:
        return Caps(max_order=int(raw))
    return Caps()


_current = _from_env()


def current() -> Caps:
    return _current


def set_caps(**overrides) -> Caps:
    """Replace selected caps; ``None`` values are ignored."""
    global _current
    _current = replace(_current, **{k: v for k, v in overrides.items() if v is not None})
    return _current


def reset() -> Caps:
    global _current
    _current = _from_env()
    return _current

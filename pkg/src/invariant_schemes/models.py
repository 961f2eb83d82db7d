"""Model and scheme tags."""

from __future__ import annotations

from enum import Enum


class Model(str, Enum):
    HEAT_LOG = "heat"
    SPHERICAL_BURGERS = "burgers"

    @classmethod
    def parse(cls, value) -> Model:
        if isinstance(value, cls):
            return value
        aliases = {"heat_log": cls.HEAT_LOG, "spherical_burgers": cls.SPHERICAL_BURGERS}
        key = str(value).strip().lower()
        return aliases.get(key) or cls(key)


class SchemeKind(str, Enum):
    STANDARD = "standard"
    PARTIALLY_INVARIANT = "partial"
    FULLY_INVARIANT = "full"

    @classmethod
    def parse(cls, value) -> SchemeKind:
        if isinstance(value, cls):
            return value
        aliases = {"partially_invariant": cls.PARTIALLY_INVARIANT, "fully_invariant": cls.FULLY_INVARIANT}
        key = str(value).strip().lower()
        return aliases.get(key) or cls(key)

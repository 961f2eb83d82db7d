"""Exception hierarchy shared by the numerical modules and the harness."""

from __future__ import annotations


class SchemeError(Exception):
    """Base class for numerical failures.

    ``level`` is filled in by :func:`invariant_schemes.schemes.evolve` when the
    failure happens during a time step, so callers can report where a run died.
    """

    level: int | None = None

    def __str__(self) -> str:
        msg = super().__str__()
        if self.level is not None:
            return f"{msg} (at time level {self.level})"
        return msg


class IncompleteStencilError(SchemeError, KeyError):
    """A stencil is missing an offset that the consumer needs."""

    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__(f"incomplete stencil: missing offsets {list(self.missing)}")

    # KeyError.__str__ would wrap the message in quotes
    __str__ = SchemeError.__str__


class DegenerateStencilError(SchemeError, ValueError):
    """Coincident or collinear stencil points make a derivative undefined."""

    def __init__(self, message: str, conditioning: float | None = None):
        self.conditioning = conditioning
        if conditioning is not None:
            message = f"{message} (relative determinant {conditioning:.3e})"
        super().__init__(message)


class DomainError(SchemeError, ValueError):
    """Input outside the domain of a formula (log of u <= 0, t <= 0, ...)."""


class MisuseError(SchemeError, ValueError):
    """A scheme was called on a level it is not defined for."""


class MeshCollapseError(SchemeError):
    """Adjacent nodes crossed or coincided after a mesh update."""

    def __init__(self, pairs, message: str = "mesh tangling detected"):
        self.pairs = [tuple(p) for p in pairs]
        shown = self.pairs[:5]
        more = "" if len(self.pairs) <= 5 else f" and {len(self.pairs) - 5} more"
        super().__init__(f"{message} at index pairs {shown}{more}")


class ConfigError(ValueError):
    """Invalid experiment configuration."""

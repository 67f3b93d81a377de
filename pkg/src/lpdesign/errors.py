"""Exception hierarchy shared by all subsystems."""

from __future__ import annotations


class LpdesignError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(LpdesignError):
    """A document or settings block violates its invariants.

    Carries the offending :class:`~lpdesign.model.Violation` records so
    callers (service, CLI) can report field paths.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{v.path}: {v.message}" for v in self.violations))


class GeometryError(LpdesignError):
    """Geometric precondition violated (degenerate ring, unequal z, ...)."""


class DomainError(LpdesignError):
    """Input outside the validity domain of the zone formulas."""


class RefError(LpdesignError):
    """A command payload references an id that does not resolve."""


class KindError(LpdesignError):
    """Operation applied to an object kind that does not support it."""


class RenderError(ValidationError):
    """Rendering refused because the project does not validate."""


class NotFoundError(LpdesignError):
    """Requested object (section, project) does not exist."""


class NoTerminalsError(LpdesignError):
    """Relief requested for a project without terminals."""


class SaveRefused(ValidationError):
    """Refusing to persist an invalid project."""


class VersionError(LpdesignError):
    """Project file format version not supported."""


class ParseError(LpdesignError):
    """Project file is not well-formed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class IntegrityError(ValidationError):
    """A parsed project file fails referential or geometric validation."""

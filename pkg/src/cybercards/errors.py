"""Exception hierarchy shared by the content, engine, simulator and server layers."""

from __future__ import annotations


class CybercardsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CybercardsError):
    """A document could not be parsed at all (bad JSON, bad encoding)."""


class SchemaError(CybercardsError):
    """A document parsed but does not match the expected schema."""

    def __init__(self, message: str, path: str = "") -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ValidationError(CybercardsError):
    """A structurally well-formed document breaks a content invariant.

    Carries the full list of violations so callers can report them all.
    """

    def __init__(self, violations) -> None:
        self.violations = list(violations)
        lines = "; ".join(f"{v.code} at {v.path}: {v.message}" for v in self.violations)
        super().__init__(lines or "validation failed")


class PackRulesetMismatch(CybercardsError):
    """The content pack cannot support the requested ruleset."""


class ConfigError(CybercardsError):
    """A game or simulation configuration is out of range or inconsistent."""


class NotYourTurn(CybercardsError):
    """A move was submitted by a seat other than the current one."""


class WrongPhase(CybercardsError):
    """A move type that does not belong to the state's current phase."""


class IllegalMove(CybercardsError):
    """A move that violates a play rule; ``rule_code`` names the violated rule."""

    def __init__(self, rule_code: str, message: str = "") -> None:
        super().__init__(f"{rule_code}: {message}" if message else rule_code)
        self.rule_code = rule_code


class EmptyMoveSet(CybercardsError):
    """A policy was asked to choose from an empty move list."""


class VersionError(CybercardsError):
    """A serialized document carries an unsupported schema version."""


class ReplayMismatch(CybercardsError):
    """Replaying a transcript did not reproduce its recorded final state."""

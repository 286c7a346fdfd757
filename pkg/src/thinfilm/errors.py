# -*- coding: utf-8 -*-

"""Exceptions raised across the thinfilm package."""

from typing import Any, Optional


class ThinFilmError(Exception):
    """Base class for all thinfilm errors."""


class DomainError(ThinFilmError, ValueError):
    """A value lies outside the domain where a formula is defined."""


class ParameterError(DomainError):
    """A model parameter violates its invariants."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f'{field}: {message}')
        self.field = field


class ConfigError(ThinFilmError, ValueError):
    """A configuration document could not be parsed or validated."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None) -> None:
        location = f'line {line}: ' if line is not None else ''
        label = f'{key}: ' if key is not None else ''
        super().__init__(f'{location}{label}{message}')
        self.key = key
        self.line = line


class PreconditionError(ThinFilmError, ValueError):
    """An audit or experiment was requested outside its preconditions."""


class NotApplicableError(PreconditionError):
    """An iteration lemma does not apply to the given inputs."""


class FitError(ThinFilmError, ValueError):
    """A fit could not be carried out on the available data."""


class StepFailure(ThinFilmError, RuntimeError):
    """The time integrator could not complete a step.

    The partial trajectory (and, for experiments, the partial verdict) are attached when available.
    """

    def __init__(self, message: str, residual: float, time: float = 0.0) -> None:
        super().__init__(message)
        self.residual = residual
        self.time = time
        self.trajectory: Optional[Any] = None
        self.verdict: Optional[Any] = None

from __future__ import annotations

from typing import Any, Optional


class SimulationError(Exception):
    """Root of every error raised by the simulator."""


class DomainError(SimulationError, ValueError):
    pass


class ContractViolation(SimulationError, ValueError):
    pass


class ConfigError(SimulationError, ValueError):
    def __init__(self, message: str, field: Optional[str] = None) -> None:
        self.field = field
        if field and field not in message:
            message = f"{field}: {message}"
        super().__init__(message)
        self._message = message

    def __reduce__(self) -> tuple[Any, ...]:
        return (type(self), (self._message, self.field))


class TraceParseError(SimulationError, ValueError):
    def __init__(self, message: str, line: int) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}")
        self._message = message

    def __reduce__(self) -> tuple[Any, ...]:
        return (type(self), (self._message, self.line))


class SimulatorBug(SimulationError, RuntimeError):
    """Internal inconsistency; the run is aborted with a diagnostic."""

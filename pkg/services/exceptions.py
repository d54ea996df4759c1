"""Error types raised by the services."""

from typing import Optional


class MoskAllocError(Exception):
    """Base class for every error this project raises on purpose."""


class ThermodynamicDomainError(MoskAllocError, ValueError):
    """Energy or molecule move outside the physically valid region."""


class DegenerateDistributionError(MoskAllocError, ValueError):
    """Normal approximation undefined because a reservoir is pure (sigma = 0)."""


class InfeasibleAllocationError(MoskAllocError):
    """No allocation satisfies the budget and BER-threshold constraints."""


class ConfigError(MoskAllocError):
    """Invalid experiment config, anchored to a file and line when known."""

    def __init__(self, message: str, source: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.source = source
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.source and self.line:
            return f"{self.source}:{self.line}: {self.message}"
        if self.source:
            return f"{self.source}: {self.message}"
        return self.message

from services.exceptions import (
    MoskAllocError,
    ThermodynamicDomainError,
    DegenerateDistributionError,
    InfeasibleAllocationError,
    ConfigError
)
from services.config_loader import ConfigLoader
from services.experiment_service import ExperimentService

__all__ = [
    'MoskAllocError',
    'ThermodynamicDomainError',
    'DegenerateDistributionError',
    'InfeasibleAllocationError',
    'ConfigError',
    'ConfigLoader',
    'ExperimentService'
]

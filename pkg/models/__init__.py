from models.environment import Environment
from models.transmitter_config import TransmitterConfig
from models.reservoir_fractions import ReservoirFractions
from models.selection_stats import SelectionStats
from models.ber_report import BerReport
from models.reservoir_state import IntegerReservoirState
from models.trial_outcome import TrialOutcome
from models.optimization_problem import OptimizationProblem
from models.allocation import Allocation
from models.ga_settings import GaSettings
from models.experiment_config import ExperimentConfig, SweepSpec, SeriesSpec

__all__ = [
    'Environment',
    'TransmitterConfig',
    'ReservoirFractions',
    'SelectionStats',
    'BerReport',
    'IntegerReservoirState',
    'TrialOutcome',
    'OptimizationProblem',
    'Allocation',
    'GaSettings',
    'ExperimentConfig',
    'SweepSpec',
    'SeriesSpec'
]

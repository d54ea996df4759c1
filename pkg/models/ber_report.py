"""Bit error rate report entity class."""

from typing import Optional


class BerReport:
    """Conditional correct-decision probabilities and the resulting per-user BER."""

    def __init__(self, p_correct_0: float, p_correct_1: float, ber: float,
                 halfwidth_0: Optional[float] = None,
                 halfwidth_1: Optional[float] = None,
                 halfwidth_ber: Optional[float] = None,
                 n_trials: Optional[int] = None):
        """
        Initialize a BerReport instance.

        Analytic reports leave the confidence fields empty; Monte Carlo
        reports carry 99% half-widths and the trial count.

        Args:
            p_correct_0: P(Y=0 | X=0)
            p_correct_1: P(Y=1 | X=1)
            ber: Per-user bit error rate
            halfwidth_0: Confidence half-width of p_correct_0
            halfwidth_1: Confidence half-width of p_correct_1
            halfwidth_ber: Confidence half-width of ber
            n_trials: Number of simulated trials
        """
        self.__p_correct_0 = float(p_correct_0)
        self.__p_correct_1 = float(p_correct_1)
        self.__ber = float(ber)
        self.__halfwidth_0 = halfwidth_0
        self.__halfwidth_1 = halfwidth_1
        self.__halfwidth_ber = halfwidth_ber
        self.__n_trials = n_trials

    def get_p_correct_0(self) -> float:
        """Get P(Y=0 | X=0)."""
        return self.__p_correct_0

    def get_p_correct_1(self) -> float:
        """Get P(Y=1 | X=1)."""
        return self.__p_correct_1

    def get_ber(self) -> float:
        """Get per-user bit error rate."""
        return self.__ber

    def get_halfwidth_0(self) -> Optional[float]:
        return self.__halfwidth_0

    def get_halfwidth_1(self) -> Optional[float]:
        return self.__halfwidth_1

    def get_halfwidth_ber(self) -> Optional[float]:
        return self.__halfwidth_ber

    def get_n_trials(self) -> Optional[int]:
        return self.__n_trials

    def is_empirical(self) -> bool:
        """True for Monte Carlo reports."""
        return self.__n_trials is not None

    def to_dict(self) -> dict:
        """Convert report to dictionary."""
        return {
            'p_correct_0': self.__p_correct_0,
            'p_correct_1': self.__p_correct_1,
            'ber': self.__ber,
            'halfwidth_0': self.__halfwidth_0,
            'halfwidth_1': self.__halfwidth_1,
            'halfwidth_ber': self.__halfwidth_ber,
            'n_trials': self.__n_trials
        }

    def __str__(self) -> str:
        """String representation of report."""
        text = (
            f"BER {self.__ber:.6e} (P00={self.__p_correct_0:.6f}, "
            f"P11={self.__p_correct_1:.6f})"
        )
        if self.is_empirical():
            text += f" +/- {self.__halfwidth_ber:.2e} over {self.__n_trials} trials"
        return text

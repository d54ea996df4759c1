"""Post-purification reservoir state."""

from typing import Tuple


class ReservoirFractions:
    """Mole fractions of k2 after moving molecules, with Taylor diagnostics."""

    def __init__(self, c_low: float, c_high: float, moved: float,
                 alpha: float, beta: float, psi: float):
        """
        Initialize a ReservoirFractions instance.

        Args:
            c_low: Mole fraction of k2 in the low reservoir after the move
            c_high: Mole fraction of k2 in the high reservoir after the move
            moved: Molecules moved m (real valued)
            alpha: 2m / n_k
            beta: 2m / (c_init * n_k)
            psi: c_init / (k_B * T * n_low), per joule
        """
        self.__c_low = float(c_low)
        self.__c_high = float(c_high)
        self.__moved = float(moved)
        self.__alpha = float(alpha)
        self.__beta = float(beta)
        self.__psi = float(psi)

    def get_c_low(self) -> float:
        return self.__c_low

    def get_c_high(self) -> float:
        return self.__c_high

    def get_moved(self) -> float:
        return self.__moved

    def get_alpha(self) -> float:
        return self.__alpha

    def get_beta(self) -> float:
        return self.__beta

    def get_psi(self) -> float:
        return self.__psi

    def get_spread(self) -> float:
        """Gap between the two reservoirs, c_high - c_low."""
        return self.__c_high - self.__c_low

    def validate(self) -> Tuple[bool, str]:
        """Check 0 <= c_low <= c_high <= 1 and 0 <= beta < 1."""
        if not 0.0 <= self.__c_low <= self.__c_high <= 1.0:
            return False, "Mole fractions must satisfy 0 <= c_low <= c_high <= 1"
        if not 0.0 <= self.__beta < 1.0:
            return False, "beta must lie in [0, 1)"
        return True, "Fractions are valid"

    def to_dict(self) -> dict:
        """Convert fractions to dictionary."""
        return {
            'c_low': self.__c_low,
            'c_high': self.__c_high,
            'moved': self.__moved,
            'alpha': self.__alpha,
            'beta': self.__beta,
            'psi': self.__psi
        }

    def __str__(self) -> str:
        return (
            f"Fractions(c_low={self.__c_low:.6f}, c_high={self.__c_high:.6f}, "
            f"m={self.__moved:.4g}, beta={self.__beta:.3e})"
        )

"""Energy allocation entity class."""

from typing import List


class Allocation:
    """Per-user energy assignment against a total budget, with its BER."""

    def __init__(self, energies: List[float], rho: List[float],
                 per_user_ber: List[float], total_ber: float):
        """
        Initialize an Allocation instance.

        Args:
            energies: Energy given to each user (J)
            rho: Allocation fractions energies / e_total
            per_user_ber: BER of each user at its energy
            total_ber: Sum of per-user BER
        """
        self.__energies = [float(e) for e in energies]
        self.__rho = [float(r) for r in rho]
        self.__per_user_ber = [float(b) for b in per_user_ber]
        self.__total_ber = float(total_ber)

    def get_energies(self) -> List[float]:
        """Get per-user energies."""
        return list(self.__energies)

    def get_rho(self) -> List[float]:
        """Get allocation fractions."""
        return list(self.__rho)

    def get_per_user_ber(self) -> List[float]:
        """Get per-user BER."""
        return list(self.__per_user_ber)

    def get_total_ber(self) -> float:
        """Get objective value."""
        return self.__total_ber

    def get_user_count(self) -> int:
        return len(self.__energies)

    def to_dict(self) -> dict:
        """Convert allocation to dictionary."""
        return {
            'energies': list(self.__energies),
            'rho': list(self.__rho),
            'per_user_ber': list(self.__per_user_ber),
            'total_ber': self.__total_ber
        }

    def __str__(self) -> str:
        """String representation of allocation."""
        shares = ", ".join(f"{r:.4f}" for r in self.__rho)
        return f"Allocation(rho=[{shares}], total BER={self.__total_ber:.6e})"

"""Environment entity class holding the physical constants."""

from typing import Tuple

BOLTZMANN_CONSTANT = 1.3807e-23  # J/K
ROOM_TEMPERATURE = 298.15  # K


class Environment:
    """Physical constants shared by every transmitter in an experiment."""

    def __init__(self, boltzmann_constant: float = BOLTZMANN_CONSTANT,
                 temperature: float = ROOM_TEMPERATURE):
        """
        Initialize an Environment instance.

        Args:
            boltzmann_constant: Boltzmann's constant in joule per kelvin
            temperature: Absolute temperature in kelvin
        """
        self.__boltzmann_constant = float(boltzmann_constant)
        self.__temperature = float(temperature)

    def get_boltzmann_constant(self) -> float:
        """Get Boltzmann's constant (J/K)."""
        return self.__boltzmann_constant

    def get_temperature(self) -> float:
        """Get absolute temperature (K)."""
        return self.__temperature

    def thermal_energy(self) -> float:
        """Return k_B * T in joules."""
        return self.__boltzmann_constant * self.__temperature

    def validate(self) -> Tuple[bool, str]:
        """
        Check the physical constants.

        Returns:
            tuple: (is_valid: bool, error_message: str)
        """
        if not self.__boltzmann_constant > 0:
            return False, "Boltzmann constant must be positive"
        if not self.__temperature > 0:
            return False, "Temperature must be positive"
        return True, "Environment is valid"

    def to_dict(self) -> dict:
        """Convert environment to dictionary."""
        return {
            'boltzmann_constant': self.__boltzmann_constant,
            'temperature': self.__temperature
        }

    def __str__(self) -> str:
        """String representation of environment."""
        return f"Environment(k={self.__boltzmann_constant:g} J/K, T={self.__temperature:g} K)"

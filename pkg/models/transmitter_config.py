"""Transmitter configuration entity class."""

from typing import Tuple


class TransmitterConfig:
    """Reservoir sizes, initial mole fraction and release size of one user."""

    def __init__(self, n_low: int, n_high: int, c_init: float, n_release: int):
        """
        Initialize a TransmitterConfig instance.

        Args:
            n_low: Molecule count in the low reservoir
            n_high: Molecule count in the high reservoir
            c_init: Initial mole fraction of species k2 in both reservoirs
            n_release: Molecules released per bit (N_m, odd)
        """
        self.__n_low = int(n_low)
        self.__n_high = int(n_high)
        self.__c_init = float(c_init)
        self.__n_release = int(n_release)

    def get_n_low(self) -> int:
        """Get low reservoir size."""
        return self.__n_low

    def get_n_high(self) -> int:
        """Get high reservoir size."""
        return self.__n_high

    def get_n_total(self) -> int:
        """Get total molecule count n_k = n_low + n_high."""
        return self.__n_low + self.__n_high

    def get_c_init(self) -> float:
        """Get initial mole fraction of k2."""
        return self.__c_init

    def get_n_release(self) -> int:
        """Get number of released molecules per bit."""
        return self.__n_release

    def is_symmetric(self) -> bool:
        """True when both reservoirs hold the same number of molecules."""
        return self.__n_low == self.__n_high

    def with_n_release(self, n_release: int) -> 'TransmitterConfig':
        """Return a copy with a different release size."""
        return TransmitterConfig(self.__n_low, self.__n_high, self.__c_init, n_release)

    def with_reservoirs(self, n_low: int, n_high: int) -> 'TransmitterConfig':
        """Return a copy with different reservoir sizes."""
        return TransmitterConfig(n_low, n_high, self.__c_init, self.__n_release)

    def validate(self) -> Tuple[bool, str]:
        """
        Validate the configuration invariants.

        Returns:
            tuple: (is_valid: bool, error_message: str)
        """
        if self.__n_low < 1 or self.__n_high < 1:
            return False, "Reservoirs must hold at least one molecule"

        if not 0 < self.__c_init < 1:
            return False, "Initial mole fraction must lie strictly between 0 and 1"

        if self.__n_release < 1:
            return False, "At least one molecule must be released per bit"

        if self.__n_release > min(self.__n_low, self.__n_high):
            return False, "Release size cannot exceed the smaller reservoir"

        if self.__n_release % 2 == 0:
            return False, "Release size must be odd"

        return True, "Transmitter config is valid"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransmitterConfig):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash((self.__n_low, self.__n_high, self.__c_init, self.__n_release))

    def to_dict(self) -> dict:
        """Convert config to dictionary."""
        return {
            'n_low': self.__n_low,
            'n_high': self.__n_high,
            'c_init': self.__c_init,
            'n_release': self.__n_release
        }

    def __str__(self) -> str:
        """String representation of the transmitter."""
        return (
            f"Transmitter(n_low={self.__n_low:.4g}, n_high={self.__n_high:.4g}, "
            f"c={self.__c_init:g}, N_m={self.__n_release})"
        )

"""Integer reservoir state used by the exact oracles."""

from typing import Tuple

from models.transmitter_config import TransmitterConfig


class IntegerReservoirState:
    """Whole-molecule counts of k1 and k2 in both reservoirs."""

    def __init__(self, k2_low: int, k1_low: int, k2_high: int, k1_high: int):
        """
        Initialize an IntegerReservoirState instance.

        Args:
            k2_low: k2 molecules in the low reservoir
            k1_low: k1 molecules in the low reservoir
            k2_high: k2 molecules in the high reservoir
            k1_high: k1 molecules in the high reservoir
        """
        self.__k2_low = int(k2_low)
        self.__k1_low = int(k1_low)
        self.__k2_high = int(k2_high)
        self.__k1_high = int(k1_high)

    def get_k2_low(self) -> int:
        return self.__k2_low

    def get_k1_low(self) -> int:
        return self.__k1_low

    def get_k2_high(self) -> int:
        return self.__k2_high

    def get_k1_high(self) -> int:
        return self.__k1_high

    def get_n_low(self) -> int:
        """Total molecules in the low reservoir."""
        return self.__k1_low + self.__k2_low

    def get_n_high(self) -> int:
        """Total molecules in the high reservoir."""
        return self.__k1_high + self.__k2_high

    def validate(self, cfg: TransmitterConfig = None) -> Tuple[bool, str]:
        """
        Check non-negativity and, if a config is given, the reservoir sizes
        and k2 conservation against the unpurified state.

        Args:
            cfg: Transmitter the state was built from (optional)

        Returns:
            tuple: (is_valid: bool, error_message: str)
        """
        counts = (self.__k2_low, self.__k1_low, self.__k2_high, self.__k1_high)
        if any(count < 0 for count in counts):
            return False, "Molecule counts must be non-negative"

        if cfg is None:
            return True, "State is valid"

        if self.get_n_low() != cfg.get_n_low() or self.get_n_high() != cfg.get_n_high():
            return False, "Reservoir totals do not match the transmitter config"

        expected_k2 = (round(cfg.get_c_init() * cfg.get_n_low())
                       + round(cfg.get_c_init() * cfg.get_n_high()))
        if self.__k2_low + self.__k2_high != expected_k2:
            return False, "k2 molecules are not conserved"

        return True, "State is valid"

    def to_dict(self) -> dict:
        return {
            'k2_low': self.__k2_low,
            'k1_low': self.__k1_low,
            'k2_high': self.__k2_high,
            'k1_high': self.__k1_high
        }

    def __str__(self) -> str:
        return (
            f"State(low: k1={self.__k1_low}, k2={self.__k2_low}; "
            f"high: k1={self.__k1_high}, k2={self.__k2_high})"
        )

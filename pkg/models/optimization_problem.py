"""Energy allocation problem entity class."""

from typing import List, Tuple

from models.environment import Environment
from models.transmitter_config import TransmitterConfig


class OptimizationProblem:
    """K transmitters sharing one free-energy budget."""

    def __init__(self, users: List[TransmitterConfig], env: Environment,
                 e_total: float, ber_threshold: float = 1.0):
        """
        Initialize an OptimizationProblem instance.

        Args:
            users: Ordered transmitter configs (K >= 2)
            env: Physical constants
            e_total: Total energy budget in joules
            ber_threshold: Per-user BER cap (1.0 leaves it inactive)
        """
        self.__users = list(users)
        self.__env = env
        self.__e_total = float(e_total)
        self.__ber_threshold = float(ber_threshold)

    def get_users(self) -> List[TransmitterConfig]:
        """Get a copy of the user list."""
        return list(self.__users)

    def get_user(self, index: int) -> TransmitterConfig:
        return self.__users[index]

    def get_user_count(self) -> int:
        """Get K."""
        return len(self.__users)

    def get_env(self) -> Environment:
        return self.__env

    def get_e_total(self) -> float:
        return self.__e_total

    def get_ber_threshold(self) -> float:
        return self.__ber_threshold

    def with_users(self, users: List[TransmitterConfig]) -> 'OptimizationProblem':
        """Return a copy with another user list (e.g. permuted)."""
        return OptimizationProblem(users, self.__env, self.__e_total, self.__ber_threshold)

    def validate(self) -> Tuple[bool, str]:
        """
        Validate the problem and every user in it.

        Returns:
            tuple: (is_valid: bool, error_message: str)
        """
        if len(self.__users) < 2:
            return False, "At least two users are required"

        if not self.__e_total > 0:
            return False, "Energy budget must be positive"

        if not 0 < self.__ber_threshold <= 1:
            return False, "BER threshold must lie in (0, 1]"

        is_valid, error_msg = self.__env.validate()
        if not is_valid:
            return False, error_msg

        for index, user in enumerate(self.__users, start=1):
            is_valid, error_msg = user.validate()
            if not is_valid:
                return False, f"User {index}: {error_msg}"

        return True, "Problem is valid"

    def to_dict(self) -> dict:
        return {
            'users': [user.to_dict() for user in self.__users],
            'env': self.__env.to_dict(),
            'e_total': self.__e_total,
            'ber_threshold': self.__ber_threshold
        }

    def __str__(self) -> str:
        return (
            f"Problem(K={len(self.__users)}, E_total={self.__e_total:g} J, "
            f"threshold={self.__ber_threshold:g})"
        )

"""Genetic algorithm settings entity class."""

from typing import Tuple


class GaSettings:
    """Knobs of the real-coded genetic algorithm."""

    def __init__(self, population_size: int = 50, generations: int = 200,
                 crossover_rate: float = 0.8, mutation_sigma: float = 0.05,
                 mutation_rate: float = 0.1, elite_count: int = 2,
                 tournament_size: int = 3, seed: int = 0,
                 stagnation_window: int = 30, penalty_weight: float = 1e3):
        """
        Initialize a GaSettings instance.

        Args:
            population_size: Chromosomes per generation
            generations: Generation cap
            crossover_rate: Probability that a child is produced by crossover
            mutation_sigma: Std dev of additive Gaussian mutation (fraction space)
            mutation_rate: Per-gene mutation probability
            elite_count: Best individuals copied unchanged to the next generation
            tournament_size: Contestants per tournament
            seed: Root seed of every random stream
            stagnation_window: Generations without improvement before stopping
            penalty_weight: Weight of BER-threshold violations in the fitness
        """
        self.__population_size = int(population_size)
        self.__generations = int(generations)
        self.__crossover_rate = float(crossover_rate)
        self.__mutation_sigma = float(mutation_sigma)
        self.__mutation_rate = float(mutation_rate)
        self.__elite_count = int(elite_count)
        self.__tournament_size = int(tournament_size)
        self.__seed = int(seed)
        self.__stagnation_window = int(stagnation_window)
        self.__penalty_weight = float(penalty_weight)

    def get_population_size(self) -> int:
        return self.__population_size

    def get_generations(self) -> int:
        return self.__generations

    def get_crossover_rate(self) -> float:
        return self.__crossover_rate

    def get_mutation_sigma(self) -> float:
        return self.__mutation_sigma

    def get_mutation_rate(self) -> float:
        return self.__mutation_rate

    def get_elite_count(self) -> int:
        return self.__elite_count

    def get_tournament_size(self) -> int:
        return self.__tournament_size

    def get_seed(self) -> int:
        return self.__seed

    def get_stagnation_window(self) -> int:
        return self.__stagnation_window

    def get_penalty_weight(self) -> float:
        return self.__penalty_weight

    def with_seed(self, seed: int) -> 'GaSettings':
        """Return a copy with another seed."""
        values = self.to_dict()
        values['seed'] = seed
        return GaSettings(**values)

    def validate(self) -> Tuple[bool, str]:
        """
        Validate the settings.

        Returns:
            tuple: (is_valid: bool, error_message: str)
        """
        if self.__population_size < 4:
            return False, "Population size must be at least 4"
        if self.__generations < 1:
            return False, "At least one generation is required"
        if not 0 <= self.__elite_count < self.__population_size:
            return False, "Elite count must be below the population size"
        if not 1 <= self.__tournament_size <= self.__population_size:
            return False, "Tournament size must lie in [1, population size]"
        for name, rate in (("Crossover rate", self.__crossover_rate),
                           ("Mutation rate", self.__mutation_rate)):
            if not 0 <= rate <= 1:
                return False, f"{name} must lie in [0, 1]"
        if self.__mutation_sigma < 0:
            return False, "Mutation sigma must be non-negative"
        if self.__stagnation_window < 1:
            return False, "Stagnation window must be at least 1"
        if self.__penalty_weight < 0:
            return False, "Penalty weight must be non-negative"
        return True, "GA settings are valid"

    def to_dict(self) -> dict:
        """Convert settings to dictionary."""
        return {
            'population_size': self.__population_size,
            'generations': self.__generations,
            'crossover_rate': self.__crossover_rate,
            'mutation_sigma': self.__mutation_sigma,
            'mutation_rate': self.__mutation_rate,
            'elite_count': self.__elite_count,
            'tournament_size': self.__tournament_size,
            'seed': self.__seed,
            'stagnation_window': self.__stagnation_window,
            'penalty_weight': self.__penalty_weight
        }

    def __str__(self) -> str:
        return (
            f"GA(pop={self.__population_size}, gens={self.__generations}, "
            f"seed={self.__seed})"
        )

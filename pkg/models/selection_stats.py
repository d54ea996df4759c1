"""Normal-approximation moments of a released sample."""


class SelectionStats:
    """Mean and spread of the k1 count (bit 0) and k2 count (bit 1) in a release."""

    def __init__(self, mu0: float, sigma0: float, mu1: float, sigma1: float):
        self.__mu0 = float(mu0)
        self.__sigma0 = float(sigma0)
        self.__mu1 = float(mu1)
        self.__sigma1 = float(sigma1)

    def get_mu0(self) -> float:
        """Mean k1 count in a bit-0 release."""
        return self.__mu0

    def get_sigma0(self) -> float:
        """Standard deviation of the k1 count in a bit-0 release."""
        return self.__sigma0

    def get_mu1(self) -> float:
        """Mean k2 count in a bit-1 release."""
        return self.__mu1

    def get_sigma1(self) -> float:
        """Standard deviation of the k2 count in a bit-1 release."""
        return self.__sigma1

    def to_dict(self) -> dict:
        return {
            'mu0': self.__mu0,
            'sigma0': self.__sigma0,
            'mu1': self.__mu1,
            'sigma1': self.__sigma1
        }

    def __str__(self) -> str:
        return (
            f"SelectionStats(mu0={self.__mu0:.2f}, sigma0={self.__sigma0:.3f}, "
            f"mu1={self.__mu1:.2f}, sigma1={self.__sigma1:.3f})"
        )

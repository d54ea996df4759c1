"""Single release-and-decide trial."""


class TrialOutcome:
    """Sent bit, decoded bit and the composition of the released sample."""

    def __init__(self, sent: int, decoded: int, k1_in_sample: int, k2_in_sample: int):
        self.__sent = int(sent)
        self.__decoded = int(decoded)
        self.__k1_in_sample = int(k1_in_sample)
        self.__k2_in_sample = int(k2_in_sample)

    def get_sent(self) -> int:
        return self.__sent

    def get_decoded(self) -> int:
        return self.__decoded

    def get_k1_in_sample(self) -> int:
        return self.__k1_in_sample

    def get_k2_in_sample(self) -> int:
        return self.__k2_in_sample

    def is_error(self) -> bool:
        """True when the decoded bit differs from the sent bit."""
        return self.__sent != self.__decoded

    def to_dict(self) -> dict:
        return {
            'sent': self.__sent,
            'decoded': self.__decoded,
            'k1_in_sample': self.__k1_in_sample,
            'k2_in_sample': self.__k2_in_sample
        }

    def __str__(self) -> str:
        return (
            f"Trial(sent={self.__sent}, decoded={self.__decoded}, "
            f"k1={self.__k1_in_sample}, k2={self.__k2_in_sample})"
        )

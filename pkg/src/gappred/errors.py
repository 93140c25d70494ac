"""Exception hierarchy.

Every failure the library signals deliberately derives from GapPredError so
callers can catch the whole family at once.
"""


class GapPredError(Exception):
    """Base class for all library errors."""


class InstanceError(GapPredError, ValueError):
    """An instance, assignment or parameter failed validation."""


class NonPositiveValue(InstanceError):
    pass


class SizeExceedsCapacity(InstanceError):
    pass


class VariantMismatch(InstanceError):
    pass


class InfeasiblePrediction(InstanceError):
    pass


class MissingConsensusPermutation(InstanceError):
    pass


class TruthUnavailable(InstanceError):
    pass


class ZeroOptimum(InstanceError):
    pass


class GammaBelowOne(InstanceError):
    pass


class NonIntegerCapacity(InstanceError):
    pass


class ParameterOutOfRange(InstanceError):
    pass


class UnsatisfiableSpec(InstanceError):
    pass


class RankingNotTotal(GapPredError):
    """Two declared edges received the same ranking key."""

    def __init__(self, first, second, key):
        super().__init__(f"edges {first} and {second} share ranking key {key!r}")
        self.first = first
        self.second = second
        self.key = key


class BudgetExceeded(GapPredError):
    """The exact oracle explored more nodes than allowed."""

    def __init__(self, budget: int):
        super().__init__(f"oracle node budget of {budget} exceeded")
        self.budget = budget


class EnumerationTooLarge(GapPredError):
    """An exhaustive incentive test would need too many mechanism runs."""

    def __init__(self, needed: int, limit: int):
        super().__init__(f"{needed} mechanism executions needed, limit is {limit}")
        self.needed = needed
        self.limit = limit


class TargetUnreachable(GapPredError):
    """No prediction within tolerance of the requested error was found."""

    def __init__(self, target, closest_prediction, closest_eta):
        super().__init__(
            f"could not reach prediction error {target}; closest was {closest_eta}"
        )
        self.target = target
        self.closest_prediction = closest_prediction
        self.closest_eta = closest_eta


class UnknownMechanism(GapPredError, KeyError):
    def __str__(self):
        return f"unknown mechanism {self.args[0]!r}"

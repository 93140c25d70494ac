"""Randomized mixtures of deterministic mechanisms.

A mixer runs each deterministic component on the instance and reports the
exact outcome distribution.  Mixing weights and confidence parameters may
be quadratic surds; expected values are exact and can be enclosed in
certified rational intervals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import InstanceError, VariantMismatch
from .instance import Assignment, Instance, assignment_value, is_bmp_shaped, is_ermk_shaped, is_feasible
from .mechanisms import (
    Mechanism,
    Ranking,
    boost,
    boost_one_to_one,
    check_gamma,
    greedy,
    greedy_variant_ranking,
    ranking_theta,
    trust,
)
from .surd import Exact, Surd, enclose, to_exact


@dataclass(frozen=True)
class Outcome:
    label: str
    assignment: Assignment
    probability: Exact


@dataclass(frozen=True)
class OutcomeDistribution:
    outcomes: Tuple[Outcome, ...]

    def __post_init__(self):
        total = sum((o.probability for o in self.outcomes), Fraction(0))
        if any(o.probability < 0 for o in self.outcomes) or total != 1:
            raise InstanceError("outcome probabilities must be non-negative and sum to 1")

    def __iter__(self):
        return iter(self.outcomes)

    def support(self) -> Tuple[Assignment, ...]:
        return tuple(o.assignment for o in self.outcomes if o.probability != 0)

    def sample(self, rng: random.Random) -> Outcome:
        """Draw one outcome; used for demonstrations only."""
        u = Fraction(rng.random())
        acc: Exact = Fraction(0)
        for o in self.outcomes:
            acc = acc + o.probability
            if u < acc:
                return o
        return self.outcomes[-1]


def expected_value(instance: Instance, dist: OutcomeDistribution) -> Exact:
    total: Exact = Fraction(0)
    for o in dist.outcomes:
        total = total + o.probability * assignment_value(instance, o.assignment)
    return to_exact(total)


def expected_value_interval(instance: Instance, dist: OutcomeDistribution, width=Fraction(1, 10**12)) -> Tuple[Fraction, Fraction]:
    return enclose(expected_value(instance, dist), width)


@dataclass(frozen=True)
class Mixer:
    """Label, probability and deterministic mechanism of each component."""

    name: str
    components: Tuple[Tuple[str, Exact, Mechanism], ...]

    def __call__(self, instance: Instance) -> OutcomeDistribution:
        return OutcomeDistribution(
            tuple(Outcome(label, mech(instance), p) for label, p, mech in self.components)
        )


# Confidence parameters and weights


def boost_or_trust_delta(gamma: Exact) -> Exact:
    """Confidence given to the boosted component: sqrt(2(gamma+1)) - 1."""
    return to_exact(Surd.sqrt(2 * (Fraction(gamma) + 1)) - 1)


def boost_or_trust_weight(gamma: Exact) -> Exact:
    """Probability 2/(delta+1) of running the boosted component."""
    return to_exact(2 / (Surd.coerce(boost_or_trust_delta(gamma)) + 1))


def greedy_or_trust_delta(gamma: Exact) -> Exact:
    """Confidence given to the greedy component: (sqrt(12 gamma + 13) - 3)/2."""
    return to_exact((Surd.sqrt(12 * Fraction(gamma) + 13) - 3) / 2)


def greedy_or_trust_weight(gamma: Exact) -> Exact:
    """Probability 3/(2+delta) of running the greedy component."""
    return to_exact(3 / (Surd.coerce(greedy_or_trust_delta(gamma)) + 2))


def three_way_weight(gamma: Exact) -> Fraction:
    """Probability 2/(3+gamma) of each of the boosted and greedy components."""
    return Fraction(2) / (3 + Fraction(gamma))


# Mixers


def boost_or_trust_mixer(gamma: Exact) -> Mixer:
    check_gamma(gamma)
    delta, p = boost_or_trust_delta(gamma), boost_or_trust_weight(gamma)
    return Mixer(
        f"boost-or-trust[{gamma}]",
        (
            ("boost", p, Mechanism(f"boost[{delta}]", lambda inst: boost(inst, delta), is_bmp_shaped)),
            ("trust", to_exact(1 - p), Mechanism("trust", trust)),
        ),
    )


def greedy_or_trust_mixer(gamma: Exact) -> Mixer:
    check_gamma(gamma)
    delta, p = greedy_or_trust_delta(gamma), greedy_or_trust_weight(gamma)
    rank = ranking_theta(delta)
    return Mixer(
        f"greedy-or-trust[{gamma}]",
        (
            ("greedy-theta", p, Mechanism(f"greedy-theta[{delta}]", lambda inst: greedy(inst, rank), is_ermk_shaped)),
            ("trust", to_exact(1 - p), Mechanism("trust", trust)),
        ),
    )


def boost_or_greedy_or_trust_mixer(gamma: Exact, ranking: Optional[Ranking] = None) -> Mixer:
    """Boost on the one-to-one relaxation, truth-inducing greedy, and trust.

    The greedy ranking defaults to the one matching the instance: consensus
    order for VCGAP, value density for agent-uniform sizes.
    """
    check_gamma(gamma)
    p = three_way_weight(gamma)

    def run_greedy(inst: Instance) -> Assignment:
        return greedy(inst, ranking or greedy_variant_ranking(inst))

    return Mixer(
        f"boost-or-greedy-or-trust[{gamma}]",
        (
            ("boost", p, Mechanism(f"boost-one-to-one[{gamma}]", lambda inst: boost_one_to_one(inst, gamma))),
            ("greedy", p, Mechanism("greedy", run_greedy)),
            ("trust", 1 - 2 * p, Mechanism("trust", trust)),
        ),
    )


def boost_or_trust(instance: Instance, gamma: Exact) -> OutcomeDistribution:
    if not is_bmp_shaped(instance):
        raise VariantMismatch("boost-or-trust needs unit sizes and capacities")
    return boost_or_trust_mixer(gamma)(instance)


def greedy_or_trust(instance: Instance, gamma: Exact) -> OutcomeDistribution:
    if not is_ermk_shaped(instance):
        raise VariantMismatch("greedy-or-trust needs values equal to agent-only sizes")
    return greedy_or_trust_mixer(gamma)(instance)


def boost_or_greedy_or_trust(instance: Instance, gamma: Exact, ranking: Optional[Ranking] = None) -> OutcomeDistribution:
    if ranking is None:
        greedy_variant_ranking(instance)
    return boost_or_greedy_or_trust_mixer(gamma, ranking)(instance)


RANDOMIZED = {
    "boost-or-trust": boost_or_trust_mixer,
    "greedy-or-trust": greedy_or_trust_mixer,
    "boost-or-greedy-or-trust": boost_or_greedy_or_trust_mixer,
}


def feasible_support(instance: Instance, dist: OutcomeDistribution) -> bool:
    return all(is_feasible(instance, o.assignment) for o in dist.outcomes)

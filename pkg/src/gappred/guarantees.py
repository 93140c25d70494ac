"""Approximation guarantees g(eta_hat, gamma) of each mechanism.

For an error bound eta_hat every mechanism below satisfies
g(eta_hat, gamma) * v(output) >= v(optimum), with the expected value in
place of v(output) for the randomized ones.  Each curve is consistent
below a breakpoint and flat (robust) above it; both branches agree at the
breakpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional

from .errors import GammaBelowOne, ParameterOutOfRange, UnknownMechanism
from .surd import Exact, Surd, to_exact


@dataclass(frozen=True)
class GuaranteeCurve:
    mechanism: str
    numerator: Callable[[Exact], Exact]
    breakpoint: Callable[[Exact], Exact]
    robust: Callable[[Exact], Exact]

    def consistent_branch(self, gamma: Exact, eta_hat: Exact) -> Exact:
        return to_exact(self.numerator(gamma) / (gamma * (1 - eta_hat)))

    def __call__(self, gamma: Exact, eta_hat: Exact) -> Exact:
        if eta_hat <= self.breakpoint(gamma):
            return self.consistent_branch(gamma, eta_hat)
        return to_exact(self.robust(gamma))


def _sqrt12(g):
    return Surd.sqrt(12 * Fraction(g) + 13)


def _sqrt2(g):
    return Surd.sqrt(2 * (Fraction(g) + 1))


BOOST = GuaranteeCurve("boost", lambda g: 1 + g, lambda g: 1 - Fraction(1) / g, lambda g: 1 + g)
GREEDY_THETA = GuaranteeCurve(
    "greedy-theta", lambda g: 1 + g, lambda g: 1 - (g + 1) / (g * (g + 2)), lambda g: 2 + g
)
BOOST_OR_TRUST = GuaranteeCurve(
    "boost-or-trust", lambda g: 1 + g, lambda g: 1 - _sqrt2(g) / (2 * g), _sqrt2
)
GREEDY_OR_TRUST = GuaranteeCurve(
    "greedy-or-trust",
    lambda g: 1 + g,
    lambda g: 1 - 2 * (1 + g) / (g * (_sqrt12(g) + 1)),
    lambda g: (_sqrt12(g) + 1) / 2,
)
BOOST_OR_GREEDY_OR_TRUST = GuaranteeCurve(
    "boost-or-greedy-or-trust", lambda g: 3 + g, lambda g: 1 - Fraction(1) / g, lambda g: 3 + g
)

CURVES: Dict[str, GuaranteeCurve] = {
    "boost": BOOST,
    "boost-capacitated": BOOST,
    "boost-reduced": BOOST,
    "greedy-theta": GREEDY_THETA,
    "boost-or-trust": BOOST_OR_TRUST,
    "greedy-or-trust": GREEDY_OR_TRUST,
    "boost-or-greedy-or-trust": BOOST_OR_GREEDY_OR_TRUST,
}

# Mechanisms whose guarantee does not come from a curve above.
NO_CURVE = ("trust", "greedy-vcgap", "greedy-asgap")


def guarantee(mechanism: str, gamma: Exact, eta_hat: Exact) -> Optional[Exact]:
    """Bound g(eta_hat, gamma), or None when no finite bound applies.

    Trust is bounded by 1/(1 - eta_hat), which is infinite at eta_hat = 1.
    The plain greedy rankings carry no prediction-dependent bound.
    """
    gamma = to_exact(gamma)
    eta_hat = to_exact(eta_hat)
    if gamma < 1:
        raise GammaBelowOne(f"gamma must be at least 1, got {gamma}")
    if not 0 <= eta_hat <= 1:
        raise ParameterOutOfRange(f"eta_hat must lie in [0, 1], got {eta_hat}")
    if mechanism == "trust":
        return None if eta_hat == 1 else to_exact(1 / (1 - eta_hat))
    if mechanism in NO_CURVE:
        return None
    try:
        curve = CURVES[mechanism]
    except KeyError:
        raise UnknownMechanism(mechanism) from None
    return curve(gamma, eta_hat)

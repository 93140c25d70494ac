"""Learning-augmented mechanisms for generalized assignment with private edge sets."""

from .errors import GapPredError
from .instance import Assignment, Instance, agent_utilities, assignment_value, is_feasible, prediction_error, validate
from .mechanisms import boost, boost_capacitated, greedy, ranking_asgap, ranking_theta, ranking_vcgap, trust
from .oracle import optimal, optimal_bruteforce, optimal_matching_bmp
from .randomized import boost_or_greedy_or_trust, boost_or_trust, expected_value, greedy_or_trust
from .surd import Surd

__all__ = [
    "Assignment", "GapPredError", "Instance", "Surd",
    "agent_utilities", "assignment_value", "boost", "boost_capacitated", "boost_or_greedy_or_trust",
    "boost_or_trust", "expected_value", "greedy", "greedy_or_trust", "is_feasible", "optimal",
    "optimal_bruteforce", "optimal_matching_bmp", "prediction_error", "ranking_asgap", "ranking_theta",
    "ranking_vcgap", "trust", "validate",
]

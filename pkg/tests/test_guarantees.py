"""Approximation guarantees as exact functions of gamma and the prediction error."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gappred.errors import GammaBelowOne, ParameterOutOfRange, UnknownMechanism
from gappred.guarantees import BOOST, CURVES, NO_CURVE, guarantee
from gappred.surd import Surd

gammas = st.fractions(min_value=1, max_value=50, max_denominator=10)
etas = st.fractions(min_value=0, max_value=1, max_denominator=50)


class TestValues:
    @given(gammas)
    @settings(max_examples=50, deadline=None)
    def test_boost_consistency(self, gamma):
        assert guarantee("boost", gamma, 0) == 1 + 1 / gamma

    def test_boost_breakpoint(self):
        assert BOOST.breakpoint(2) == F(1, 2)
        assert BOOST.consistent_branch(2, F(1, 2)) == 3
        assert guarantee("boost", 2, F(1, 2)) == 3
        assert guarantee("boost", 2, F(3, 4)) == 3

    def test_greedy_theta_robust(self):
        assert guarantee("greedy-theta", 1, 1) == 3
        assert guarantee("greedy-theta", 2, 1) == 4

    def test_mixers_at_gamma_one(self):
        assert guarantee("boost-or-trust", 1, 1) == 2
        assert guarantee("greedy-or-trust", 1, 1) == 3
        assert guarantee("boost-or-greedy-or-trust", 1, 0) == 4

    def test_irrational_robustness(self):
        assert guarantee("boost-or-trust", 2, 1) == Surd.sqrt(6)
        assert guarantee("greedy-or-trust", 2, 1) == (Surd.sqrt(37) + 1) / 2

    def test_trust(self):
        assert guarantee("trust", 5, F(1, 2)) == 2
        assert guarantee("trust", 5, 1) is None

    @pytest.mark.parametrize("name", NO_CURVE[1:])
    def test_no_curve(self, name):
        assert guarantee(name, 2, F(1, 3)) is None


class TestShape:
    def test_extensions_share_the_boost_curve(self):
        assert CURVES["boost-capacitated"] is BOOST and CURVES["boost-reduced"] is BOOST

    @given(st.sampled_from(sorted(CURVES)), gammas, etas, etas)
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_error(self, name, gamma, e1, e2):
        lo, hi = sorted((e1, e2))
        assert guarantee(name, gamma, lo) <= guarantee(name, gamma, hi)

    @given(st.sampled_from(sorted(CURVES)), gammas)
    @settings(max_examples=100, deadline=None)
    def test_continuous_at_breakpoint(self, name, gamma):
        curve = CURVES[name]
        assert curve.consistent_branch(gamma, curve.breakpoint(gamma)) == curve.robust(gamma)


class TestErrors:
    def test_unknown(self):
        with pytest.raises(UnknownMechanism):
            guarantee("nope", 1, 0)

    def test_gamma(self):
        with pytest.raises(GammaBelowOne):
            guarantee("boost", F(1, 2), 0)

    def test_eta(self):
        with pytest.raises(ParameterOutOfRange):
            guarantee("boost", 2, F(3, 2))

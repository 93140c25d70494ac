"""Exhaustive misreport search: strategyproofness, coalitions and universal mixtures."""

from fractions import Fraction as F

import pytest

from gappred.errors import EnumerationTooLarge, TruthUnavailable
from gappred.generators import GenSpec, fig3a, fig3b, fig3c, fig5a, gen_instance
from gappred.incentives import (
    check_coalitions,
    check_group_strategyproof,
    check_strategyproof,
    check_universal,
    count_deviations,
    oracle_strawman,
    replay,
)
from gappred.instance import Instance
from gappred.mechanisms import Mechanism, check_truth_inducing, greedy, make_mechanism, ranking_theta, trust
from gappred.randomized import Mixer, boost_or_greedy_or_trust_mixer, boost_or_trust_mixer


def instances(variant, count, n, m, seed0=0):
    return [gen_instance(GenSpec(variant, n, m, seed=seed0 + k, density=F(2, 3))).instance for k in range(count)]


class TestStrategyproof:
    def test_strawman_is_manipulable(self):
        inst = fig3b(2, F(1, 10))
        rep = check_strategyproof(oracle_strawman, inst)
        assert not rep.ok
        assert all(replay(oracle_strawman, inst, v) for v in rep.violations)
        v = rep.violations[0]
        assert all(a > b for a, b in zip(v.deviating_utilities, v.truthful_utilities))
        assert set(v.to_dict()) == {"coalition", "declared", "truthful", "deviating"}

    def test_trust(self):
        for inst in instances("GAP", 20, 3, 2):
            assert check_strategyproof(trust, inst).ok

    @pytest.mark.parametrize("fixture", [fig3a, fig3b, fig3c])
    def test_boost_on_two_agent_fixtures(self, fixture):
        rep = check_strategyproof(make_mechanism("boost", 2), fixture(2, F(1, 10)))
        assert rep.ok
        assert rep.deviations_checked == 2 * 4

    def test_needs_truth(self):
        inst = Instance(values=((F(1),),), declared={(0, 0)})
        with pytest.raises(TruthUnavailable):
            check_strategyproof(trust, inst)


class TestGroupStrategyproof:
    def test_boost_coalitions_of_three(self):
        mech = make_mechanism("boost", 2)
        for inst in instances("BMP", 10, 3, 3, seed0=100):
            rep = check_group_strategyproof(mech, inst, 3)
            assert rep.ok
            assert rep.deviations_checked == count_deviations(inst, 3)

    def test_greedy_theta_on_ermk(self):
        mech = make_mechanism("greedy-theta", 2)
        for inst in instances("ERMK", 10, 3, 2, seed0=200):
            assert check_group_strategyproof(mech, inst, 3).ok

    def test_empty_coalition_bound(self):
        rep = check_group_strategyproof(trust, fig3b(2, F(1, 10)), 0)
        assert rep.ok and rep.deviations_checked == 0

    def test_count(self):
        inst = fig3b(2, F(1, 10))
        assert count_deviations(inst, 1) == 2 * 4
        assert count_deviations(inst, 2) == 2 * 4 + 16
        assert count_deviations(fig3a(2, F(1, 10)), 1, hiding_only=True) == 4 + 2


class TestUniversal:
    def test_boost_or_trust(self):
        for inst in instances("BMP", 5, 3, 3, seed0=300):
            reports = check_universal(boost_or_trust_mixer(2), inst, 2)
            assert [label for label, _ in reports] == ["boost", "trust"]
            assert all(rep.ok for _, rep in reports)

    def test_three_way_on_asgap(self):
        for inst in instances("ASGAP", 5, 3, 2, seed0=400):
            assert all(rep.ok for _, rep in check_universal(boost_or_greedy_or_trust_mixer(3), inst, 3))

    def test_strawman_component_fails(self):
        mixer = Mixer("bad", (
            ("oracle", F(1, 2), Mechanism("oracle", oracle_strawman)),
            ("trust", F(1, 2), Mechanism("trust", trust)),
        ))
        reports = dict(check_universal(mixer, fig3b(2, F(1, 10)), 1))
        assert not reports["oracle"].ok and reports["trust"].ok


class TestOptions:
    def test_limit(self):
        with pytest.raises(EnumerationTooLarge) as info:
            check_coalitions(trust, fig3b(2, F(1, 10)), 2, limit=10)
        assert info.value.needed == 24

    def test_hiding_only(self):
        inst = fig3a(2, F(1, 10))
        rep = check_coalitions(make_mechanism("boost", 2), inst, 1, hiding_only=True)
        assert rep.ok and rep.deviations_checked == 6

    def test_declared_others(self):
        inst = fig3c(2, F(1, 10))
        rep = check_coalitions(make_mechanism("boost", 2), inst, 1, others="declared")
        assert rep.ok

    def test_bad_others(self):
        with pytest.raises(ValueError):
            check_coalitions(trust, fig3b(2, F(1, 10)), 1, others="random")


class TestOutsideDomain:
    """Greedy-by-Theta is only claimed strategyproof when values equal sizes per agent."""

    def test_greedy_theta_on_one_to_one_fixture(self):
        inst = fig5a(F(3, 4), F(1, 20))
        rank = ranking_theta(2)
        assert not make_mechanism("greedy-theta", 2).accepts(inst)
        assert not check_truth_inducing(inst, rank)
        rep = check_strategyproof(Mechanism("greedy-theta-unchecked", lambda i: greedy(i, rank)), inst)
        assert not rep.ok
        v = rep.violations[0]
        # Agent 0 hides its edge to a and is matched to b instead.
        assert v.coalition == (0,) and v.declared == ((1,),)
        assert v.deviating_utilities == (F(3, 4),) and v.truthful_utilities == (F(7, 10),)

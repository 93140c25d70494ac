"""Acceptance suite: one test per criterion, each with its time limit."""

import random
import time
from fractions import Fraction

from inequalities import (
    boost_failures,
    greedy_theta_failures,
    mixer_failures,
    three_way_component_failures,
)

from gappred import incentives
from gappred.errors import TargetUnreachable
from gappred.generators import (
    GenSpec,
    fig3a,
    fig3b,
    fig3c,
    fig5a,
    fig5b,
    fig5c,
    gen_instance,
    gen_prediction_with_error,
    random_prediction,
)
from gappred.guarantees import CURVES, guarantee
from gappred.instance import Assignment, Instance, assignment_value
from gappred.mechanisms import (
    boost,
    boost_capacitated,
    boost_via_reduction,
    check_truth_inducing,
    make_mechanism,
    ranking_asgap,
    ranking_theta,
    ranking_vcgap,
)
from gappred.oracle import optimal, optimal_bruteforce

F = Fraction
GAMMAS = (F(1), F(3, 2), F(2), F(3), F(10))
ETAS = (F(0), F(1, 4), F(1, 2), F(1))
TOLERANCE = F(1, 10)


def random_instances(variant, count, max_n, max_m, seed0=0, min_n=1, min_m=1, **spec):
    for k in range(count):
        rng = random.Random(f"{variant}-{seed0 + k}")
        n, m = rng.randint(min_n, max_n), rng.randint(min_m, max_m)
        yield gen_instance(GenSpec(variant, n, m, seed=seed0 + k, **spec)).instance


def with_error_targets(inst, opt):
    for eta in ETAS:
        try:
            pred, _ = gen_prediction_with_error(inst, eta, TOLERANCE, optimum=opt)
        except TargetUnreachable as exc:
            pred = exc.closest_prediction
        yield inst.with_prediction(pred)


def grid(variant, count, max_n, max_m, seed0=0):
    """Instances with nonzero optimum, each paired with its optimum, at every error target."""
    for inst in random_instances(variant, count, max_n, max_m, seed0):
        opt = optimal(inst)
        if opt.value == 0:
            continue
        for predicted in with_error_targets(inst, opt):
            yield predicted, opt


def test_boost_guarantee_suite(criterion):
    start = time.perf_counter()
    failures, points = [], 0
    for inst, opt in grid("BMP", 500, 5, 5):
        for gamma in GAMMAS:
            points += 1
            failures += [(inst, gamma, f) for f in boost_failures(inst, gamma, opt)]
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    criterion("1 boost guarantee suite", ok, f"{points} points, {len(failures)} violations, {elapsed:.1f}s")
    assert not failures, failures[:3]
    assert elapsed < 60


def test_consistency_tightness_witness(criterion):
    start = time.perf_counter()
    ok = True
    for gamma in GAMMAS:
        inst = fig3b(gamma, F(1, 10))
        opt = optimal_bruteforce(inst)
        assert opt.value == 1 + gamma + F(1, 10)
        value = assignment_value(inst, boost(inst, gamma))
        ok &= value == opt.value and opt.value <= (1 + 1 / gamma) * value
        blind = inst.with_prediction(Assignment())
        ok &= opt.value <= (1 + gamma) * assignment_value(blind, boost(blind, gamma))
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1
    criterion("2 consistency tightness witness", ok, f"{elapsed:.3f}s")
    assert ok


def test_greedy_by_theta_suite(criterion):
    start = time.perf_counter()
    failures, points = [], 0
    for inst, opt in grid("ERMK", 500, 8, 3):
        for gamma in GAMMAS:
            points += 1
            failures += [(inst, gamma, f) for f in greedy_theta_failures(inst, gamma, opt)]
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    criterion("3 greedy-by-theta suite", ok, f"{points} points, {len(failures)} violations, {elapsed:.1f}s")
    assert not failures, failures[:3]
    assert elapsed < 120


def test_randomized_expected_value_suite(criterion):
    start = time.perf_counter()
    failures, points = [], 0
    plan = (
        ("boost-or-trust", "BMP", 200, 5, 5),
        ("greedy-or-trust", "ERMK", 200, 8, 3),
        ("boost-or-greedy-or-trust", "ASGAP", 100, 5, 3),
        ("boost-or-greedy-or-trust", "VCGAP", 100, 5, 3),
        ("boost-or-greedy-or-trust", "ERMK", 50, 6, 3),
    )
    for name, variant, count, n, m in plan:
        for inst, opt in grid(variant, count, n, m, seed0=10_000):
            for gamma in GAMMAS:
                points += 1
                failures += [(name, inst, gamma, f) for f in mixer_failures(name, inst, gamma, opt)]
                if name == "boost-or-greedy-or-trust":
                    failures += [(name, inst, gamma, f) for f in three_way_component_failures(inst, gamma, opt)]
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    criterion("4 randomized expected-value suite", ok, f"{points} points, {len(failures)} violations, {elapsed:.1f}s")
    assert not failures, failures[:3]
    assert elapsed < 120


def _fixtures():
    eb = F(1, 10)
    out = []
    for gamma in (F(1), F(2)):
        out += [fig3a(gamma, eb), fig3b(gamma, eb), fig3c(gamma, eb)]
    for delta in (F(1, 4), F(1, 2), F(3, 4)):
        out += [fig5a(delta, F(1, 20)), fig5b(delta, F(1, 20)), fig5c(delta, F(1, 20))]
    return out


INCENTIVE_PLAN = (
    ("trust", F(1), "GAP"),
    ("boost", F(1), "BMP"),
    ("boost", F(2), "BMP"),
    ("greedy-theta", F(2), "ERMK"),
    ("greedy-vcgap", F(1), "VCGAP"),
    ("greedy-asgap", F(1), "ASGAP"),
)


def test_incentive_suite(criterion):
    start = time.perf_counter()
    sp_violations = gsp_violations = checked = fixture_runs = 0
    fixtures = _fixtures()
    for name, gamma, variant in INCENTIVE_PLAN:
        mech = make_mechanism(name, gamma)
        instances = list(random_instances(variant, 100, 3, 3, seed0=20_000, min_n=2, density=F(2, 3)))
        in_domain = [f for f in fixtures if mech.accepts(f)]
        fixture_runs += len(in_domain)
        for inst in instances + in_domain:
            rep = incentives.check_strategyproof(mech, inst)
            sp_violations += len(rep.violations)
            checked += rep.deviations_checked
        for inst in instances[:25]:
            rep = incentives.check_group_strategyproof(mech, inst, 3)
            gsp_violations += len(rep.violations)
            checked += rep.deviations_checked
    straw = sum(
        len(incentives.check_strategyproof(incentives.oracle_strawman, f).violations)
        for f in (fig3a(2, F(1, 10)), fig3b(2, F(1, 10)), fig3c(2, F(1, 10)))
    )
    elapsed = time.perf_counter() - start
    ok = sp_violations == 0 and gsp_violations == 0 and straw >= 1 and elapsed < 180
    criterion(
        "5 incentive suite",
        ok,
        f"{checked} deviations, {fixture_runs} fixture runs, sp {sp_violations}, gsp {gsp_violations}, strawman {straw}, {elapsed:.1f}s",
    )
    assert sp_violations == 0 and gsp_violations == 0
    assert straw >= 1
    assert elapsed < 180


def test_reduction_equivalence(criterion):
    start = time.perf_counter()
    mismatches = 0
    instances = random_instances(
        "RSGAP", 100, 6, 3, seed0=30_000, size_range=(F(1), F(1)), capacity_range=(F(1), F(3)),
        granularity=1, density=F(7, 10),
    )
    for inst in instances:
        for gamma in GAMMAS:
            mismatches += boost_capacitated(inst, gamma) != boost_via_reduction(inst, gamma)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 10
    criterion("6 reduction equivalence", ok, f"{mismatches} mismatches, {elapsed:.1f}s")
    assert mismatches == 0
    assert elapsed < 10


def test_truth_inducing_check(criterion):
    start = time.perf_counter()
    failures = 0
    pairs = (
        (lambda: ranking_theta(F(2)), "ERMK"),
        (ranking_vcgap, "VCGAP"),
        (ranking_asgap, "ASGAP"),
    )
    for make, variant in pairs:
        for inst in random_instances(variant, 200, 6, 4, seed0=40_000):
            failures += not check_truth_inducing(inst, make())
    # Sizes 1 and 10 on one agent break the agent-uniform size structure.
    bad = Instance(
        values=((F(2), F(5)),),
        sizes=((F(1), F(10)),),
        capacities=(F(10), F(10)),
        declared=frozenset({(0, 0), (0, 1)}),
    )
    res = check_truth_inducing(bad, ranking_asgap())
    witness_ok = not res.ok and res.witness == ((0, 0), (0, 1))
    elapsed = time.perf_counter() - start
    ok = failures == 0 and witness_ok and elapsed < 10
    criterion("7 truth-inducing check", ok, f"{failures} failures, witness {res.witness}, {elapsed:.2f}s")
    assert failures == 0
    assert witness_ok
    assert elapsed < 10


def test_curve_sanity(criterion):
    start = time.perf_counter()
    ok = True
    for curve in set(CURVES.values()):
        for gamma in (F(1), F(3, 2), F(2), F(4), F(10)):
            b = curve.breakpoint(gamma)
            ok &= curve.consistent_branch(gamma, b) == curve.robust(gamma)
    gammas = [1 + F(k, 5) for k in range(50)]
    etas = [F(k, 49) for k in range(50)]
    for name in CURVES:
        for gamma in gammas:
            seq = [guarantee(name, gamma, e) for e in etas]
            ok &= all(a <= b for a, b in zip(seq, seq[1:]))
            ok &= all(x >= 1 for x in seq)
        at_zero = [guarantee(name, g, 0) for g in gammas]
        ok &= all(a >= b for a, b in zip(at_zero, at_zero[1:]))
    elapsed = time.perf_counter() - start
    ok &= elapsed < 5
    criterion("8 curve sanity", ok, f"{elapsed:.2f}s")
    assert ok


def test_gamma_one_neutrality(criterion):
    start = time.perf_counter()
    differing = 0
    for k, inst in enumerate(random_instances("BMP", 50, 5, 5, seed0=50_000, min_n=3, min_m=3)):
        rng = random.Random(k)
        preds = {Assignment()}
        while len(preds) < 20:
            preds.add(random_prediction(inst, rng))
        outputs = {boost(inst.with_prediction(p), 1) for p in preds}
        differing += len(outputs) != 1
    elapsed = time.perf_counter() - start
    ok = differing == 0 and elapsed < 5
    criterion("9 gamma=1 neutrality", ok, f"{differing} instances vary, {elapsed:.2f}s")
    assert differing == 0
    assert elapsed < 5

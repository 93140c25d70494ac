"""Seeded instance generators, prediction degradation and named fixtures."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import random
from typing import Dict, List, Optional, Tuple

from .errors import ParameterOutOfRange, ZeroOptimum, TargetUnreachable, UnsatisfiableSpec, VariantMismatch
from .instance import VARIANTS, Assignment, Instance, assignment_value, prediction_error
from .oracle import OracleResult, optimal

PRNG_ID = "python-random-mt19937"


@dataclass(frozen=True)
class GenSpec:
    variant: str
    n: int
    m: int
    seed: int = 0
    density: Fraction = Fraction(1, 2)
    value_range: Tuple[Fraction, Fraction] = (Fraction(1), Fraction(100))
    size_range: Tuple[Fraction, Fraction] = (Fraction(1), Fraction(10))
    # None derives capacities from the drawn sizes.
    capacity_range: Optional[Tuple[Fraction, Fraction]] = None
    granularity: int = 100
    target_eta: Optional[Fraction] = None
    eta_tolerance: Fraction = Fraction(1, 20)


@dataclass(frozen=True)
class Generated:
    instance: Instance
    metadata: Dict[str, object] = field(default_factory=dict)


def _draw(rng: random.Random, lo: Fraction, hi: Fraction, grain: int) -> Fraction:
    return Fraction(rng.randint(int(lo * grain), int(hi * grain)), grain)


def _check_spec(spec: GenSpec) -> None:
    if spec.variant not in VARIANTS:
        raise VariantMismatch(f"unknown variant {spec.variant!r}")
    if spec.n < 1 or spec.m < 1:
        raise UnsatisfiableSpec("need at least one agent and one resource")
    if not 0 < spec.density <= 1:
        raise UnsatisfiableSpec("density must lie in (0, 1]")
    for lo, hi in (spec.value_range, spec.size_range) + ((spec.capacity_range,) if spec.capacity_range else ()):
        if lo <= 0 or hi < lo or int(lo * spec.granularity) > int(hi * spec.granularity):
            raise UnsatisfiableSpec(f"empty or non-positive range {(lo, hi)}")
    if spec.variant == "UBMP" and spec.value_range[0] > 1:
        raise UnsatisfiableSpec("UBMP needs unit values")


def _values_and_sizes(spec: GenSpec, rng: random.Random):
    n, m, g = spec.n, spec.m, spec.granularity
    V = lambda: _draw(rng, *spec.value_range, g)
    S = lambda: _draw(rng, *spec.size_range, g)
    one = Fraction(1)
    perm = None
    var = spec.variant
    if var == "UBMP":
        values = [[one] * m for _ in range(n)]
        sizes = [[one] * m for _ in range(n)]
    elif var == "BMP":
        values = [[V() for _ in range(m)] for _ in range(n)]
        sizes = [[one] * m for _ in range(n)]
    elif var == "RMK":
        values = [[x] * m for x in (V() for _ in range(n))]
        sizes = [[x] * m for x in (S() for _ in range(n))]
    elif var == "ERMK":
        values = [[x] * m for x in (V() for _ in range(n))]
        sizes = [row[:] for row in values]
    elif var == "VCGAP":
        perm = list(range(m))
        rng.shuffle(perm)
        values = [[one] * m for _ in range(n)]
        for i in range(n):
            for pos, x in enumerate(sorted((V() for _ in range(m)), reverse=True)):
                values[i][perm[pos]] = x
        sizes = [[S() for _ in range(m)] for _ in range(n)]
    elif var == "AVGAP":
        values = [[x] * m for x in (V() for _ in range(n))]
        sizes = [[S() for _ in range(m)] for _ in range(n)]
    elif var == "RVGAP":
        col = [V() for _ in range(m)]
        values = [col[:] for _ in range(n)]
        sizes = [[S() for _ in range(m)] for _ in range(n)]
    elif var == "ASGAP":
        values = [[V() for _ in range(m)] for _ in range(n)]
        sizes = [[x] * m for x in (S() for _ in range(n))]
    elif var == "RSGAP":
        values = [[V() for _ in range(m)] for _ in range(n)]
        col = [S() for _ in range(m)]
        sizes = [col[:] for _ in range(n)]
    else:
        values = [[V() for _ in range(m)] for _ in range(n)]
        sizes = [[S() for _ in range(m)] for _ in range(n)]
    return values, sizes, perm


def _capacities(spec: GenSpec, rng: random.Random, sizes) -> List[Fraction]:
    if spec.variant in ("UBMP", "BMP"):
        return [Fraction(1)] * spec.m
    caps = []
    for j in range(spec.m):
        biggest = max(row[j] for row in sizes)
        if spec.capacity_range is not None:
            c = _draw(rng, *spec.capacity_range, spec.granularity)
        else:
            total = sum(row[j] for row in sizes)
            # Somewhere between the largest item and about half the column,
            # so that capacity actually binds.
            c = _draw(rng, biggest, max(biggest, total / 2), spec.granularity)
        caps.append(max(c, biggest))
    return caps


def random_feasible_prediction(instance: Instance, rng: random.Random) -> Assignment:
    """A random assignment on the complete graph that respects capacities."""
    load = [Fraction(0)] * instance.m
    edges = set()
    agents = list(range(instance.n))
    rng.shuffle(agents)
    for i in agents:
        options = [j for j in range(instance.m) if load[j] + instance.sizes[i][j] <= instance.capacities[j]]
        options.append(None)
        j = rng.choice(options)
        if j is not None:
            load[j] += instance.sizes[i][j]
            edges.add((i, j))
    return Assignment(frozenset(edges))


def gen_instance(spec: GenSpec) -> Generated:
    """Draw an instance of the requested variant; the true edge set equals the declared one."""
    _check_spec(spec)
    rng = random.Random(spec.seed)
    values, sizes, perm = _values_and_sizes(spec, rng)
    caps = _capacities(spec, rng, sizes)
    declared = {(i, j) for i in range(spec.n) for j in range(spec.m) if rng.random() < spec.density}
    if not declared:
        declared.add((rng.randrange(spec.n), rng.randrange(spec.m)))
    declared = frozenset(declared)
    base = Instance(
        values=values,
        sizes=sizes,
        capacities=caps,
        declared=declared,
        truth=declared,
        variant=spec.variant,
        consensus_perm=None if perm is None else tuple(perm),
    )
    meta: Dict[str, object] = {"prng": PRNG_ID, "seed": spec.seed, "variant": spec.variant, "n": spec.n, "m": spec.m}
    if spec.target_eta is None:
        inst = base.with_prediction(random_feasible_prediction(base, rng))
        return Generated(inst, meta)
    pred, eta = gen_prediction_with_error(base, spec.target_eta, spec.eta_tolerance, rng=rng)
    meta.update(eta_target=spec.target_eta, eta_achieved=eta)
    return Generated(base.with_prediction(pred), meta)


def gen_prediction_with_error(
    instance: Instance,
    target_eta: Fraction,
    tolerance: Fraction = Fraction(0),
    *,
    optimum: Optional[OracleResult] = None,
    rng: Optional[random.Random] = None,
) -> Tuple[Assignment, Fraction]:
    """Degrade an optimal assignment until the prediction error hits the target.

    Moves, each lowering the declared predicted value: re-point a predicted
    agent at an undeclared resource, move it to a lower-valued declared
    resource, or drop it.  At every step the move whose result lands
    closest to the target from above is applied, so large gaps are closed
    with high-value edges and small ones with low-value edges.  The
    prediction stays capacity-feasible throughout.
    """
    target_eta = Fraction(target_eta)
    if not 0 <= target_eta <= 1:
        raise ParameterOutOfRange("target error must lie in [0, 1]")
    rng = rng or random.Random(0)
    opt = optimum or optimal(instance)
    vstar = opt.value
    if vstar == 0:
        raise ZeroOptimum("cannot control the error of an instance with optimum 0")
    goal = (1 - target_eta) * vstar
    lo, hi = (1 - target_eta - tolerance) * vstar, (1 - target_eta + tolerance) * vstar
    v, s, caps, declared = instance.values, instance.sizes, instance.capacities, instance.declared
    pred: Dict[int, int] = dict(opt.assignment.agent_map())
    load = [Fraction(0)] * instance.m
    for i, j in pred.items():
        load[j] += s[i][j]

    def current() -> Fraction:
        return assignment_value(instance, [(i, j) for i, j in pred.items() if (i, j) in declared])

    best = (abs(current() - goal), dict(pred))
    while True:
        cur = current()
        if abs(cur - goal) < best[0]:
            best = (abs(cur - goal), dict(pred))
        if lo <= cur <= hi:
            break
        moves = []
        for i, j in sorted(pred.items()):
            if (i, j) not in declared:
                continue
            free = [r for r in range(instance.m) if r != j and load[r] + s[i][r] <= caps[r]]
            outside = [r for r in free if (i, r) not in declared]
            lower = [r for r in free if (i, r) in declared and v[i][r] < v[i][j]]
            if outside:
                moves.append((cur - v[i][j], i, rng.choice(outside)))
            else:
                moves.append((cur - v[i][j], i, None))
            for r in lower:
                moves.append((cur - v[i][j] + v[i][r], i, r))
        if not moves:
            break
        landing = [mv for mv in moves if lo <= mv[0] <= hi]
        if landing:
            pick = min(landing, key=lambda mv: abs(mv[0] - goal))
        else:
            above = [mv for mv in moves if mv[0] > hi]
            if not above:
                break
            pick = min(above, key=lambda mv: mv[0])
        _, i, r = pick
        load[pred[i]] -= s[i][pred[i]]
        del pred[i]
        if r is not None:
            pred[i] = r
            load[r] += s[i][r]
    final = Assignment(frozenset(pred.items()))
    eta = prediction_error(instance.with_prediction(final), vstar)
    if abs(eta - target_eta) <= tolerance:
        return final, eta
    closest = Assignment(frozenset(best[1].items()))
    raise TargetUnreachable(target_eta, closest, prediction_error(instance.with_prediction(closest), vstar))


def random_prediction(instance: Instance, rng: random.Random) -> Assignment:
    return random_feasible_prediction(instance, rng)


# Fixtures.  Agents 0, 1 and resources 0 ("a"), 1 ("b").

A, B = 0, 1


def _two_by_two(values, declared, prediction, perm=(B, A)) -> Instance:
    declared = frozenset(declared)
    return Instance(
        values=values,
        declared=declared,
        truth=declared,
        prediction=Assignment(frozenset(prediction)),
        variant="BMP",
        consensus_perm=perm,
    )


def _fig3_values(gamma: Fraction, epsbar: Fraction, eps: Optional[Fraction]):
    gamma, epsbar = Fraction(gamma), Fraction(epsbar)
    if gamma < 1:
        raise ParameterOutOfRange("gamma must be at least 1")
    if not 0 < epsbar < 1:
        raise ParameterOutOfRange("epsbar must lie in (0, 1)")
    if eps is not None:
        eps = Fraction(eps)
        if not epsbar < eps / (3 + 2 * gamma - 2 * eps):
            raise ParameterOutOfRange("epsbar must be below eps / (3 + 2 gamma - 2 eps)")
    return ((gamma - epsbar, gamma), (1 - epsbar, 1 + 2 * epsbar))


def fig3b(gamma, epsbar, eps=None) -> Instance:
    """Two agents who both like b; the prediction sends agent 0 to a and agent 1 to b."""
    vals = _fig3_values(gamma, epsbar, eps)
    return _two_by_two(vals, [(0, A), (0, B), (1, A), (1, B)], [(0, A), (1, B)])


def fig3a(gamma, epsbar, eps=None) -> Instance:
    """As fig3b with agent 1 hiding its edge to a."""
    vals = _fig3_values(gamma, epsbar, eps)
    return _two_by_two(vals, [(0, A), (0, B), (1, B)], [(0, A), (1, B)])


def fig3c(gamma, epsbar, eps=None) -> Instance:
    """As fig3b with agent 0 hiding its edge to a."""
    vals = _fig3_values(gamma, epsbar, eps)
    return _two_by_two(vals, [(0, B), (1, A), (1, B)], [(0, A), (1, B)])


def _fig5_values(delta, epsbar, gamma):
    delta, epsbar = Fraction(delta), Fraction(epsbar)
    if not 0 < epsbar < delta < 1 - epsbar:
        raise ParameterOutOfRange("need 0 < epsbar < delta < 1 - epsbar")
    if gamma is not None:
        gamma = Fraction(gamma)
        if not delta < gamma / (1 + gamma) * (1 + epsbar):
            raise ParameterOutOfRange("delta too large for this gamma")
    return ((delta - epsbar, delta), (1 - delta - epsbar, 1 - delta + 2 * epsbar))


def fig5a(delta, epsbar, gamma=None) -> Instance:
    vals = _fig5_values(delta, epsbar, gamma)
    return _two_by_two(vals, [(0, A), (0, B), (1, B)], [(0, A), (1, B)])


def fig5b(delta, epsbar, gamma=None) -> Instance:
    vals = _fig5_values(delta, epsbar, gamma)
    return _two_by_two(vals, [(0, A), (0, B), (1, A), (1, B)], [(0, A), (1, B)])


def fig5c(delta, epsbar, gamma=None) -> Instance:
    vals = _fig5_values(delta, epsbar, gamma)
    return _two_by_two(vals, [(0, B), (1, A), (1, B)], [(0, A), (1, B)])


def _one_resource(v1: Fraction, v2: Fraction) -> Instance:
    declared = frozenset({(0, 0), (1, 0)})
    return Instance(values=((v1,), (v2,)), declared=declared, truth=declared,
                    prediction=Assignment(frozenset({(0, 0)})), variant="BMP")


def fig1a(alpha, eps) -> Instance:
    """One resource; the predicted agent is worth 1, the other 1/alpha - eps."""
    alpha, eps = Fraction(alpha), Fraction(eps)
    if alpha < 1 or not 0 < eps < 1 / alpha:
        raise ParameterOutOfRange("need alpha >= 1 and 0 < eps < 1/alpha")
    return _one_resource(Fraction(1), 1 / alpha - eps)


def fig1b(beta, eps) -> Instance:
    """One resource; the predicted agent is worth 1, the other beta + eps."""
    beta, eps = Fraction(beta), Fraction(eps)
    if beta <= 0 or eps <= 0:
        raise ParameterOutOfRange("need beta > 0 and eps > 0")
    return _one_resource(Fraction(1), beta + eps)


def ermk_example() -> Instance:
    """Three agents worth and sized 3, 2, 2 on one resource of capacity 4; agents 1 and 2 predicted."""
    declared = frozenset({(0, 0), (1, 0), (2, 0)})
    vals = ((Fraction(3),), (Fraction(2),), (Fraction(2),))
    return Instance(values=vals, sizes=vals, capacities=(Fraction(4),), declared=declared, truth=declared,
                    prediction=Assignment(frozenset({(1, 0), (2, 0)})), variant="ERMK")


FIXTURES = {
    "fig1a": fig1a, "fig1b": fig1b,
    "fig3a": fig3a, "fig3b": fig3b, "fig3c": fig3c,
    "fig5a": fig5a, "fig5b": fig5b, "fig5c": fig5c,
    "ermk-example": ermk_example,
}

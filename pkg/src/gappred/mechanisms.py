"""Deterministic mechanisms.

``trust`` returns the declared part of the prediction.  ``boost`` runs
agent-proposing deferred acceptance in which every resource ranks its
proposers by an offer that multiplies the value of predicted edges by a
confidence parameter gamma.  ``greedy`` scans declared edges once in
decreasing order of a ranking key and keeps every edge that still fits.

Every mechanism returns an Assignment whose ``trace`` field records the
steps taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    GammaBelowOne,
    MissingConsensusPermutation,
    NonIntegerCapacity,
    RankingNotTotal,
    UnknownMechanism,
    VariantMismatch,
)
from .instance import (
    Assignment,
    Edge,
    Instance,
    is_asgap_shaped,
    is_bmp_shaped,
    is_ermk_shaped,
    is_rsgap_shaped,
)
from .surd import Exact


@dataclass(frozen=True)
class TraceEvent:
    kind: str
    edge: Optional[Edge]
    detail: object = None

    def to_dict(self) -> dict:
        detail = self.detail
        if isinstance(detail, tuple):
            detail = [str(x) for x in detail]
        elif detail is not None:
            detail = str(detail)
        return {"kind": self.kind, "edge": None if self.edge is None else list(self.edge), "detail": detail}


@dataclass(frozen=True)
class Offer:
    edge: Edge
    theta: Exact


def check_gamma(gamma: Exact) -> None:
    if gamma < 1:
        raise GammaBelowOne(f"confidence parameter must be at least 1, got {gamma}")


def offer(instance: Instance, i: int, j: int, gamma: Exact, prediction: Optional[Iterable[Edge]] = None) -> Offer:
    """Boosted offer of agent i to resource j."""
    check_gamma(gamma)
    boosted = instance.prediction.edges if prediction is None else prediction
    v = instance.values[i][j]
    return Offer((i, j), gamma * v if (i, j) in boosted else v)


def trust(instance: Instance) -> Assignment:
    edges = instance.prediction.edges & instance.declared
    return Assignment(edges, tuple(TraceEvent("Keep", e) for e in sorted(edges)))


# Deferred acceptance


def _deferred_acceptance(instance: Instance, gamma: Exact, quotas: Sequence[int], boosted, select: str) -> Assignment:
    check_gamma(gamma)
    if select not in ("lowest-index", "largest-offer"):
        raise ValueError(f"unknown selection rule {select!r}")
    boosted = frozenset(boosted)
    values = instance.values

    def theta(i: int, j: int) -> Exact:
        v = values[i][j]
        return gamma * v if (i, j) in boosted else v

    prefs: Dict[int, List[int]] = {
        i: sorted(instance.declared_resources(i), key=lambda j, i=i: (-values[i][j], j)) for i in range(instance.n)
    }
    cursor = [0] * instance.n
    held: Dict[int, List[int]] = {j: [] for j in range(instance.m)}
    matched: Dict[int, int] = {}
    active = {i for i in range(instance.n) if prefs[i]}
    trace: List[TraceEvent] = []

    def standing(i: int, j: int):
        return (theta(i, j), -i)

    while active:
        if select == "lowest-index":
            i = min(active)
        else:
            i = max(active, key=lambda a: (theta(a, prefs[a][cursor[a]]), -a))
        j = prefs[i][cursor[i]]
        cursor[i] += 1
        trace.append(TraceEvent("Propose", (i, j), theta(i, j)))
        holders = held[j]
        if len(holders) < quotas[j]:
            holders.append(i)
            matched[i] = j
            trace.append(TraceEvent("Accept", (i, j), theta(i, j)))
        else:
            worst = min(holders, key=lambda a: standing(a, j))
            if standing(i, j) > standing(worst, j):
                holders.remove(worst)
                holders.append(i)
                del matched[worst]
                matched[i] = j
                trace.append(TraceEvent("Accept", (i, j), theta(i, j)))
                trace.append(TraceEvent("Reject", (worst, j), theta(worst, j)))
                if cursor[worst] < len(prefs[worst]):
                    active.add(worst)
            else:
                trace.append(TraceEvent("Reject", (i, j), theta(i, j)))
        if i in matched or cursor[i] >= len(prefs[i]):
            active.discard(i)
    return Assignment(frozenset(matched.items()), tuple(trace))


def boost(instance: Instance, gamma: Exact, *, select: str = "lowest-index", boosted: Optional[Iterable[Edge]] = None) -> Assignment:
    """Boosted deferred acceptance on a one-to-one instance.

    ``boosted`` overrides the set of edges whose offers are multiplied by
    gamma; it defaults to the prediction and may be many-to-one.
    ``select`` picks the proposing agent: the lowest-index active agent or
    the active agent with the largest next offer.  The outcome does not
    depend on it.
    """
    if not is_bmp_shaped(instance):
        raise VariantMismatch("boost needs unit sizes and capacities")
    edges = instance.prediction.edges if boosted is None else boosted
    return _deferred_acceptance(instance, gamma, [1] * instance.m, edges, select)


def boost_one_to_one(instance: Instance, gamma: Exact, *, select: str = "lowest-index") -> Assignment:
    """Boost on the one-to-one relaxation of any instance.

    Sizes and capacities are ignored: every resource accepts one agent and
    the prediction may place several agents on a resource.  The result is
    a matching, and fits the original capacities because no single size
    exceeds its resource's capacity.
    """
    return _deferred_acceptance(instance, gamma, [1] * instance.m, instance.prediction.edges, select)


def boost_capacitated(instance: Instance, gamma: Exact, *, select: str = "lowest-index", boosted: Optional[Iterable[Edge]] = None) -> Assignment:
    """Boost where resource j holds up to C_j unit-size agents."""
    if not all(s == 1 for row in instance.sizes for s in row):
        raise VariantMismatch("capacitated boost needs unit sizes")
    quotas = []
    for c in instance.capacities:
        if c.denominator != 1:
            raise NonIntegerCapacity(f"capacity {c} is not an integer")
        quotas.append(int(c))
    edges = instance.prediction.edges if boosted is None else boosted
    return _deferred_acceptance(instance, gamma, quotas, edges, select)


# Reduction from resource-dependent sizes to one-to-one


@dataclass(frozen=True)
class CopyMap:
    """Maps each copy in a reduced instance back to its original resource."""

    parent: Tuple[int, ...]

    def copies_of(self, resource: int) -> List[int]:
        return [c for c, j in enumerate(self.parent) if j == resource]

    def translate(self, assignment: Assignment) -> Assignment:
        return Assignment(frozenset((i, self.parent[c]) for i, c in assignment.edges))

    def lift(self, edges: Iterable[Edge]) -> frozenset:
        """Every copy of a resource, for each edge to that resource."""
        return frozenset((i, c) for i, j in edges for c in self.copies_of(j))


def rsgap_reduce(instance: Instance) -> Tuple[Instance, CopyMap]:
    """Split resource j into floor(C_j / s_j) unit copies.

    Copies of a resource are numbered contiguously and in resource order.
    Predicted agents of a resource are spread over its copies in increasing
    agent order, one per copy, so the reduced prediction is a matching.
    """
    if not is_rsgap_shaped(instance):
        raise VariantMismatch("reduction needs sizes that depend on the resource only")
    n, m = instance.n, instance.m
    parent: List[int] = []
    for j in range(m):
        s = instance.sizes[0][j] if n else Fraction(1)
        parent.extend([j] * int(instance.capacities[j] // s))
    cmap = CopyMap(tuple(parent))
    copies = {j: cmap.copies_of(j) for j in range(m)}

    def expand(edges):
        return frozenset((i, c) for i, j in edges for c in copies[j])

    values = tuple(tuple(instance.values[i][parent[c]] for c in range(len(parent))) for i in range(n))
    prediction = set()
    for j in range(m):
        for slot, i in enumerate(instance.prediction.agents_of(j)):
            prediction.add((i, copies[j][slot]))
    reduced = Instance(
        values=values,
        declared=expand(instance.declared),
        prediction=Assignment(frozenset(prediction)),
        variant="BMP",
        truth=None if instance.truth is None else expand(instance.truth),
    )
    return reduced, cmap


def boost_via_reduction(instance: Instance, gamma: Exact, *, lifted: bool = True) -> Assignment:
    """Boost on the reduced one-to-one instance, translated back.

    With ``lifted`` every copy of a predicted resource boosts the predicted
    agent, which reproduces ``boost_capacitated`` exactly.  Without it the
    spread prediction of the reduced instance is used as is.
    """
    reduced, cmap = rsgap_reduce(instance)
    boosted = cmap.lift(instance.prediction.edges) if lifted else None
    out = boost(reduced, gamma, boosted=boosted)
    return Assignment(cmap.translate(out).edges, out.trace)


# Greedy and its rankings


@dataclass(frozen=True)
class Ranking:
    """A key function on edges; larger keys are scanned first."""

    name: str
    k: int
    key: Callable[[Instance, int, int], tuple]

    def __call__(self, instance: Instance, i: int, j: int) -> tuple:
        return self.key(instance, i, j)


def ranking_theta(gamma: Exact, prediction: Optional[Iterable[Edge]] = None) -> Ranking:
    """Boosted value, then predicted before unpredicted, then lower agent and resource."""
    check_gamma(gamma)
    fixed = None if prediction is None else frozenset(prediction)

    def key(instance: Instance, i: int, j: int) -> tuple:
        pred = instance.prediction.edges if fixed is None else fixed
        v = instance.values[i][j]
        hit = (i, j) in pred
        return (gamma * v if hit else v, int(hit), -i, -j)

    return Ranking(f"theta[{gamma}]", 4, key)


def resource_ranks(perm: Sequence[int]) -> Dict[int, int]:
    """Position of each resource in a most-to-least-valued ordering, from 1."""
    return {j: pos + 1 for pos, j in enumerate(perm)}


def ranking_vcgap(consensus_perm: Optional[Sequence[int]] = None) -> Ranking:
    """Earlier resource in the consensus order, then value density, then lower agent."""
    fixed = None if consensus_perm is None else resource_ranks(consensus_perm)

    def key(instance: Instance, i: int, j: int) -> tuple:
        ranks = fixed
        if ranks is None:
            if instance.consensus_perm is None:
                raise MissingConsensusPermutation("ranking needs a consensus permutation")
            ranks = resource_ranks(instance.consensus_perm)
        return (-ranks[j], instance.values[i][j] / instance.sizes[i][j], -i)

    return Ranking("vcgap", 3, key)


def ranking_asgap() -> Ranking:
    """Value density, then lower agent, then lower resource."""

    def key(instance: Instance, i: int, j: int) -> tuple:
        return (instance.values[i][j] / instance.sizes[i][j], -i, -j)

    return Ranking("asgap", 3, key)


def greedy(instance: Instance, ranking: Ranking) -> Assignment:
    keys = {e: ranking(instance, *e) for e in instance.declared}
    owner: Dict[tuple, Edge] = {}
    for e in sorted(keys):
        other = owner.setdefault(keys[e], e)
        if other != e:
            raise RankingNotTotal(other, e, keys[e])
    load = [Fraction(0)] * instance.m
    chosen: Dict[int, int] = {}
    trace: List[TraceEvent] = []
    for e in sorted(keys, key=keys.__getitem__, reverse=True):
        i, j = e
        if i in chosen:
            continue
        trace.append(TraceEvent("Consider", e, keys[e]))
        s = instance.sizes[i][j]
        if load[j] + s <= instance.capacities[j]:
            load[j] += s
            chosen[i] = j
            trace.append(TraceEvent("Add", e, keys[e]))
        else:
            trace.append(TraceEvent("Skip", e, keys[e]))
    return Assignment(frozenset(chosen.items()), tuple(trace))


# Certificates


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: Optional[tuple] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_truth_inducing(instance: Instance, ranking: Ranking) -> Check:
    """Keys are pairwise distinct and, for each agent, never favour a lower-valued edge.

    Checked on every agent-resource pair, declared or not.
    """
    edges = [(i, j) for i in range(instance.n) for j in range(instance.m)]
    keys = {e: ranking(instance, *e) for e in edges}
    seen: Dict[tuple, Edge] = {}
    for e in edges:
        other = seen.setdefault(keys[e], e)
        if other != e:
            return Check(False, (other, e), "ranking keys coincide")
    v = instance.values
    for i in range(instance.n):
        for j in range(instance.m):
            for k in range(instance.m):
                if j != k and keys[(i, j)] > keys[(i, k)] and v[i][j] < v[i][k]:
                    return Check(False, ((i, j), (i, k)), "higher key on a lower-valued edge")
    return Check(True)


def check_stability(instance: Instance, gamma: Exact, assignment: Assignment, *, boosted: Optional[Iterable[Edge]] = None) -> Check:
    """Look for a declared edge whose agent and resource both prefer each other.

    Agents compare by value, ties to the lower resource; resources compare
    by boosted offer, ties to the lower agent.  Being unmatched is worse
    than any declared partner.  The witness is the first blocking edge in
    agent order, each agent's edges taken from most to least preferred.
    """
    if not is_bmp_shaped(instance):
        raise VariantMismatch("stability is defined for one-to-one instances")
    check_gamma(gamma)
    pred = instance.prediction.edges if boosted is None else frozenset(boosted)
    v = instance.values

    def theta(i, j):
        return gamma * v[i][j] if (i, j) in pred else v[i][j]

    mate_of_agent = assignment.agent_map()
    mate_of_resource = {j: i for i, j in assignment.edges}
    for i in range(instance.n):
        for j in sorted(instance.declared_resources(i), key=lambda r: (-v[i][r], r)):
            if mate_of_agent.get(i) == j:
                continue
            cur = mate_of_agent.get(i)
            agent_wants = cur is None or (v[i][j], -j) > (v[i][cur], -cur)
            holder = mate_of_resource.get(j)
            resource_wants = holder is None or (theta(i, j), -i) > (theta(holder, j), -holder)
            if agent_wants and resource_wants:
                return Check(False, ((i, j),), "blocking edge")
    return Check(True)


# Named mechanisms


def _always(instance: Instance) -> bool:
    return True


@dataclass(frozen=True)
class Mechanism:
    """A deterministic mechanism mapping an instance to an assignment.

    ``accepts`` describes the instances the mechanism is defined on; running
    it elsewhere raises VariantMismatch.
    """

    name: str
    run: Callable[[Instance], Assignment]
    accepts: Callable[[Instance], bool] = _always

    def __call__(self, instance: Instance) -> Assignment:
        if not self.accepts(instance):
            raise VariantMismatch(f"{self.name} is not defined on this instance")
        return self.run(instance)


def greedy_variant_ranking(instance: Instance) -> Ranking:
    """The truth-inducing ranking matching the instance's size structure."""
    if instance.variant == "VCGAP":
        return ranking_vcgap()
    if is_asgap_shaped(instance):
        return ranking_asgap()
    raise VariantMismatch("greedy needs a VCGAP or agent-uniform size instance")


def _unit_sizes_integer_caps(instance: Instance) -> bool:
    return all(s == 1 for row in instance.sizes for s in row) and all(c.denominator == 1 for c in instance.capacities)


def _has_perm(instance: Instance) -> bool:
    return instance.consensus_perm is not None


DETERMINISTIC = ("trust", "boost", "boost-capacitated", "boost-reduced", "greedy-theta", "greedy-vcgap", "greedy-asgap")


def make_mechanism(name: str, gamma: Exact = 1) -> Mechanism:
    """Look up a deterministic mechanism by name."""
    if name == "trust":
        return Mechanism(name, trust)
    if name == "boost":
        return Mechanism(f"boost[{gamma}]", lambda inst: boost(inst, gamma), is_bmp_shaped)
    if name == "boost-capacitated":
        return Mechanism(f"boost-capacitated[{gamma}]", lambda inst: boost_capacitated(inst, gamma), _unit_sizes_integer_caps)
    if name == "boost-reduced":
        return Mechanism(f"boost-reduced[{gamma}]", lambda inst: boost_via_reduction(inst, gamma), is_rsgap_shaped)
    if name == "greedy-theta":
        rank = ranking_theta(gamma)
        return Mechanism(f"greedy-theta[{gamma}]", lambda inst: greedy(inst, rank), is_ermk_shaped)
    if name == "greedy-vcgap":
        rank = ranking_vcgap()
        return Mechanism("greedy-vcgap", lambda inst: greedy(inst, rank), _has_perm)
    if name == "greedy-asgap":
        rank = ranking_asgap()
        return Mechanism("greedy-asgap", lambda inst: greedy(inst, rank), is_asgap_shaped)
    raise UnknownMechanism(name)

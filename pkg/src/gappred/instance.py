"""Instances, assignments and the quantities defined on them.

Agents are ``0..n-1`` and resources ``0..m-1``.  An edge is a pair
``(agent, resource)``.  Values, sizes and capacities are exact rationals.
Each instance carries the declared edge set, optionally the true edge set
used for utilities, a predicted assignment and a variant tag whose
structural restriction is checked on construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import (
    InfeasiblePrediction,
    InstanceError,
    MissingConsensusPermutation,
    NonPositiveValue,
    SizeExceedsCapacity,
    TruthUnavailable,
    VariantMismatch,
    ZeroOptimum,
)

Edge = Tuple[int, int]
EdgeSet = FrozenSet[Edge]

VARIANTS = ("UBMP", "BMP", "RMK", "ERMK", "VCGAP", "AVGAP", "RVGAP", "ASGAP", "RSGAP", "GAP")


def parse_rational(x: Union[str, int, Fraction]) -> Fraction:
    """Parse 'p/q', a decimal string or an int exactly."""
    if isinstance(x, bool):
        raise InstanceError(f"not a rational: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceError(f"not a rational: {x!r}") from exc
    raise InstanceError(f"not a rational: {x!r} (floats are not accepted)")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _edge_set(edges: Iterable) -> EdgeSet:
    return frozenset((int(i), int(j)) for i, j in edges)


@dataclass(frozen=True)
class Assignment:
    """A set of edges in which every agent appears at most once.

    ``trace`` holds the step log of the mechanism that produced it and is
    ignored by equality.
    """

    edges: EdgeSet = frozenset()
    trace: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        edges = _edge_set(self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for i, _ in edges:
            if i in seen:
                raise InstanceError(f"agent {i} is assigned twice")
            seen.add(i)

    def __iter__(self) -> Iterator[Edge]:
        return iter(sorted(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge) -> bool:
        return tuple(edge) in self.edges

    def resource_of(self, agent: int) -> Optional[int]:
        for i, j in self.edges:
            if i == agent:
                return j
        return None

    def agent_map(self) -> Dict[int, int]:
        return {i: j for i, j in self.edges}

    def agents_of(self, resource: int) -> List[int]:
        return sorted(i for i, j in self.edges if j == resource)

    def restrict(self, edges: Iterable[Edge]) -> "Assignment":
        return Assignment(self.edges & _edge_set(edges))

    def to_list(self) -> List[List[int]]:
        return [list(e) for e in sorted(self.edges)]


def _is_perm(seq: Sequence[int], m: int) -> bool:
    return sorted(seq) == list(range(m))


@dataclass(frozen=True)
class Instance:
    values: Tuple[Tuple[Fraction, ...], ...]
    declared: EdgeSet
    prediction: Assignment = Assignment()
    sizes: Optional[Tuple[Tuple[Fraction, ...], ...]] = None
    capacities: Optional[Tuple[Fraction, ...]] = None
    variant: str = "GAP"
    truth: Optional[EdgeSet] = None
    consensus_perm: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        values = tuple(tuple(Fraction(v) for v in row) for row in self.values)
        n = len(values)
        m = len(values[0]) if n else 0
        if any(len(row) != m for row in values):
            raise InstanceError("values must be an n x m matrix")
        sizes = self.sizes
        sizes = tuple(tuple(Fraction(1) for _ in range(m)) for _ in range(n)) if sizes is None else tuple(
            tuple(Fraction(s) for s in row) for row in sizes
        )
        if len(sizes) != n or any(len(row) != m for row in sizes):
            raise InstanceError("sizes must be an n x m matrix")
        caps = self.capacities
        caps = tuple(Fraction(1) for _ in range(m)) if caps is None else tuple(Fraction(c) for c in caps)
        if len(caps) != m:
            raise InstanceError("capacities must have one entry per resource")
        prediction = self.prediction if isinstance(self.prediction, Assignment) else Assignment(self.prediction)
        declared = _edge_set(self.declared)
        truth = None if self.truth is None else _edge_set(self.truth)
        perm = None if self.consensus_perm is None else tuple(int(j) for j in self.consensus_perm)
        for name, val in (("values", values), ("sizes", sizes), ("capacities", caps), ("prediction", prediction),
                          ("declared", declared), ("truth", truth), ("consensus_perm", perm)):
            object.__setattr__(self, name, val)
        self._check()

    # Validation

    def _check(self):
        n, m = self.n, self.m
        for i in range(n):
            for j in range(m):
                if self.values[i][j] <= 0:
                    raise NonPositiveValue(f"value of {(i, j)} is {self.values[i][j]}")
                if self.sizes[i][j] <= 0:
                    raise NonPositiveValue(f"size of {(i, j)} is {self.sizes[i][j]}")
        for j, c in enumerate(self.capacities):
            if c <= 0:
                raise NonPositiveValue(f"capacity of resource {j} is {c}")
            for i in range(n):
                if self.sizes[i][j] > c:
                    raise SizeExceedsCapacity(f"size of {(i, j)} exceeds capacity {c}")
        for label, edges in (("declared", self.declared), ("truth", self.truth or ()), ("prediction", self.prediction.edges)):
            for i, j in edges:
                if not (0 <= i < n and 0 <= j < m):
                    raise InstanceError(f"{label} edge {(i, j)} is out of range")
        if self.variant not in VARIANTS:
            raise VariantMismatch(f"unknown variant {self.variant!r}")
        if self.consensus_perm is not None:
            if not _is_perm(self.consensus_perm, m):
                raise VariantMismatch("consensus_perm must be a permutation of the resources")
            if not self.respects_perm(self.consensus_perm):
                raise VariantMismatch("values are not monotone along consensus_perm")
        elif self.variant == "VCGAP":
            raise MissingConsensusPermutation("VCGAP instances need consensus_perm")
        problem = variant_violation(self, self.variant)
        if problem:
            raise VariantMismatch(f"not a {self.variant} instance: {problem}")
        load = [Fraction(0)] * m
        for i, j in self.prediction.edges:
            load[j] += self.sizes[i][j]
        for j in range(m):
            if load[j] > self.capacities[j]:
                raise InfeasiblePrediction(f"prediction overloads resource {j}")

    def respects_perm(self, perm: Sequence[int]) -> bool:
        return all(
            self.values[i][perm[k]] >= self.values[i][perm[k + 1]] for i in range(self.n) for k in range(self.m - 1)
        )

    # Accessors

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return len(self.values[0]) if self.values else 0

    def value(self, i: int, j: int) -> Fraction:
        return self.values[i][j]

    def size(self, i: int, j: int) -> Fraction:
        return self.sizes[i][j]

    def declared_resources(self, agent: int) -> List[int]:
        return sorted(j for i, j in self.declared if i == agent)

    def true_edges(self) -> EdgeSet:
        if self.truth is None:
            raise TruthUnavailable("instance carries no true edge set")
        return self.truth

    def with_declared(self, declared: Iterable[Edge]) -> "Instance":
        return replace(self, declared=_edge_set(declared), prediction=self.prediction)

    def with_prediction(self, prediction: Union[Assignment, Iterable[Edge]]) -> "Instance":
        if not isinstance(prediction, Assignment):
            prediction = Assignment(prediction)
        return replace(self, prediction=prediction)

    def with_variant(self, variant: str) -> "Instance":
        return replace(self, variant=variant)

    # Serialisation

    def to_dict(self) -> dict:
        out = {
            "agents": self.n,
            "resources": self.m,
            "values": [[format_rational(v) for v in row] for row in self.values],
            "sizes": [[format_rational(s) for s in row] for row in self.sizes],
            "capacities": [format_rational(c) for c in self.capacities],
            "declared": [list(e) for e in sorted(self.declared)],
            "prediction": self.prediction.to_list(),
            "variant": self.variant,
        }
        if self.truth is not None:
            out["truth"] = [list(e) for e in sorted(self.truth)]
        if self.consensus_perm is not None:
            out["consensus_perm"] = list(self.consensus_perm)
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def validate(raw: dict) -> Instance:
    """Build an Instance from the plain JSON-style mapping."""
    try:
        n, m = int(raw["agents"]), int(raw["resources"])
        values = tuple(tuple(parse_rational(v) for v in row) for row in raw["values"])
        declared = _edge_set(raw["declared"])
    except KeyError as exc:
        raise InstanceError(f"missing field {exc.args[0]!r}") from exc
    if len(values) != n or any(len(row) != m for row in values):
        raise InstanceError(f"values must be {n} x {m}")
    sizes = raw.get("sizes")
    if sizes is not None:
        sizes = tuple(tuple(parse_rational(s) for s in row) for row in sizes)
    caps = raw.get("capacities")
    if caps is not None:
        caps = tuple(parse_rational(c) for c in caps)
    truth = raw.get("truth")
    perm = raw.get("consensus_perm")
    return Instance(
        values=values,
        declared=declared,
        prediction=Assignment(_edge_set(raw.get("prediction", ()))),
        sizes=sizes,
        capacities=caps,
        variant=raw.get("variant", "GAP"),
        truth=None if truth is None else _edge_set(truth),
        consensus_perm=None if perm is None else tuple(perm),
    )


def loads(text: str) -> Instance:
    return validate(json.loads(text, parse_float=Fraction))


def load(path: Union[str, Path]) -> Instance:
    return loads(Path(path).read_text())


def dump(instance: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(instance.to_json(indent=2) + "\n")


# Structural restrictions


def _agent_uniform(matrix) -> bool:
    return all(len(set(row)) <= 1 for row in matrix)


def _resource_uniform(matrix) -> bool:
    return all(len({row[j] for row in matrix}) <= 1 for j in range(len(matrix[0]) if matrix else 0))


def _all_one(seq) -> bool:
    return all(x == 1 for x in seq)


def is_bmp_shaped(instance: Instance) -> bool:
    return all(_all_one(row) for row in instance.sizes) and _all_one(instance.capacities)


def is_ermk_shaped(instance: Instance) -> bool:
    return _agent_uniform(instance.values) and instance.sizes == instance.values


def is_asgap_shaped(instance: Instance) -> bool:
    return _agent_uniform(instance.sizes)


def is_rsgap_shaped(instance: Instance) -> bool:
    return _resource_uniform(instance.sizes)


def variant_violation(instance: Instance, variant: str) -> Optional[str]:
    """Describe why the instance is not of ``variant``, or None if it is."""
    v, s = instance.values, instance.sizes
    if variant == "UBMP":
        if not (all(_all_one(r) for r in v) and is_bmp_shaped(instance)):
            return "values, sizes and capacities must all be 1"
    elif variant == "BMP":
        if not is_bmp_shaped(instance):
            return "sizes and capacities must all be 1"
    elif variant == "RMK":
        if not (_agent_uniform(v) and _agent_uniform(s)):
            return "values and sizes must depend on the agent only"
    elif variant == "ERMK":
        if not is_ermk_shaped(instance):
            return "values must equal sizes and depend on the agent only"
    elif variant == "VCGAP":
        if instance.consensus_perm is None:
            return "consensus_perm is missing"
    elif variant == "AVGAP":
        if not _agent_uniform(v):
            return "values must depend on the agent only"
    elif variant == "RVGAP":
        if not _resource_uniform(v):
            return "values must depend on the resource only"
    elif variant == "ASGAP":
        if not _agent_uniform(s):
            return "sizes must depend on the agent only"
    elif variant == "RSGAP":
        if not _resource_uniform(s):
            return "sizes must depend on the resource only"
    return None


# Quantities on assignments


def assignment_value(instance: Instance, edges: Iterable[Edge]) -> Fraction:
    if isinstance(edges, Assignment):
        edges = edges.edges
    return sum((instance.values[i][j] for i, j in edges), Fraction(0))


def loads_of(instance: Instance, edges: Iterable[Edge]) -> List[Fraction]:
    load = [Fraction(0)] * instance.m
    for i, j in edges:
        load[j] += instance.sizes[i][j]
    return load


def is_feasible(instance: Instance, edges: Iterable[Edge], within: Optional[Iterable[Edge]] = None) -> bool:
    """Assignment constraint, capacities, and containment in ``within`` (default: declared edges)."""
    if isinstance(edges, Assignment):
        edges = edges.edges
    edges = _edge_set(edges)
    allowed = instance.declared if within is None else _edge_set(within)
    if not edges <= allowed:
        return False
    agents = [i for i, _ in edges]
    if len(agents) != len(set(agents)):
        return False
    return all(l <= c for l, c in zip(loads_of(instance, edges), instance.capacities))


def agent_utilities(instance: Instance, assignment: Assignment) -> List[Fraction]:
    """True utility of every agent: its value if matched along a true edge, else 0."""
    truth = instance.true_edges()
    util = [Fraction(0)] * instance.n
    for i, j in assignment.edges:
        if (i, j) in truth:
            util[i] = instance.values[i][j]
    return util


def predicted_value(instance: Instance) -> Fraction:
    """Value of the predicted edges that were declared."""
    return assignment_value(instance, instance.prediction.edges & instance.declared)


def prediction_error(instance: Instance, optimum: Fraction) -> Fraction:
    """One minus the share of the optimum recovered by the declared part of the prediction."""
    if optimum == 0:
        raise ZeroOptimum("prediction error is undefined when the optimum is 0")
    return 1 - predicted_value(instance) / optimum

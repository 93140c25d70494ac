"""Exact optimum over the declared graph.

``optimal_bruteforce`` is a depth-first branch and bound that works for any
variant and returns, among all optimal assignments, the lexicographically
smallest sorted edge list.  ``optimal_matching_bmp`` solves the one-to-one
case as a maximum weight bipartite matching on integer-scaled weights.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import networkx as nx

from .errors import BudgetExceeded, VariantMismatch
from .instance import Assignment, Instance, assignment_value, is_bmp_shaped

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    """Node budget, overridable through the GAPPRED_BUDGET environment variable."""
    env = os.environ.get("GAPPRED_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class OracleResult:
    assignment: Assignment
    value: Fraction
    nodes_explored: int


def _lcm_of_denominators(fracs) -> int:
    out = 1
    for q in fracs:
        out = out * q.denominator // math.gcd(out, q.denominator)
    return out


def optimal_bruteforce(instance: Instance, budget: Optional[int] = None) -> OracleResult:
    budget = default_budget() if budget is None else budget
    n, m = instance.n, instance.m
    # Work in integers: one common scale for values, one scale per resource
    # for sizes against its capacity.
    vscale = _lcm_of_denominators(v for row in instance.values for v in row)
    val = [[int(v * vscale) for v in row] for row in instance.values]
    size = [[0] * m for _ in range(n)]
    cap = [0] * m
    for j in range(m):
        col = [instance.sizes[i][j] for i in range(n)] + [instance.capacities[j]]
        sscale = _lcm_of_denominators(col)
        cap[j] = int(instance.capacities[j] * sscale)
        for i in range(n):
            size[i][j] = int(instance.sizes[i][j] * sscale)

    options: List[List[int]] = [instance.declared_resources(i) for i in range(n)]
    best_of = [max((val[i][j] for j in options[i]), default=0) for i in range(n)]
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + best_of[i]

    residual = cap[:]
    chosen: List[Optional[int]] = [None] * n
    best_value = -1
    best_choice: List[Optional[int]] = []
    nodes = 0

    def search(k: int, current: int) -> None:
        nonlocal nodes, best_value, best_choice
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(budget)
        if current + suffix[k] <= best_value:
            return
        if k == n:
            best_value = current
            best_choice = chosen[:]
            return
        for j in options[k]:
            if size[k][j] <= residual[j]:
                residual[j] -= size[k][j]
                chosen[k] = j
                search(k + 1, current + val[k][j])
                chosen[k] = None
                residual[j] += size[k][j]
        search(k + 1, current)

    search(0, 0)
    edges = frozenset((i, j) for i, j in enumerate(best_choice) if j is not None)
    return OracleResult(Assignment(edges), Fraction(best_value, vscale), nodes)


def optimal_matching_bmp(instance: Instance) -> OracleResult:
    if not is_bmp_shaped(instance):
        raise VariantMismatch("matching oracle needs unit sizes and capacities")
    scale = _lcm_of_denominators(v for row in instance.values for v in row)
    graph = nx.Graph()
    for i, j in sorted(instance.declared):
        graph.add_edge(("L", i), ("R", j), weight=int(instance.values[i][j] * scale))
    edges = set()
    for a, b in nx.max_weight_matching(graph, maxcardinality=False, weight="weight"):
        if a[0] == "R":
            a, b = b, a
        edges.add((a[1], b[1]))
    match = Assignment(frozenset(edges))
    return OracleResult(match, assignment_value(instance, match), 0)


def optimal(instance: Instance, budget: Optional[int] = None) -> OracleResult:
    """Dispatch to the matching oracle when possible, else branch and bound."""
    if is_bmp_shaped(instance):
        return optimal_matching_bmp(instance)
    return optimal_bruteforce(instance, budget)

"""Exhaustive strategyproofness tests over edge-set misreports.

A coalition S deviates by declaring arbitrary subsets of its members'
possible edges while everyone else reports a fixed profile (their true
edges by default).  The deviation is a violation when every member is
strictly better off, measured by true utilities.  Single-agent coalitions
give strategyproofness; all coalitions up to a size give group
strategyproofness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .errors import EnumerationTooLarge
from .instance import Assignment, Edge, Instance, agent_utilities

DEFAULT_LIMIT = 10**6

MechanismFn = Callable[[Instance], Assignment]


@dataclass(frozen=True)
class Violation:
    coalition: Tuple[int, ...]
    masks: Tuple[int, ...]
    declared: Tuple[Tuple[int, ...], ...]
    truthful_utilities: Tuple[Fraction, ...]
    deviating_utilities: Tuple[Fraction, ...]

    def to_dict(self) -> dict:
        return {
            "coalition": list(self.coalition),
            "declared": [list(r) for r in self.declared],
            "truthful": [str(u) for u in self.truthful_utilities],
            "deviating": [str(u) for u in self.deviating_utilities],
        }


@dataclass(frozen=True)
class IncentiveReport:
    mechanism: str
    max_coalition: int
    deviations_checked: int
    violations: Tuple[Violation, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def _name(mechanism) -> str:
    return getattr(mechanism, "name", getattr(mechanism, "__name__", repr(mechanism)))


def _report_base(instance: Instance, others: str) -> List[Tuple[int, ...]]:
    """Per-agent declared resources for the non-deviating agents."""
    if others == "truthful":
        edges = instance.true_edges()
    elif others == "declared":
        instance.true_edges()
        edges = instance.declared
    else:
        raise ValueError(f"others must be 'truthful' or 'declared', got {others!r}")
    return [tuple(sorted(j for a, j in edges if a == i)) for i in range(instance.n)]


def _options(instance: Instance, agent: int, hiding_only: bool) -> Tuple[int, ...]:
    """Resources an agent may claim: all of them, or only its true ones."""
    if hiding_only:
        return tuple(sorted(j for a, j in instance.true_edges() if a == agent))
    return tuple(range(instance.m))


def count_deviations(instance: Instance, max_coalition: int, hiding_only: bool = False) -> int:
    if not hiding_only:
        return sum(comb(instance.n, k) * 2 ** (k * instance.m) for k in range(1, max_coalition + 1))
    total = 0
    for k in range(1, max_coalition + 1):
        for group in combinations(range(instance.n), k):
            size = 1
            for i in group:
                size *= 2 ** len(_options(instance, i, True))
            total += size
    return total


def _profile(instance: Instance, base: Sequence[Tuple[int, ...]], changes) -> Instance:
    rows = list(base)
    for i, resources in changes:
        rows[i] = resources
    return instance.with_declared((i, j) for i, row in enumerate(rows) for j in row)


def check_coalitions(
    mechanism: MechanismFn,
    instance: Instance,
    max_coalition: int,
    *,
    others: str = "truthful",
    hiding_only: bool = False,
    limit: int = DEFAULT_LIMIT,
) -> IncentiveReport:
    """Enumerate every coalition of size 1..max_coalition and every joint misreport."""
    needed = count_deviations(instance, max_coalition, hiding_only)
    if needed > limit:
        raise EnumerationTooLarge(needed, limit)
    base = _report_base(instance, others)
    truth = instance.true_edges()
    honest_rows = [tuple(sorted(j for a, j in truth if a == i)) for i in range(instance.n)]
    violations: List[Violation] = []
    checked = 0
    for k in range(1, max_coalition + 1):
        for group in combinations(range(instance.n), k):
            honest = _profile(instance, base, [(i, honest_rows[i]) for i in group])
            before = agent_utilities(instance, mechanism(honest))
            menus = [_options(instance, i, hiding_only) for i in group]
            for masks in product(*(range(2 ** len(menu)) for menu in menus)):
                rows = tuple(tuple(r for b, r in enumerate(menu) if mask >> b & 1) for mask, menu in zip(masks, menus))
                checked += 1
                outcome = mechanism(_profile(instance, base, zip(group, rows)))
                after = agent_utilities(instance, outcome)
                if all(after[i] > before[i] for i in group):
                    violations.append(
                        Violation(group, masks, rows, tuple(before[i] for i in group), tuple(after[i] for i in group))
                    )
    return IncentiveReport(_name(mechanism), max_coalition, checked, tuple(violations))


def check_strategyproof(mechanism: MechanismFn, instance: Instance, **kwargs) -> IncentiveReport:
    return check_coalitions(mechanism, instance, 1, **kwargs)


def check_group_strategyproof(mechanism: MechanismFn, instance: Instance, max_coalition: int, **kwargs) -> IncentiveReport:
    return check_coalitions(mechanism, instance, max_coalition, **kwargs)


def check_universal(mixer, instance: Instance, max_coalition: int, **kwargs) -> List[Tuple[str, IncentiveReport]]:
    """Group strategyproofness of every deterministic component of a mixer."""
    return [(label, check_coalitions(mech, instance, max_coalition, **kwargs)) for label, _, mech in mixer.components]


def replay(mechanism: MechanismFn, instance: Instance, violation: Violation, *, others: str = "truthful") -> bool:
    """Re-run a reported deviation and confirm every member gains."""
    base = _report_base(instance, others)
    truth = instance.true_edges()
    honest_rows = [tuple(sorted(j for a, j in truth if a == i)) for i in range(instance.n)]
    before = agent_utilities(instance, mechanism(_profile(instance, base, [(i, honest_rows[i]) for i in violation.coalition])))
    after = agent_utilities(instance, mechanism(_profile(instance, base, zip(violation.coalition, violation.declared))))
    return all(after[i] > before[i] for i in violation.coalition)


def oracle_strawman(instance: Instance) -> Assignment:
    """Run the exact optimum on the declared graph; not strategyproof."""
    from .oracle import optimal

    return optimal(instance).assignment

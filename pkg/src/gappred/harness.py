"""Experiment sweeps: run mechanisms over (gamma, eta) grids and check guarantees."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple

from .errors import TargetUnreachable, UnknownMechanism
from .generators import GenSpec, gen_instance, gen_prediction_with_error
from .guarantees import guarantee
from .instance import Instance, assignment_value, prediction_error
from .mechanisms import DETERMINISTIC, make_mechanism
from .oracle import optimal
from .randomized import RANDOMIZED, expected_value
from .surd import Exact, Surd, enclose, exact_sign, format_exact, parse_exact

MECHANISMS = DETERMINISTIC + tuple(RANDOMIZED)

COLUMNS = (
    "instance_id", "variant", "n", "m", "gamma", "eta_target", "eta_achieved", "mechanism",
    "value_num", "value_den", "interval_lo", "interval_hi", "value_exact",
    "opt_num", "opt_den", "bound", "bound_lo", "bound_hi", "pass",
)

DIGITS = 15


@dataclass(frozen=True)
class SweepRow:
    instance_id: str
    variant: str
    n: int
    m: int
    gamma: Fraction
    eta_target: Optional[Fraction]
    eta_achieved: Fraction
    mechanism: str
    value: Exact
    optimum: Fraction
    bound: Optional[Exact]
    passed: bool

    @property
    def ratio(self) -> Optional[Exact]:
        return None if self.value == 0 else self.optimum / Surd.coerce(self.value)


def run_mechanism(name: str, instance: Instance, gamma: Exact) -> Exact:
    """Value of a deterministic mechanism or expected value of a mixer."""
    if name in RANDOMIZED:
        return expected_value(instance, RANDOMIZED[name](gamma)(instance))
    if name in DETERMINISTIC:
        return assignment_value(instance, make_mechanism(name, gamma)(instance))
    raise UnknownMechanism(name)


def bound_holds(bound: Optional[Exact], value: Exact, optimum: Fraction) -> bool:
    """Exact test of bound * value >= optimum; a missing bound holds vacuously."""
    if bound is None:
        return True
    return exact_sign(Surd.coerce(bound) * value - optimum) >= 0


def evaluate(instance: Instance, instance_id: str, mechanism: str, gamma: Fraction, optimum: Fraction,
             eta_target: Optional[Fraction] = None) -> SweepRow:
    eta = prediction_error(instance, optimum)
    value = run_mechanism(mechanism, instance, gamma)
    bound = guarantee(mechanism, gamma, eta)
    return SweepRow(instance_id, instance.variant, instance.n, instance.m, gamma, eta_target, eta, mechanism,
                    value, optimum, bound, bound_holds(bound, value, optimum))


@dataclass(frozen=True)
class SweepConfig:
    variant: str
    n: int
    m: int
    count: int
    seed: int
    mechanisms: Tuple[str, ...]
    gammas: Tuple[Fraction, ...]
    etas: Tuple[Fraction, ...]
    tolerance: Fraction = Fraction(1, 10)
    density: Fraction = Fraction(1, 2)


def _sweep_one(args) -> List[SweepRow]:
    config, k = args
    base = gen_instance(GenSpec(config.variant, config.n, config.m, seed=config.seed + k, density=config.density)).instance
    opt = optimal(base)
    rows = []
    if opt.value == 0:
        return rows
    for eta in config.etas:
        try:
            pred, _ = gen_prediction_with_error(base, eta, config.tolerance, optimum=opt)
        except TargetUnreachable as exc:
            pred = exc.closest_prediction
        inst = base.with_prediction(pred)
        iid = f"{config.variant.lower()}-{config.seed + k}-eta{eta}"
        for mech in config.mechanisms:
            for gamma in config.gammas:
                rows.append(evaluate(inst, iid, mech, gamma, opt.value, eta))
    return rows


def sweep(config: SweepConfig, jobs: int = 1) -> List[SweepRow]:
    for mech in config.mechanisms:
        if mech not in MECHANISMS:
            raise UnknownMechanism(mech)
    tasks = [(config, k) for k in range(config.count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_sweep_one, tasks))
    else:
        chunks = [_sweep_one(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    return sorted(rows, key=lambda r: (r.instance_id, r.mechanism, r.gamma))


# CSV


def _decimal(q: Fraction, up: bool) -> str:
    scale = 10**DIGITS
    k = math.ceil(q * scale) if up else math.floor(q * scale)
    sign = "-" if k < 0 else ""
    whole, frac = divmod(abs(k), scale)
    return f"{sign}{whole}.{frac:0{DIGITS}d}"


def _interval_strings(x: Exact) -> Tuple[str, str]:
    lo, hi = enclose(x, Fraction(1, 10**DIGITS))
    return _decimal(lo, False), _decimal(hi, True)


def row_to_csv(row: SweepRow) -> dict:
    value = row.value
    rational = not isinstance(value, Surd)
    lo, hi = _interval_strings(value)
    if row.bound is None:
        bound, blo, bhi = "none", "", ""
    else:
        bound = format_exact(row.bound)
        blo, bhi = _interval_strings(row.bound)
    return {
        "instance_id": row.instance_id,
        "variant": row.variant,
        "n": row.n,
        "m": row.m,
        "gamma": str(row.gamma),
        "eta_target": "" if row.eta_target is None else str(row.eta_target),
        "eta_achieved": str(row.eta_achieved),
        "mechanism": row.mechanism,
        "value_num": value.numerator if rational else "",
        "value_den": value.denominator if rational else "",
        "interval_lo": "" if rational else lo,
        "interval_hi": "" if rational else hi,
        "value_exact": format_exact(value),
        "opt_num": row.optimum.numerator,
        "opt_den": row.optimum.denominator,
        "bound": bound,
        "bound_lo": blo,
        "bound_hi": bhi,
        "pass": "true" if row.passed else "false",
    }


def write_csv(rows: Iterable[SweepRow], out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row_to_csv(row))


def read_csv(stream: TextIO) -> List[dict]:
    return list(csv.DictReader(stream))


def verify_record(record: dict) -> Tuple[bool, bool]:
    """Recompute the pass flag of a CSV record exactly.

    Returns (bound holds, recorded flag agrees with the recomputation).
    """
    gamma = Fraction(record["gamma"])
    eta = Fraction(record["eta_achieved"])
    value = parse_exact(record["value_exact"])
    opt = Fraction(int(record["opt_num"]), int(record["opt_den"]))
    holds = bound_holds(guarantee(record["mechanism"], gamma, eta), value, opt)
    return holds, (record["pass"] == "true") == holds

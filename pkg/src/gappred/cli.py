"""Command-line interface.

Exit codes: 0 when everything passes, 1 on usage or input errors, 2 when a
guarantee is violated, 3 when an incentive violation is found.
"""

from __future__ import annotations

import json
import os
import random
import sys
from typing import List, Optional

import click

from . import generators, harness, incentives
from .errors import GapPredError
from .instance import Instance, assignment_value, dump, load, parse_rational
from .mechanisms import DETERMINISTIC, make_mechanism
from .randomized import RANDOMIZED, expected_value, expected_value_interval
from .surd import format_exact

EXIT_BOUND = 2
EXIT_INCENTIVE = 3


def _rational(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_rational(value)
    except GapPredError as exc:
        raise click.BadParameter(str(exc)) from exc


def _rational_list(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(parse_rational(x) for x in value.split(",") if x.strip())
    except GapPredError as exc:
        raise click.BadParameter(str(exc)) from exc


def fixture_options(f):
    for opt in reversed((
        click.option("--fixture", "fixture_name", type=click.Choice(sorted(generators.FIXTURES)), help="Named fixture instead of a file."),
        click.option("--epsbar", callback=_rational, help="Perturbation of the two-agent fixtures."),
        click.option("--delta", callback=_rational, help="Split parameter of the fig5 fixtures."),
        click.option("--alpha", callback=_rational, help="Parameter of fig1a."),
        click.option("--beta", callback=_rational, help="Parameter of fig1b."),
        click.option("--eps", callback=_rational, help="Slack parameter of fig1 and fig3."),
    )):
        f = opt(f)
    return f


def build_fixture(name: str, gamma, epsbar, delta, alpha, beta, eps) -> Instance:
    def need(value, label):
        if value is None:
            raise click.UsageError(f"fixture {name} needs --{label}")
        return value

    if name.startswith("fig3"):
        return generators.FIXTURES[name](need(gamma, "gamma"), need(epsbar, "epsbar"), eps)
    if name.startswith("fig5"):
        return generators.FIXTURES[name](need(delta, "delta"), need(epsbar, "epsbar"), gamma)
    if name == "fig1a":
        return generators.fig1a(need(alpha, "alpha"), need(eps, "eps"))
    if name == "fig1b":
        return generators.fig1b(need(beta, "beta"), need(eps, "eps"))
    return generators.FIXTURES[name]()


def resolve_instance(path, fixture_name, gamma, epsbar, delta, alpha, beta, eps) -> Instance:
    if (path is None) == (fixture_name is None):
        raise click.UsageError("give exactly one of --instance or --fixture")
    if path is not None:
        return load(path)
    return build_fixture(fixture_name, gamma, epsbar, delta, alpha, beta, eps)


def _edges(assignment) -> List[List[int]]:
    return assignment.to_list()


@click.group()
@click.version_option(package_name="artifact")
@click.option("--budget", type=click.IntRange(min=1), help="Branch-and-bound node budget of the exact oracle.")
def main(budget):
    """Learning-augmented assignment mechanisms with private edge sets."""
    if budget is not None:
        # Through the environment so sweep worker processes see it too.
        os.environ["GAPPRED_BUDGET"] = str(budget)


@main.command()
@click.option("--mechanism", required=True, type=click.Choice(DETERMINISTIC + tuple(RANDOMIZED)))
@click.option("--gamma", default="1", callback=_rational, help="Confidence parameter, at least 1.")
@click.option("--instance", "path", type=click.Path(exists=True, dir_okay=False))
@fixture_options
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), help="Write mechanism steps as JSON lines.")
@click.option("--sample-seed", type=int, help="Also draw one outcome of a randomized mechanism.")
def solve(mechanism, gamma, path, fixture_name, epsbar, delta, alpha, beta, eps, trace_path, sample_seed):
    """Run one mechanism on one instance."""
    inst = resolve_instance(path, fixture_name, gamma, epsbar, delta, alpha, beta, eps)
    out = {"mechanism": mechanism, "gamma": str(gamma)}
    traces = []
    if mechanism in RANDOMIZED:
        dist = RANDOMIZED[mechanism](gamma)(inst)
        out["outcomes"] = [
            {"label": o.label, "probability": format_exact(o.probability), "assignment": _edges(o.assignment),
             "value": str(assignment_value(inst, o.assignment))}
            for o in dist
        ]
        ev = expected_value(inst, dist)
        lo, hi = expected_value_interval(inst, dist)
        out["expected_value"] = format_exact(ev)
        out["expected_value_interval"] = [float(lo), float(hi)]
        traces = [(o.label, e) for o in dist for e in o.assignment.trace]
        if sample_seed is not None:
            out["sample"] = dist.sample(random.Random(sample_seed)).label
    else:
        result = make_mechanism(mechanism, gamma)(inst)
        out["assignment"] = _edges(result)
        out["value"] = str(assignment_value(inst, result))
        traces = [(mechanism, e) for e in result.trace]
    if trace_path:
        with open(trace_path, "w") as fh:
            for label, event in traces:
                fh.write(json.dumps({"component": label, **event.to_dict()}) + "\n")
    click.echo(json.dumps(out, indent=2))


@main.command()
@click.option("--variant", required=True, type=click.Choice([v.lower() for v in generators.VARIANTS] + list(generators.VARIANTS)))
@click.option("--mechanisms", required=True, help="Comma-separated mechanism names.")
@click.option("--gamma", "gammas", default="1,2,3", callback=_rational_list)
@click.option("--eta", "etas", default="0,1/4,1/2,1", callback=_rational_list)
@click.option("--n", default=4, show_default=True)
@click.option("--m", default=3, show_default=True)
@click.option("--count", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--density", default="1/2", callback=_rational)
@click.option("--tolerance", default="1/10", callback=_rational, help="Allowed gap between target and achieved error.")
@click.option("--out", type=click.File("w"), default="-", help="CSV output (default stdout).")
@click.option("--json", "json_out", type=click.File("w"), help="Also write rows as JSON.")
@click.option("--jobs", default=1, show_default=True)
def sweep(variant, mechanisms, gammas, etas, n, m, count, seed, density, tolerance, out, json_out, jobs):
    """Run mechanisms over a gamma grid and error targets; write one CSV row per point."""
    config = harness.SweepConfig(
        variant.upper(), n, m, count, seed, tuple(x.strip() for x in mechanisms.split(",") if x.strip()),
        gammas, etas, tolerance, density,
    )
    rows = harness.sweep(config, jobs=jobs)
    harness.write_csv(rows, out)
    if json_out:
        json.dump([harness.row_to_csv(r) for r in rows], json_out, indent=2)
    failed = [r for r in rows if not r.passed]
    click.echo(f"{len(rows)} rows, {len(failed)} bound violations", err=True)
    sys.exit(EXIT_BOUND if failed else 0)


@main.command("verify-bounds")
@click.argument("csv_path", type=click.File("r"))
def verify_bounds(csv_path):
    """Recompute every pass flag of a sweep CSV exactly."""
    records = harness.read_csv(csv_path)
    violations = mismatched = 0
    for rec in records:
        holds, agrees = harness.verify_record(rec)
        violations += not holds
        mismatched += not agrees
    click.echo(f"{len(records)} rows checked, {violations} bound violations, {mismatched} stale pass flags")
    sys.exit(EXIT_BOUND if violations or mismatched else 0)


@main.command("test-incentives")
@click.option("--mechanism", required=True, type=click.Choice(DETERMINISTIC + tuple(RANDOMIZED) + ("oracle",)))
@click.option("--gamma", default="1", callback=_rational)
@click.option("--instance", "path", type=click.Path(exists=True, dir_okay=False))
@fixture_options
@click.option("--variant", help="Generate random instances of this variant instead.")
@click.option("--count", default=10, show_default=True)
@click.option("--n", default=3, show_default=True)
@click.option("--m", default=3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--coalition", default=1, show_default=True, help="Largest coalition size.")
@click.option("--others", type=click.Choice(["truthful", "declared"]), default="truthful")
@click.option("--hiding-only", is_flag=True, help="Only allow agents to hide true edges.")
@click.option("--limit", default=incentives.DEFAULT_LIMIT, show_default=True)
@click.option("--out", type=click.File("w"), help="Write the full report as JSON.")
def test_incentives(mechanism, gamma, path, fixture_name, epsbar, delta, alpha, beta, eps, variant, count, n, m,
                    seed, coalition, others, hiding_only, limit, out):
    """Search exhaustively for profitable misreports."""
    if variant:
        instances = [
            (f"{variant.lower()}-{seed + k}",
             generators.gen_instance(generators.GenSpec(variant.upper(), n, m, seed=seed + k)).instance)
            for k in range(count)
        ]
    else:
        instances = [("input", resolve_instance(path, fixture_name, gamma, epsbar, delta, alpha, beta, eps))]
    if mechanism in RANDOMIZED:
        mixer = RANDOMIZED[mechanism](gamma)
        components = [(label, mech) for label, _, mech in mixer.components]
    elif mechanism == "oracle":
        components = [("oracle", incentives.oracle_strawman)]
    else:
        components = [(mechanism, make_mechanism(mechanism, gamma))]
    report = []
    total = 0
    click.echo(f"{'instance':<16}{'component':<16}{'checked':>10}{'violations':>12}")
    for iid, inst in instances:
        for label, mech in components:
            rep = incentives.check_coalitions(mech, inst, coalition, others=others, hiding_only=hiding_only, limit=limit)
            total += len(rep.violations)
            click.echo(f"{iid:<16}{label:<16}{rep.deviations_checked:>10}{len(rep.violations):>12}")
            report.append({"instance": iid, "component": label, "checked": rep.deviations_checked,
                           "violations": [v.to_dict() for v in rep.violations]})
    if out:
        json.dump(report, out, indent=2)
    sys.exit(EXIT_INCENTIVE if total else 0)


@main.command()
@click.option("--variant", required=True)
@click.option("--n", required=True, type=int)
@click.option("--m", required=True, type=int)
@click.option("--seed", default=0, show_default=True)
@click.option("--density", default="1/2", callback=_rational)
@click.option("--eta", callback=_rational, help="Target prediction error.")
@click.option("--tolerance", default="1/20", callback=_rational)
@click.option("--out", type=click.Path(dir_okay=False), help="Instance file (default stdout).")
def gen(variant, n, m, seed, density, eta, tolerance, out):
    """Generate a random instance."""
    spec = generators.GenSpec(variant.upper(), n, m, seed=seed, density=density, target_eta=eta, eta_tolerance=tolerance)
    g = generators.gen_instance(spec)
    _emit(g.instance, out)
    click.echo(json.dumps({k: str(v) for k, v in g.metadata.items()}), err=True)


@main.command()
@click.argument("name", type=click.Choice(sorted(generators.FIXTURES)))
@click.option("--gamma", callback=_rational)
@click.option("--epsbar", callback=_rational)
@click.option("--delta", callback=_rational)
@click.option("--alpha", callback=_rational)
@click.option("--beta", callback=_rational)
@click.option("--eps", callback=_rational)
@click.option("--out", type=click.Path(dir_okay=False), help="Instance file (default stdout).")
def fixture(name, gamma, epsbar, delta, alpha, beta, eps, out):
    """Write a named fixture instance."""
    _emit(build_fixture(name, gamma, epsbar, delta, alpha, beta, eps), out)


def _emit(inst: Instance, out: Optional[str]) -> None:
    if out:
        dump(inst, out)
    else:
        click.echo(inst.to_json(indent=2))


def run(argv=None) -> int:
    """Invoke the CLI, mapping library errors to exit status 1."""
    try:
        main.main(args=argv, standalone_mode=False)
    except SystemExit as exc:
        return int(exc.code or 0)
    except click.ClickException as exc:
        exc.show()
        return 1
    except (GapPredError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


def entry() -> None:
    sys.exit(run())

"""Command-line front end.

Every subcommand wraps one library entry point and keeps its output
exact: chip counts and mixture weights print as integers or p/q
fractions, never floats.  Exit status follows the usual triple: 0 when
the requested check or computation succeeds, 1 when a verification
fails (a configuration that is not an outcome, a sweep that found a
counterexample), 2 for usage errors including unreadable or malformed
input files.

Configuration files are accepted in either format: the rendered
triangle (rows top down, ``·`` or ``.`` for empty points) or the JSON
object emitted by ``chipsplit parse``.
"""

from __future__ import annotations

import json
import sys
from collections import Counter
from pathlib import Path

import click

from .criteria import hexagon_determinant
from .enumeration import (
    EnumerationReport,
    check_conjecture,
    enumerate_fundamental,
    sweep_no_valid_outcomes,
)
from .grid import ChipConfiguration, config_from_json, config_to_json
from .grid import parse as parse_triangle
from .grid import render as render_triangle
from .hyperfield import gamma_set
from .models import decompose, is_fundamental, model_to_json, outcome_to_model, tightness_family
from .pascal import is_outcome, top_edge_values
from .pipeline import pipeline_summary


def _input_error(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_configuration(path: str) -> ChipConfiguration:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        _input_error(f"{path}: {exc.strerror or exc}")
    try:
        if text.lstrip().startswith("{"):
            return config_from_json(text)
        return parse_triangle(text)
    except ValueError as exc:
        _input_error(f"{path}: {exc}")


def _echo_json(payload):
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


@click.group()
@click.version_option(package_name="artifact", message="%(version)s")
def main():
    """Chipsplitting games: outcomes, censuses, and exclusion sweeps."""


@main.command()
@click.argument("file", type=click.Path())
@click.option("--ascii-dot", is_flag=True, help="Mark empty points with '.' instead of '·'.")
def render(file, ascii_dot):
    """Draw a configuration file as a triangle."""
    config = _load_configuration(file)
    click.echo(render_triangle(config, empty="." if ascii_dot else "·"))


@main.command("parse")
@click.argument("file", type=click.Path())
def parse_command(file):
    """Read a triangle file and emit the configuration as JSON."""
    config = _load_configuration(file)
    click.echo(config_to_json(config))


@main.command("is-outcome")
@click.argument("file", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Machine-readable verdict.")
def is_outcome_command(file, as_json):
    """Check whether a configuration is reachable from the empty board."""
    config = _load_configuration(file)
    verdict = is_outcome(config)
    degree = max(config.degree, 0)
    if as_json:
        _echo_json({"outcome": verdict, "degree": degree})
    elif verdict:
        click.echo(f"outcome: reachable at degree {degree}")
    else:
        values = top_edge_values(config)
        bad = next(a for a, v in enumerate(values) if v != 0)
        click.echo(
            f"not an outcome: top-edge form at ({bad}, {degree - bad}) "
            f"evaluates to {values[bad]}"
        )
    sys.exit(0 if verdict else 1)


@main.command("fundamental")
@click.argument("file", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Machine-readable verdict.")
def fundamental_command(file, as_json):
    """Check whether a configuration is a fundamental outcome."""
    config = _load_configuration(file)
    reasons = []
    if not is_outcome(config):
        reasons.append("not an outcome")
    if config[(0, 0)] >= 0 or not config.is_valid():
        reasons.append("not valid with a chip debt at the origin")
    verdict = not reasons and is_fundamental(config.positive_support, config.degree)
    if not verdict and not reasons:
        reasons.append("its positive support carries no fundamental outcome")
    if as_json:
        _echo_json(
            {
                "fundamental": verdict,
                "degree": config.degree,
                "positive_support": sorted(config.positive_support),
                "reasons": reasons,
            }
        )
    elif verdict:
        click.echo(f"fundamental outcome of degree {config.degree}")
    else:
        click.echo("not fundamental: " + "; ".join(reasons))
    sys.exit(0 if verdict else 1)


@main.command("decompose")
@click.argument("file", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Machine-readable chain.")
def decompose_command(file, as_json):
    """Write a valid outcome's model as a chain of fundamental models."""
    config = _load_configuration(file)
    try:
        model = outcome_to_model(config)
        chain = decompose(model)
    except ValueError as exc:
        _input_error(f"{file}: {exc}")
    if as_json:
        _echo_json(
            {
                "models": [json.loads(model_to_json(m)) for m in chain.models],
                "mus": [str(mu) for mu in chain.mus],
            }
        )
        return
    click.echo(f"composite of {len(chain.models)} fundamental model(s)")
    for index, m in enumerate(chain.models, start=1):
        terms = " + ".join(f"{w}*({i},{j})" for w, i, j in m.terms)
        click.echo(f"  model {index} (degree {m.degree}): {terms}")
    for index, mu in enumerate(chain.mus, start=1):
        click.echo(f"  mu_{index} = {mu}")


def _filter_report(report: EnumerationReport, size: int) -> EnumerationReport:
    n = size - 1
    table = {cell: count for cell, count in report.table.items() if cell[0] == n}
    outcomes = tuple(
        w for w in report.outcomes if len(w.positive_support) == size
    )
    stats = dict(report.stats)
    stats["support_filter"] = size
    return EnumerationReport(table, outcomes, stats)


@main.command("enumerate")
@click.option("--max-degree", type=click.IntRange(1), required=True)
@click.option("--support", type=click.IntRange(2), default=None,
              help="Keep only outcomes with exactly this many positive entries.")
@click.option("--json", "as_json", is_flag=True, help="Full report as JSON.")
@click.option("--jobs", type=click.IntRange(1), default=None)
@click.option("--resume", is_flag=True, help="Reuse per-cell cache files.")
@click.option("--long-run", is_flag=True, help="Admit hours-scale census cells.")
def enumerate_command(max_degree, support, as_json, jobs, resume, long_run):
    """Census of fundamental outcomes up to a degree bound."""
    n_max = (support - 1) if support else min(5, max_degree)
    report = enumerate_fundamental(
        max_degree, n_max, long_run=long_run, jobs=jobs, resume=resume
    )
    if support:
        report = _filter_report(report, support)
    if as_json:
        _echo_json(report.to_json())
        return
    if not report.table:
        click.echo("no fundamental outcomes in range")
    for n in sorted({cell[0] for cell in report.table}):
        row = {d: c for (m, d), c in report.table.items() if m == n}
        cells = "  ".join(f"d={d}: {row[d]}" for d in sorted(row))
        click.echo(f"support {n + 1} (n={n}):  {cells}  (total {sum(row.values())})")
    click.echo(f"outcomes: {len(report.outcomes)}")
    skipped = report.stats.get("skipped_cells") or []
    if skipped:
        cells = ", ".join(f"(n={n}, d={d})" for n, d in skipped)
        click.echo(f"skipped long-run cells: {cells} (rerun with --long-run)")
    conjecture = check_conjecture(report)
    if not conjecture.holds:
        click.echo("degree bound violated!", err=True)
        sys.exit(1)


_SWEEP_START = {4: 6, 5: 8}


@main.command("sweep")
@click.option("--support", type=click.Choice(["4", "5"]), required=True,
              help="Number of positive entries to rule out.")
@click.option("--max-degree", type=click.IntRange(1), required=True)
@click.option("--json", "as_json", is_flag=True)
@click.option("--jobs", type=click.IntRange(1), default=None)
@click.option("--long-run", is_flag=True, help="Admit degrees beyond the desk range.")
def sweep_command(support, max_degree, as_json, jobs, long_run):
    """Certify degrees that host no valid outcome of a given width."""
    n_plus = int(support)
    start = _SWEEP_START[n_plus]
    if max_degree < start:
        _input_error(f"--max-degree must be at least {start} for width {n_plus}")
    try:
        certificates = sweep_no_valid_outcomes(
            n_plus, range(start, max_degree + 1), long_run=long_run, jobs=jobs
        )
    except ValueError as exc:
        _input_error(str(exc))
    holds = all(cert.holds for cert in certificates)
    if as_json:
        _echo_json(
            {
                "holds": holds,
                "certificates": [cert.to_json() for cert in certificates],
            }
        )
    else:
        for cert in certificates:
            tally = Counter(cert.resolutions)
            detail = (
                ", ".join(f"{how}: {count}" for how, count in sorted(tally.items()))
                if tally
                else "none"
            )
            state = "holds" if cert.holds else "REFUTED"
            click.echo(
                f"degree {cert.d}: {len(cert.sign_survivors)} sign survivors "
                f"({detail}) -> {state}"
            )
        click.echo(
            f"no valid outcome with {n_plus} positive entries in degrees "
            f"{start}..{max_degree}" if holds else "sweep refuted; see above"
        )
    sys.exit(0 if holds else 1)


@main.command("gamma")
@click.option("--parity", type=click.Choice(["even", "odd"]), required=True)
@click.option("--support", type=click.IntRange(1, 5), default=5, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Include the members.")
def gamma_command(parity, support, as_json):
    """Count the contraction points surviving every descended form."""
    members = gamma_set(parity, support)
    if as_json:
        _echo_json(
            {
                "parity": parity,
                "support": support,
                "count": len(members),
                "members": [p.record() for p in members],
            }
        )
    else:
        click.echo(
            f"gamma set ({parity} degrees, {support} positive entries): "
            f"{len(members)} contraction points"
        )


@main.command("pipeline")
@click.option("--json", "as_json", is_flag=True, help="Counts and per-case verdicts.")
def pipeline_command(as_json):
    """Run every high-degree contraction case through the eliminators."""
    report = pipeline_summary()
    survivors = report.survivors()
    if as_json:
        _echo_json(report.to_json())
    else:
        total = len(report.verdicts)
        click.echo(f"cases: {total}")
        for stage in ("invertibility", "symmetry", "hexagon", "special"):
            click.echo(f"  eliminated by {stage}: {report.counts[stage]}")
        click.echo(f"  survivors: {report.counts['survivor']}")
    sys.exit(0 if not survivors else 1)


def _admissible_hexagons(d_max: int):
    for d in range(3, d_max + 1):
        for d_small in range(1, d // 3 + 1):
            for ell1 in range(d_small, d - 2 * d_small + 1):
                if d - d_small - ell1 >= d_small:
                    yield d, d_small, ell1


@main.command("hexagon")
@click.option("--max-degree", type=click.IntRange(3), default=20, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def hexagon_command(max_degree, as_json):
    """Verify the hexagon determinants up to a degree bound."""
    checked = 0
    zeros = []
    conventions = Counter()
    for d, d_small, ell1 in _admissible_hexagons(max_degree):
        result = hexagon_determinant(d, d_small, ell1)
        checked += 1
        conventions[result.matching] += 1
        if not result.nonzero():
            zeros.append((d, d_small, ell1))
    note = (
        "direct determinants match the shifted superfactorial product; "
        "the literal-index product disagrees"
    )
    if as_json:
        _echo_json(
            {
                "max_degree": max_degree,
                "checked": checked,
                "zero_determinants": [list(t) for t in zeros],
                "conventions": dict(sorted(conventions.items())),
                "note": note,
            }
        )
    else:
        click.echo(f"checked {checked} admissible (d, d', l1) triples up to degree {max_degree}")
        click.echo("all determinants nonzero" if not zeros else f"ZERO determinants at {zeros}")
        click.echo(f"convention: {note} ({dict(sorted(conventions.items()))})")
    sys.exit(0 if not zeros else 1)


@main.command("family")
@click.option("--k", type=click.IntRange(0), required=True)
@click.option("--render", "do_render", is_flag=True,
              help="Print the triangle inline, blank rows elided.")
@click.option("--json", "as_json", is_flag=True)
def family_command(k, do_render, as_json):
    """The degree-(2k+1) outcome family attaining the conjectured bound."""
    outcome = tightness_family(k)
    if not is_outcome(outcome):
        click.echo("family member failed the outcome check", err=True)
        sys.exit(1)
    if as_json:
        _echo_json(json.loads(config_to_json(outcome)))
        return
    if do_render:
        lines = render_triangle(outcome).splitlines()
        filled = [line for line in lines if any(t not in ("·", ".") for t in line.split())]
        click.echo(" / ".join(filled))
        return
    click.echo(
        f"degree {outcome.degree}, {len(outcome.positive_support)} positive entries, "
        "origin debt " + str(-outcome[(0, 0)])
    )


if __name__ == "__main__":
    main()

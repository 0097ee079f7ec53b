from concurrent.futures import ThreadPoolExecutor

import attr
import click
import structlog

from .. import settings
from ..catalog import report_notes, resolve
from ..rational import format_rat
from ..serializers import report_to_json, write_json
from ..solver import SolverOptions, decide_stability
from .options import DILATIONS, RATIONAL, polytope_options


logger = structlog.get_logger(__name__)


def run_batch(polytope, group, ks, options, workers):
    """Reports for every k, in input order; each thread runs its own solver."""

    def run(k):
        report = decide_stability(polytope, k, group=group, options=options)
        return attr.evolve(report, notes=report.notes + report_notes(report))

    if workers <= 1 or len(ks) == 1:
        return [run(k) for k in ks]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run, ks))


@click.command("analyze")
@polytope_options(k=False)
@click.option(
    "--k", "ks", type=DILATIONS, required=True, help="dilations: 2, 1,2 or 1..3"
)
@click.option("--no-weyl", is_flag=True, help="search all height vectors")
@click.option("--max-iters", type=click.IntRange(min=1), help="cutting-plane cap")
@click.option("--box-bound", type=RATIONAL, help="rational, e.g. 1/2")
@click.option("--workers", type=click.IntRange(min=1), help="threads for several k")
@click.option(
    "--json", "json_path", type=click.Path(dir_okay=False), help="write the report(s)"
)
def command(
    polytope, group_path, ks, no_weyl, max_iters, box_bound, workers, json_path
):
    """Decide Chow polystability of (X, L^k) exactly."""
    polytope, group = resolve(polytope, group_path)

    overrides = {"weyl": not no_weyl}
    if max_iters is not None:
        overrides["max_iters"] = max_iters
    if box_bound is not None:
        overrides["box_bound"] = box_bound
    options = SolverOptions(**overrides)

    reports = run_batch(polytope, group, ks, options, workers or settings.WORKERS)

    for report in reports:
        line = (
            f"{polytope.name} k={report.k}: {report.verdict} "
            f"j_min={format_rat(report.j_min)}"
        )
        if report.certificate_j is not None:
            line += f" certificate J={format_rat(report.certificate_j)}"
        click.echo(line)
        for note in report.notes:
            click.echo(f"  {note}")

    if json_path:
        data = [report_to_json(r) for r in reports]
        write_json(json_path, data[0] if len(data) == 1 else data)

    logger.info("analyze finished", polytope=polytope.name, ks=ks)

import click
from tabulate import tabulate

from .. import settings
from ..estimates import SUITES, run_suite
from ..serializers import estimate_to_json, write_json
from .options import DILATIONS


@click.command("verify")
@click.option("--suite", type=click.Choice(sorted(SUITES)), required=True)
@click.option("--seed", type=int, default=None)
@click.option("--k", "ks", type=DILATIONS, help="dilations: 2, 1,2 or 1..3")
@click.option("--samples", type=click.IntRange(min=1), default=100)
@click.option(
    "--json", "json_path", type=click.Path(dir_okay=False), help="write the reports"
)
@click.pass_context
def command(ctx, suite, seed, ks, samples, json_path):
    """Run one of the exact estimate suites; exits 1 if any report fails."""
    seed = settings.SEED if seed is None else seed
    reports = run_suite(suite, ks=ks, samples=samples, seed=seed)

    rows = [
        [r.estimate, r.parameters.get("k", r.parameters.get("k_max")), r.status]
        for r in reports
    ]
    click.echo(tabulate(rows, headers=["estimate", "k", "status"]))

    for report in reports:
        if "threshold" in report.details:
            click.echo(f"delta table threshold: k >= {report.details['threshold']}")
            break

    if json_path:
        write_json(json_path, [estimate_to_json(r) for r in reports])

    if not all(r.passed for r in reports):
        ctx.exit(1)

import click

from ..catalog import resolve
from ..chow import barycenter_test
from ..serializers import barycenter_to_json, write_json
from .options import polytope_options


@click.command("barycenter")
@polytope_options()
@click.option(
    "--json", "json_path", type=click.Path(dir_okay=False), help="write the report"
)
def command(polytope, group_path, k, json_path):
    """Compare the lattice-point average of k△ with its centroid."""
    polytope, _ = resolve(polytope, group_path)
    report = barycenter_test(polytope, k)
    data = barycenter_to_json(report)

    for key in ("discrete", "continuous", "mismatch"):
        x, y = data[key]
        click.echo(f"{key}: ({x}, {y})")
    click.echo(f"passes: {report.passes}")

    if json_path:
        write_json(json_path, data)

import click

from ..catalog import resolve
from ..rational import format_rat
from ..serializers import heights_from_json, read_json
from ..solver import verify_certificate
from .options import polytope_options


@click.command("certify")
@polytope_options()
@click.option(
    "--heights",
    "heights_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="heights JSON file",
)
def command(polytope, group_path, k, heights_path):
    """Recompute the Chow weight of a height vector along every path."""
    polytope, _ = resolve(polytope, group_path)
    phi = heights_from_json(read_json(heights_path), polytope, k)

    value = verify_certificate(polytope, k, phi)
    click.echo(f"J = {format_rat(value)}")

import click

from ..catalog import resolve
from ..polytope import ehrhart
from ..rational import format_rat
from .options import polytope_options


@click.command("ehrhart")
@polytope_options(k=False)
def command(polytope, group_path):
    """Print vol, boundary count and the Ehrhart polynomial of a polytope."""
    polytope, _ = resolve(polytope, group_path)
    data = ehrhart(polytope)

    click.echo(f"vol = {format_rat(data.vol)}")
    click.echo(f"b = {data.b}")
    click.echo(str(data.chi))

import click
from tabulate import tabulate

from ..catalog import catalog_rows, load_catalog


HEADERS = ["id", "vertices", "|W|", "points", "area", "K^2", "polarization", "variety"]


@click.command("catalog")
def command():
    """List the catalog polytopes with their Weyl groups and provenance."""
    click.echo(tabulate(catalog_rows(), headers=HEADERS))
    click.echo()
    for entry in load_catalog().values():
        click.echo(f"{entry.id}: {entry.provenance}")

from pathlib import Path

import click

from ..catalog import resolve
from ..plotting import render_svg
from ..serializers import heights_from_json, read_json
from .options import polytope_options


@click.command("plot")
@polytope_options()
@click.option(
    "--heights",
    "heights_path",
    type=click.Path(exists=True, dir_okay=False),
    help="heights JSON file",
)
@click.option(
    "--out", type=click.Path(dir_okay=False), required=True, help="SVG file to write"
)
def command(polytope, group_path, k, heights_path, out):
    """Draw k△, its lattice points and optionally the subdivision of f_φ."""
    polytope, _ = resolve(polytope, group_path)

    phi = None
    if heights_path:
        phi = heights_from_json(read_json(heights_path), polytope, k)

    Path(out).write_text(render_svg(polytope, k, phi))
    click.echo(f"wrote {out}")

import click

from ..exceptions import InputError
from ..rational import parse_rat


class Dilations(click.ParamType):
    """Dilations written as 2, 1,2 or 1..3."""

    name = "dilations"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value

        try:
            if ".." in value:
                lo, hi = value.split("..")
                ks = list(range(int(lo), int(hi) + 1))
            else:
                ks = [int(part) for part in value.split(",")]
        except ValueError:
            self.fail(
                f"Invalid dilations {value!r}, expected 2, 1,2 or 1..3", param, ctx
            )

        if not ks or any(k <= 0 for k in ks):
            self.fail(f"Dilations must be positive, got {value!r}", param, ctx)
        return ks


class Rational(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        try:
            return parse_rat(value)
        except InputError as exc:
            self.fail(str(exc), param, ctx)


DILATIONS = Dilations()
RATIONAL = Rational()


def polytope_options(k=True):
    """--polytope and --group, and a single --k unless the command parses its own."""

    def decorator(command):
        if k:
            command = click.option(
                "--k", type=click.IntRange(min=1), required=True, help="dilation"
            )(command)
        command = click.option(
            "--group",
            "group_path",
            type=click.Path(exists=True, dir_okay=False),
            help="JSON file of Weyl group generators",
        )(command)
        return click.option(
            "--polytope",
            required=True,
            help="catalog id (X1..X4) or a polytope JSON file",
        )(command)

    return decorator

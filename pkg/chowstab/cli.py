import logging.config

import click
import sentry_sdk
import structlog

from services.logging import logging_config_dict
from services.sentry import initialise_sentry

from .commands import analyze, barycenter, catalog, certify, ehrhart, plot, verify
from .exceptions import InputError, InvariantError, IterationLimitExceeded


logger = structlog.get_logger(__name__)

EXIT_INPUT = 2
EXIT_ITERATION_LIMIT = 3
EXIT_INVARIANT = 4


class ChowstabGroup(click.Group):
    """Turns the package's errors into exit codes."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except IterationLimitExceeded as exc:
            click.echo(str(exc), err=True)
            ctx.exit(EXIT_ITERATION_LIMIT)
        except InvariantError as exc:
            sentry_sdk.capture_exception(exc)
            logger.error("invariant failed", error=str(exc))
            click.echo(f"internal error: {exc}", err=True)
            ctx.exit(EXIT_INVARIANT)
        except (InputError, FileNotFoundError) as exc:
            click.echo(str(exc), err=True)
            ctx.exit(EXIT_INPUT)


@click.group(cls=ChowstabGroup)
def cli():
    """Exact Chow polystability of polarized toric surfaces."""


for module in (catalog, analyze, barycenter, certify, ehrhart, verify, plot):
    cli.add_command(module.command)


def main(argv=None):
    logging.config.dictConfig(logging_config_dict)
    initialise_sentry()
    return cli.main(args=argv, prog_name="chowstab")

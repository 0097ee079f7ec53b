import sentry_sdk
import structlog
from environs import Env


env = Env()
logger = structlog.get_logger(__name__)


def initialise_sentry():
    """
    Report to Sentry when SENTRY_DSN is set

    The CLI captures invariant failures explicitly; nothing else is sent.
    """
    dsn = env.str("SENTRY_DSN", default=None)
    environment = env.str("SENTRY_ENVIRONMENT", default="localhost")

    if dsn is None:
        return

    sentry_sdk.init(dsn, environment=environment)
    logger.debug("sentry initialised", environment=environment)

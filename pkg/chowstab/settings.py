from environs import Env

from .rational import parse_rat


env = Env()

# default seed for every sample generator, so suites replay exactly
SEED = env.int("CHOWSTAB_SEED", default=2021)

MAX_ITERS = env.int("CHOWSTAB_MAX_ITERS", default=10000)

# threads used when `analyze` is given several dilations
WORKERS = env.int("CHOWSTAB_WORKERS", default=1)

BOX_BOUND = parse_rat(env.str("CHOWSTAB_BOX_BOUND", default="1"))

# certificates whose scaled integral heights exceed this skip the 3D oracle
ORACLE_MAX_HEIGHT = env.int("CHOWSTAB_ORACLE_MAX_HEIGHT", default=24)

# level of the "chowstab" logger in services.logging
LOG_LEVEL = env.str("CHOWSTAB_LOG_LEVEL", default="INFO")

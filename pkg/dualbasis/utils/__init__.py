from dualbasis.utils.linalg import *
from dualbasis.utils.logging import get_logger, log_context, set_loglevel, use_dualbasis_log_handler

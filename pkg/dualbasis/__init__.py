from dualbasis.core import *
from dualbasis.identities import *
from dualbasis.metric import *
from dualbasis.reciprocal import *
from dualbasis.utils import get_logger, log_context, use_dualbasis_log_handler
from dualbasis.verification import *

__version__ = "0.1.0"

import numpy as np
import pytest

from dualbasis.utils.logging import get_logger, use_dualbasis_log_handler

use_dualbasis_log_handler("in_root_logger")
logger = get_logger(__name__)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

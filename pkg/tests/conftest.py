import warnings

import numpy as np
import pytest

from hn4walk import experiments as ex


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture(scope="session")
def catalog_results():
    """Every catalog experiment, all four coins, at the catalog horizons."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return {spec.id: ex.run(spec) for spec in ex.catalog()}

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from tsppath.instance import metric_from_graph


@pytest.fixture
def triangle():
    """Unit triangle with endpoints s=0, t=2."""
    return metric_from_graph(3, [(0, 1), (1, 2), (0, 2)], 0, 2)


@pytest.fixture
def c4():
    """Unit 4-cycle s=0, a=1, t=2, b=3 with s,t antipodal."""
    return metric_from_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)], 0, 2)

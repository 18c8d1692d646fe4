import pytest

from assignalloc import Instance, UtilityFunction


@pytest.fixture
def tight_instance() -> Instance:
    """Three threads, two servers of two units each.

    The first two threads gain a full unit of utility from their first
    resource unit and nothing more; the third gains half a unit per resource
    unit.  The exact optimum is 3 (steep pair together), while both
    approximation algorithms land at 2.5.
    """
    steep = UtilityFunction(((0, 0.0), (1, 1.0), (2, 1.0)), name="t1")
    steep2 = UtilityFunction(((0, 0.0), (1, 1.0), (2, 1.0)), name="t2")
    shallow = UtilityFunction(((0, 0.0), (2, 1.0)), name="t3")
    return Instance(servers=2, capacity=2, threads=(steep, steep2, shallow))

import pytest
from hypothesis import HealthCheck, settings

from partmax.cnf import MaxSatInstance, SoftClause

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")

# Two variable triangles (v1,v2,v3) and (v4,v5,v6) bridged by one clause,
# with a unit soft against one variable of each "side" pair. Optimum cost 2.
TWO_TRIANGLES_HARD = [
    (1, 2),
    (-2, 3),
    (-1, -3),
    (4, 5),
    (-5, 6),
    (-4, -6),
    (-3, -6),
]
TWO_TRIANGLES_SOFT = [(-1,), (-3,), (-4,), (-6,)]

TWO_TRIANGLES_WCNF = """c two bridged variable triangles with four unit softs
p wcnf 6 11 8
8 1 2 0
8 -2 3 0
8 -1 -3 0
8 4 5 0
8 -5 6 0
8 -4 -6 0
8 -3 -6 0
1 -1 0
1 -3 0
1 -4 0
1 -6 0
"""

# The same formula in pwcnf form with three user partitions; soft labels are
# 1, 2, 3, 3 for the softs on v1, v3, v4, v6 respectively.
TWO_TRIANGLES_PWCNF = """p pwcnf 6 11 7 3
1 7 -1 -3 0
3 7 -4 -6 0
2 1 -3 0
1 7 1 2 0
3 7 4 5 0
2 7 -3 -6 0
3 1 -4 0
2 7 -2 3 0
3 7 -5 6 0
1 1 -1 0
3 1 -6 0
"""


def two_triangles_instance() -> MaxSatInstance:
    soft = [SoftClause(lits, 1) for lits in TWO_TRIANGLES_SOFT]
    return MaxSatInstance(n_vars=6, hard=list(TWO_TRIANGLES_HARD), soft=soft, top=8)


@pytest.fixture
def two_triangles() -> MaxSatInstance:
    return two_triangles_instance()


def assert_valid_result(inst, res):
    """Every optimum must come with a model that satisfies the hard clauses
    and whose falsified-soft weight equals the reported cost."""
    assert res.model is not None
    assert inst.hard_satisfied(res.model)
    assert inst.cost_of(res.model) == res.cost

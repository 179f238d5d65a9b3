import numpy as np
import pytest

# filled by the acceptance module; echoed after the run so the
# per-criterion verdict survives output capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from duke.instances import (
    EXAMPLE_K,
    EXAMPLE_KCENTER_RADIUS,
    EXAMPLE_KCENTER_WEIGHT,
    EXAMPLE_LAMBDA,
    EXAMPLE_METRIC,
    EXAMPLE_OPT_OBJECTIVE,
    EXAMPLE_OPT_RADIUS,
    EXAMPLE_OPT_SUBSET,
    EXAMPLE_OPT_WEIGHT,
    gen_worked_example,
)
from duke.oracle import brute_force_kcenter, brute_force_weighted


@pytest.fixture(scope="session")
def worked_example():
    """Worked example, certified against brute force before any golden
    test consumes it. Every advertised constant is re-derived here by
    exhaustive enumeration; if this fixture ever drifts, the whole tier
    of hand-checked assertions downstream is void.
    """
    emb, weights = gen_worked_example()

    plain = brute_force_kcenter(emb, EXAMPLE_METRIC, EXAMPLE_K, weights=weights)
    assert plain.radius_term == EXAMPLE_KCENTER_RADIUS
    assert plain.weight_term == EXAMPLE_KCENTER_WEIGHT

    joint = brute_force_weighted(emb, EXAMPLE_METRIC, weights, EXAMPLE_K, EXAMPLE_LAMBDA)
    assert joint.objective == EXAMPLE_OPT_OBJECTIVE
    assert joint.radius_term == EXAMPLE_OPT_RADIUS
    assert joint.weight_term == EXAMPLE_OPT_WEIGHT
    assert joint.best_subset == EXAMPLE_OPT_SUBSET

    return emb, weights


@pytest.fixture()
def line_points():
    """Five points on a line with one far outlier; small enough to
    reason about by hand."""
    from duke.dataset import EmbeddingSet

    return EmbeddingSet(np.array([[0.0], [1.0], [2.0], [3.0], [10.0]]))


@pytest.fixture()
def rng():
    return np.random.default_rng(0)

import numpy as np
import pytest

from src.graph.utils import GraphFamily, MeasureMode, build_named_graph


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def p3():
    return build_named_graph(GraphFamily.PATH, 2)


@pytest.fixture
def k13():
    return build_named_graph(GraphFamily.STAR, 3)


@pytest.fixture
def triangle():
    return build_named_graph(GraphFamily.CYCLE, 3)


@pytest.fixture
def single_edge():
    return build_named_graph(GraphFamily.PATH, 1)


@pytest.fixture
def normalized_k13():
    return build_named_graph(
        GraphFamily.STAR, 3, MeasureMode.NORMALIZED_DEG1, [1.0, 2.0, 3.0]
    )

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gwp import build_graph


@pytest.fixture
def one_loop():
    """One vertex, one loop."""
    return build_graph(["v"], [("a", "v", "v")])


@pytest.fixture
def two_loops():
    """One vertex, two loops: the smallest graph with a free pair."""
    return build_graph(["v"], [("a", "v", "v"), ("b", "v", "v")])


@pytest.fixture
def three_loops():
    return build_graph(["v"], [("l1", "v", "v"), ("l2", "v", "v"), ("l3", "v", "v")])


@pytest.fixture
def two_vertex():
    """Two vertices joined by a single edge; no loops."""
    return build_graph(["u", "v"], [("e", "u", "v")])


@pytest.fixture
def embed_graph():
    """Three vertices, two loops concentrated at v0, two stray edges."""
    return build_graph(
        ["v0", "u", "w"],
        [
            ("l1", "v0", "v0"),
            ("l2", "v0", "v0"),
            ("e1", "u", "v0"),
            ("e2", "v0", "w"),
        ],
    )


@pytest.fixture
def mixed_graph():
    """An edge u->v plus an unrelated loop at w: disjoint supports."""
    return build_graph(
        ["u", "v", "w"], [("e1", "u", "v"), ("l", "w", "w")]
    )


GRAPHS_DIR = Path(__file__).parent.parent / "graphs"


@pytest.fixture
def graphs_dir():
    return GRAPHS_DIR

"""Shared test fixtures."""

import sys
from pathlib import Path

import pytest

# Ensure src is on path
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT / "src"))

from kplat.kgraph import omega_graph  # noqa: E402
from kplat.kgraph_format import load_kgraph  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep a developer's KPLAT_* settings out of the tests."""
    for name in ("KPLAT_DEPTH", "KPLAT_LATTICE_CAP", "KPLAT_IDEAL_CAP", "KPLAT_SEED", "KPLAT_WORKERS"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def g1():
    """Loop g at a, edge e: a → b, loop f at b."""
    return load_kgraph(FIXTURES / "G1.kg")


@pytest.fixture
def g2():
    """One vertex v with loops x and y."""
    return load_kgraph(FIXTURES / "G2.kg")


@pytest.fixture
def g5():
    """Two disjoint copies of G2, at v and w."""
    return load_kgraph(FIXTURES / "G5.kg")


@pytest.fixture
def torus():
    """The 2-graph with one vertex and commuting loops a, b."""
    return load_kgraph(FIXTURES / "torus.kg")


@pytest.fixture
def chain():
    """Acyclic 1-graph a → b → c with a shortcut g: a → c."""
    return load_kgraph(FIXTURES / "chain.kg")


@pytest.fixture
def omega11():
    return omega_graph(2, (1, 1))

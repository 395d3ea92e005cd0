from functools import lru_cache

import pytest
from hypothesis import settings

from kfv.kfw_format import bundled_names, load

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

DATASETS = [n for n in bundled_names()]


@lru_cache(maxsize=None)
def dataset(name):
    return load(name)


@pytest.fixture(scope="session")
def first():
    return dataset("first.kfw")


@pytest.fixture(scope="session")
def second():
    return dataset("second.kfw")


def hirzebruch_start():
    """p2 with one free blowup and two blowups at the line's intersection points."""
    from kfv.surface_graph import SurfaceGraph

    g = SurfaceGraph.projective_plane()
    g.blowup_free_point(1)
    g.blowup_intersection(2, 1)
    g.blowup_intersection(3, 1)
    return g


# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

"""Shared fixtures: hand-built groupoids, independent of the family constructors."""

import pytest

from etale_kit.groupoid import FiniteGroupoid
from etale_kit.families import standard_corpus


@pytest.fixture(scope="session")
def r2_hand():
    """The pair groupoid on two points, tables written out by hand.

    Arrow ids: 0 = (1,1), 1 = (2,2), 2 = (1,2), 3 = (2,1); the arrow (i,j)
    runs from point j to point i, so (1,2)(2,1) = (1,1).
    """
    compose = [
        (0, 0, 0), (1, 1, 1),
        (0, 2, 2), (2, 1, 2),
        (1, 3, 3), (3, 0, 3),
        (2, 3, 0), (3, 2, 1),
    ]
    return FiniteGroupoid(4, [0, 1], [0, 1, 1, 0], [0, 1, 0, 1], compose, [0, 1, 3, 2])


@pytest.fixture(scope="session")
def z2_hand():
    """Z/2 as a one-unit groupoid: arrows 0 = e, 1 = g."""
    compose = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    return FiniteGroupoid(2, [0], [0, 0], [0, 0], compose, [0, 1])


@pytest.fixture(scope="session")
def bundle_hand():
    """A group bundle: Z/2 at point x (arrows 0, 2), trivial at point y (arrow 1)."""
    compose = [(0, 0, 0), (0, 2, 2), (2, 0, 2), (2, 2, 0), (1, 1, 1)]
    return FiniteGroupoid(3, [0, 1], [0, 1, 0], [0, 1, 0], compose, [0, 1, 2])


@pytest.fixture(scope="session")
def corpus():
    return standard_corpus()

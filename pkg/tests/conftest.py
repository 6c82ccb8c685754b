"""Shared fixtures.

The expensive artifacts (a saturated depth-3 closure, a dimension-2
contraction) are built once per session; tests that need pristine
counters build their own small instances instead.
"""

import pytest

from omegacube import (
    CongruenceSession,
    TruncationConfig,
    build_free_contraction,
    build_product,
    enumerate_free_magma,
    instantiate_relations,
    two_generator_quiver,
    walking_isomorphism,
)


@pytest.fixture(scope="session")
def seed_config():
    return TruncationConfig(max_dim=2, dir_universe=2, term_depth=3)


@pytest.fixture(scope="session")
def quiver(seed_config):
    return two_generator_quiver(seed_config)


@pytest.fixture(scope="session")
def universe3(quiver):
    return enumerate_free_magma(quiver, 3)


@pytest.fixture(scope="session")
def saturated(universe3):
    session = CongruenceSession(universe3)
    session.seed(instantiate_relations(universe3))
    session.saturate()
    assert session.completed
    return session


@pytest.fixture(scope="session")
def contraction(quiver):
    return build_free_contraction(quiver, depth=2)


@pytest.fixture(scope="session")
def iso_square():
    cfg = TruncationConfig(max_dim=2, dir_universe=2, term_depth=1)
    return build_product([walking_isomorphism(), walking_isomorphism()], cfg)

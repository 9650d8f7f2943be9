"""Shared fixtures. Ring configs are session scoped: the prime registry is
immutable after install and the internal caches are value caches, so sharing
them across tests only makes the suite faster, never flakier."""

import pytest

from nodetame import ff
from nodetame.node_ring import RingConfig


@pytest.fixture(scope="session")
def f5():
    return ff.field_spec(5)


@pytest.fixture(scope="session")
def f7():
    return ff.field_spec(7)


@pytest.fixture(scope="session")
def f9():
    return ff.field_spec(3, 2)


@pytest.fixture(scope="session")
def cfg5():
    cfg = RingConfig(ff.field_spec(5), 4, precision=12)
    cfg.install_standard_primes()
    return cfg


@pytest.fixture(scope="session")
def cfg7():
    cfg = RingConfig(ff.field_spec(7), 6, precision=10)
    cfg.install_standard_primes()
    return cfg


@pytest.fixture(scope="session")
def cfg9():
    cfg = RingConfig(ff.field_spec(3, 2), 8, precision=8)
    cfg.install_standard_primes()
    return cfg


@pytest.fixture(scope="session")
def ledger(cfg5):
    """The worked F_5, M=4 reference pair: f the defining element of P(2,2),
    paired against u, plus the small cast used around it."""
    return {
        "f": cfg5.prime_elt("P(2,2)"),
        "u": cfg5.u(),
        "x": cfg5.x(),
        "y": cfg5.y(),
        "xi": cfg5.const(2),
        "xy": cfg5.element(e_x=1, e_y=1),
        "pid": "P(2,2)",
    }

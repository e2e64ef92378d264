import time

import pytest

from ldbp.bodies import Cotent, Dilate, LqBall, TwoEllipseBody
from ldbp.counterexample import build_pair, verify_pair
from ldbp.harmonic.construct import construct_g
from ldbp.harmonic.scan import pd_scan

S, B = 0.3, 1.1


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


@pytest.fixture(scope="session")
def seed_n3():
    return Cotent(TwoEllipseBody(3, S, B))


@pytest.fixture(scope="session")
def seed_n4():
    return Dilate(0.5, LqBall(4, 4))


@pytest.fixture(scope="session")
def g_n3(seed_n3):
    return _timed(lambda: construct_g(seed_n3, l=1, num_subspaces=200, seed=0))


@pytest.fixture(scope="session")
def g_n4(seed_n4):
    return _timed(lambda: construct_g(seed_n4, l=1, num_subspaces=200, seed=0))


def _pipeline(seed, construction, num_subspaces):
    def go():
        pair = build_pair(seed, l=1, construction=construction, seed=0)
        return pair, verify_pair(pair, num_subspaces=num_subspaces, seed=0)
    return _timed(go)


@pytest.fixture(scope="session")
def pair_n3(seed_n3, g_n3):
    (pair, rep), dt = _pipeline(seed_n3, g_n3[0], 200)
    return pair, rep, dt + g_n3[1]


@pytest.fixture(scope="session")
def pair_n4(seed_n4, g_n4):
    (pair, rep), dt = _pipeline(seed_n4, g_n4[0], 100)
    return pair, rep, dt + g_n4[1]


@pytest.fixture(scope="session")
def scan_b44():
    return {l: _timed(lambda l=l: pd_scan(LqBall(4, 4), l)) for l in (1, 2)}

import time

import pytest

from coherence_game import game, optimize


class IdentityRecorder:
    """Checks direct P_win against 1/2 + (I_00 + I_11)/4 for every distribution built during the run."""

    def __init__(self):
        self.count = 0
        self.worst = 0.0

    def record(self, dist):
        gap = abs(game.win_probability_direct(dist) - game.win_probability_from_interference(dist))
        self.count += 1
        self.worst = max(self.worst, gap)


_RECORDER = IdentityRecorder()


@pytest.fixture(scope="session", autouse=True)
def identity_recorder():
    original = game.ConditionalDistribution.__post_init__

    def recording_post_init(self):
        original(self)
        _RECORDER.record(self)

    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(game.ConditionalDistribution, "__post_init__", recording_post_init)
        yield _RECORDER


@pytest.fixture(autouse=True)
def _identity_holds_per_test(identity_recorder):
    yield
    assert identity_recorder.worst <= 1e-12


def _timed(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - start


@pytest.fixture(scope="session")
def sweep_one_boson_timed():
    return _timed(optimize.sweep_scheme_one, "boson", 37)


@pytest.fixture(scope="session")
def sweep_two_timed():
    return _timed(optimize.sweep_scheme_two, 37)


@pytest.fixture(scope="session")
def sweep_one_boson(sweep_one_boson_timed):
    return sweep_one_boson_timed[0]


@pytest.fixture(scope="session")
def sweep_two(sweep_two_timed):
    return sweep_two_timed[0]

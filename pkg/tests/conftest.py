import functools

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pantsrigid.curves import round_curve
from pantsrigid.mapclass import MCWord, REFLECT, apply_word, recoordinate, sigma

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def words(draw, n, max_len=6, reflect=True):
    gens = [sigma(i, s) for i in range(1, n - 1) for s in (1, -1)]
    gens += [recoordinate(k) for k in range(1, n)]
    if reflect:
        gens.append(REFLECT)
    return MCWord(n, tuple(draw(st.lists(st.sampled_from(gens), max_size=max_len))))


@st.composite
def curves(draw, n, max_len=5):
    size = draw(st.integers(2, n - 2))
    start = draw(st.integers(1, n))
    block = [(start - 1 + t) % n + 1 for t in range(size)]
    w = draw(words(n, max_len, reflect=False))
    return apply_word(w, round_curve(block, n))


@functools.lru_cache(maxsize=None)
def _cached(name, *args):
    from pantsrigid import rigidset
    return getattr(rigidset, name)(*args)


@pytest.fixture(scope="session")
def x5():
    return _cached("build_X5")


@pytest.fixture(scope="session")
def x6():
    return _cached("build_X", 6)


@pytest.fixture(scope="session")
def x7():
    return _cached("build_X", 7)

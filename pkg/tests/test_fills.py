import itertools

from hypothesis import given, strategies as st

from pantsrigid.curves import geometric_intersection, round_curve
from pantsrigid.geometry import _arrangement, _chord_crossings, fills_check
from pantsrigid.mapclass import MCWord, apply_word, sigma

from conftest import curves, words


def _diameters():
    return [round_curve(b, 6) for b in [(1, 2, 3), (2, 3, 4), (3, 4, 5)]]


def test_three_diameters_fill():
    assert fills_check(_diameters())


def test_single_curve_never_fills():
    assert not fills_check([round_curve((1, 2), 5)])
    assert not fills_check([round_curve((1, 2, 3), 6)])


def test_disjoint_curves_do_not_fill():
    assert not fills_check([round_curve((1, 2), 6), round_curve((3, 4), 6)])


def test_chain_in_five_punctures_fills():
    assert fills_check([round_curve(b, 5) for b in [(1, 2), (2, 3), (3, 4), (4, 5)]])
    assert not fills_check([round_curve(b, 5) for b in [(1, 2), (2, 3)]])


@given(words(6, 8))
def test_fill_is_mapping_class_invariant(w):
    assert fills_check([apply_word(w, c) for c in _diameters()])
    assert not fills_check([apply_word(w, round_curve(b, 6)) for b in [(1, 2), (2, 3)]])


@given(st.data())
def test_overlay_is_minimal(data):
    # every pair of strands crosses exactly its intersection number
    n = data.draw(st.integers(5, 7))
    cs = list({data.draw(curves(n, 4)) for _ in range(data.draw(st.integers(2, 4)))})
    _, _, counts = _chord_crossings(cs, _arrangement(cs), n)
    for i, j in itertools.combinations(range(len(cs)), 2):
        assert counts.get((i, j), 0) == geometric_intersection(cs[i], cs[j])
    assert not any(counts.get((i, i)) for i in range(len(cs)))


def _pool(n, depth):
    blocks = [tuple(range(i, i + s)) for s in range(2, n - 1) for i in range(1, n - s + 1)]
    gens = [MCWord(n, (sigma(i, e),)) for i in range(1, n - 1) for e in (1, -1)]
    pool = {round_curve(b, n) for b in blocks}
    front = set(pool)
    for _ in range(depth):
        front = {apply_word(g, c) for c in front for g in gens} - pool
        pool |= front
    return pool


def test_fill_matches_disjoint_curve_oracle():
    # pairs and triples of short curves: non-filling iff some curve misses them all
    n = 5
    small = sorted(_pool(n, 1), key=lambda c: c.seq)
    big = _pool(n, 4)
    for k in (2, 3):
        for S in itertools.combinations(small, k):
            missed = any(c not in S and all(geometric_intersection(c, s) == 0 for s in S) for c in big)
            split = any(all(geometric_intersection(c, s) == 0 for s in S if s != c) for c in S)
            assert fills_check(S) == (not (missed or split)), [s.seq for s in S]

import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from pantsrigid.curves import (
    CurveClass, CurveError, InvalidBlock, NotEssential, canonical_seq, canonicalize,
    enclosed_punctures, finite_side, geometric_intersection, intersection_at_most,
    invert, is_essential, normalize_block, reduce, round_curve,
)
from pantsrigid.rigidset import chord_block, gamma

from conftest import curves


def _linked(n, a, b):
    a, b = set(a), set(b)
    comp = set(range(1, n + 1)) - a
    return bool(a & b) and not (a <= b or b <= a or comp <= b or b <= comp)


def test_reduce_examples():
    assert reduce([1, -1]) == ()
    assert reduce([1, 2, -2, 3]) == (1, 3)
    assert reduce([1, 2, 3, -1]) == (2, 3)
    assert reduce([(2, 1), (3, -1)]) == (2, -3)
    with pytest.raises(CurveError):
        reduce([0])


def test_reduction_confluence_1000():
    rng = random.Random(20261016)
    for _ in range(1000):
        seq = [rng.choice((1, -1)) * rng.randint(1, 4) for _ in range(rng.randint(0, 14))]
        target = canonical_seq(reduce(seq))
        # cancel one random cancellable pair first, any order must agree
        work = list(seq)
        while True:
            m = len(work)
            spots = [i for i in range(m) if m > 1 and work[i] == -work[(i + 1) % m]]
            if not spots:
                break
            i = rng.choice(spots)
            j = (i + 1) % m
            work = [x for t, x in enumerate(work) if t not in (i, j)]
        assert canonical_seq(tuple(work)) == target
        k = rng.randint(0, max(len(seq) - 1, 0))
        assert canonical_seq(reduce(seq[k:] + seq[:k])) == target


def test_canonical_form_invariances():
    s = (1, -2, 3, 3)
    c = canonical_seq(s)
    for k in range(4):
        assert canonical_seq(s[k:] + s[:k]) == c
        assert canonical_seq(invert(s[k:] + s[:k])) == c


def test_essentiality_and_validation():
    assert not is_essential((1,), 5)
    assert is_essential((1, 2), 5)
    with pytest.raises(NotEssential):
        canonicalize((1, 2, 3, 4), 5)       # only p_5 outside
    assert canonicalize((1, 2, 3), 5) == round_curve((4, 5), 5)
    with pytest.raises(CurveError):
        canonicalize((1, -1), 5)
    with pytest.raises(CurveError):
        canonicalize((7, 1), 5)


def test_blocks():
    assert normalize_block({5, 1}, 5) == (5, 1)
    assert finite_side((5, 1), 5) == (2, 3, 4)
    with pytest.raises(InvalidBlock):
        normalize_block({1, 3}, 5)
    with pytest.raises(InvalidBlock):
        round_curve((1,), 5)
    assert round_curve((5, 1), 5) == round_curve((2, 3, 4), 5)


def test_round_curve_encloses_its_block():
    for n in range(5, 9):
        for (i, j), c in gamma(n).chords.items():
            fin = set(finite_side(chord_block(i, j, n), n))
            assert enclosed_punctures(c) == fin


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_chord_pairs_match_linking_oracle(n):
    gs = gamma(n)
    for (k1, c1), (k2, c2) in combinations(sorted(gs.chords.items()), 2):
        expected = 2 if _linked(n, chord_block(*k1, n), chord_block(*k2, n)) else 0
        assert geometric_intersection(c1, c2) == expected, (k1, k2)


@given(st.data())
def test_intersection_symmetric_and_zero_on_self(data):
    n = data.draw(st.integers(5, 7))
    a = data.draw(curves(n))
    b = data.draw(curves(n))
    i = geometric_intersection(a, b)
    assert i == geometric_intersection(b, a)
    assert i % 2 == 0
    assert geometric_intersection(a, a) == 0
    assert intersection_at_most(a, b, i)
    assert i == 0 or not intersection_at_most(a, b, i - 1)


@given(st.data())
def test_json_roundtrip(data):
    n = data.draw(st.integers(5, 7))
    c = data.draw(curves(n))
    assert CurveClass.from_json(c.to_json()) == c

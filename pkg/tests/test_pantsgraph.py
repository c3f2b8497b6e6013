import json

import pytest
from pantsrigid.curves import NotEssential, geometric_intersection, round_curve
from pantsrigid.pantsgraph import (
    Duplicate, NotACycle, NotAnEdge, NotDisjoint, PantsSubgraph, ResourceLimit,
    WrongCount, ball, farey_id, find_frame, is_alternating_cycle,
    is_elementary_move, make_vertex, slot_neighbors, thick_edge, triangle_completions,
    triangles, validate_vertex,
)
from pantsrigid.mapclass import apply_word, is_round
from pantsrigid.rigidset import build_Z, core_pentagon, greek5


def R(*block, n=6):
    return round_curve(block, n)


def test_validate_vertex_accepts_raw_sequences():
    v = validate_vertex([[1, 2], [[3, 1], [4, 1]]], 5)
    assert v == core_pentagon()[0]
    assert validate_vertex(list(v)) == v


@pytest.mark.parametrize("curves_, n, err", [
    ([[1, 2]], 5, WrongCount),
    ([[1, 2], [2, 3]], 5, NotDisjoint),
    ([[1, 2], [2, 1]], 5, Duplicate),
    ([[1], [3, 4]], 5, NotEssential),
])
def test_validate_vertex_rejects(curves_, n, err):
    with pytest.raises(err):
        validate_vertex(curves_, n)


def test_elementary_moves_and_farey_ids():
    A, B, E = core_pentagon()[0], core_pentagon()[1], core_pentagon()[4]
    assert is_elementary_move(A, B) and is_elementary_move(A, E)
    assert farey_id(A, B) != farey_id(A, E)
    C = core_pentagon()[2]
    assert not is_elementary_move(A, C)
    with pytest.raises(NotAnEdge):
        farey_id(A, C)


def test_ball_radius_zero_and_one():
    A = core_pentagon()[0]
    b0 = ball(A, 0, 1)
    assert (b0.order, b0.size) == (1, 0)
    b1 = ball(A, 1, 1)
    assert b1.order == 7
    assert all(b1.has_edge(0, j) for j in range(1, 7))
    assert ball(A, 1, 1).dumps() == b1.dumps()


def test_ball_contains_Z5_and_respects_cap():
    A = core_pentagon()[0]
    b = ball(A, 2, 2)
    assert (b.order, b.size) == (77, 165)
    assert all(v in b for v in core_pentagon())
    with pytest.raises(ResourceLimit) as info:
        ball(A, 2, 2, max_vertices=20)
    assert info.value.partial == 20


def test_frames_are_round():
    A = core_pentagon()[0]
    b = ball(A, 2, 1)
    for i, v in enumerate(b.vertices):
        fr = b.frame(i)
        assert all(is_round(c) for c in fr.base)
        assert make_vertex((apply_word(fr.word, c) for c in fr.base), 5) == v


@pytest.mark.parametrize("n", [5, 6])
def test_slot_neighbors_are_moves(n):
    for base in build_Z(n).vertices:
        fr = find_frame(base)
        for alpha in base:
            got = slot_neighbors(base, alpha, 2, fr)
            assert sorted(k for k, _, _ in got) == [-2, -1, 0, 1, 2]     # 2K + 1 slopes
            for k, w, wf in got:
                assert is_elementary_move(base, w)
                assert all(is_round(c) for c in wf.base)
                assert make_vertex((apply_word(wf.word, x) for x in wf.base), n) == w


def test_triangle_completions_form_triangles():
    A, B = core_pentagon()[:2]
    plus, minus = triangle_completions(A, B)
    assert plus != minus
    for t in (plus, minus):
        assert is_elementary_move(A, t) and is_elementary_move(B, t)
        assert farey_id(A, t) == farey_id(A, B)
    th = thick_edge(A, B)
    assert (th.order, th.size, len(triangles(th))) == (4, 5, 2)


def test_alternating_cycles():
    assert is_alternating_cycle(core_pentagon())
    with pytest.raises(NotACycle):
        is_alternating_cycle(core_pentagon()[:2])
    # two commuting moves in disjoint slots of S_0,6 give an alternating square
    rect = [make_vertex(x, 6) for x in (
        (R(1, 2), R(1, 2, 3), R(4, 5)),
        (R(2, 3), R(1, 2, 3), R(4, 5)),
        (R(2, 3), R(1, 2, 3), R(5, 6)),
        (R(1, 2), R(1, 2, 3), R(5, 6)),
    )]
    assert is_alternating_cycle(rect)
    # a triangle lies in one Farey graph, so it is not alternating
    A, B = core_pentagon()[:2]
    plus, _ = triangle_completions(A, B)
    assert not is_alternating_cycle([A, B, plus])


def test_json_and_dot_roundtrip():
    z = build_Z(6)
    text = z.dumps()
    back = PantsSubgraph.from_json(json.loads(text))
    assert back.dumps() == text
    assert back.vertices == z.vertices and back.edges == z.edges
    dot = z.to_dot()
    assert dot.startswith("graph pants {") and dot.count(" -- ") == z.size


def test_from_json_validates():
    data = build_Z(5).to_json()
    data["edges"].append([0, 2])
    with pytest.raises(NotAnEdge):
        PantsSubgraph.from_json(data)
    PantsSubgraph.from_json(data, validate=False)
    data = build_Z(5).to_json()
    data["vertices"][1]["curves"] = data["vertices"][0]["curves"]
    with pytest.raises(Duplicate):
        PantsSubgraph.from_json(data)


def test_greek_names():
    g = greek5()
    assert geometric_intersection(g["alpha"], g["beta"]) == 0
    assert geometric_intersection(g["alpha"], g["epsilon"]) == 2

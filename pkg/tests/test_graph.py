import json
from itertools import combinations
from pathlib import Path

import pytest

from rcmodel.cartan import build_cartan, parse_weight, weyl_dimension
from rcmodel.graph import (
    BudgetExceeded,
    TruncatedGraphError,
    canonical_order,
    character,
    check_edges,
    count,
    from_json,
    generate,
    same_graph,
    to_dot,
    to_json,
)
from rcmodel.rigged import decode, highest_weight_empty, infinity_empty, vacancy

FIXTURE = Path(__file__).parent / "fixtures" / "affine_a2_la0_depth4.json"
K4 = [[2, -1, -1, -1], [-1, 2, -1, -1], [-1, -1, 2, -1], [-1, -1, -1, 2]]


def affine_a2_graph():
    doc = json.loads(FIXTURE.read_text())
    d = build_cartan(doc["type"])
    return doc, d, generate(highest_weight_empty(d, parse_weight(doc["highest_weight"])), depth=doc["depth"])


def test_affine_a2_graph_shape():
    doc, d, g = affine_a2_graph()
    ref = from_json(json.dumps(doc))
    assert len(g.nodes) == len(doc["nodes"]) == 10
    assert len(g.edges) == 9
    assert not g.exhaustive
    assert same_graph(g, ref)
    assert check_edges(g) == []


def test_affine_a2_graph_contents():
    doc, d, g = affine_a2_graph()
    ref = from_json(json.dumps(doc))
    ours, theirs = canonical_order(g), canonical_order(ref)
    for k, j in zip(ours, theirs):
        rc = g.elements[k].rc
        assert rc == decode(doc["nodes"][j], d)
        for a, vac in doc["vacancies"][j].items():
            a = int(a)
            assert [vacancy(rc, a, i) for i, _ in rc.part(a).strings] == vac


def test_a1_chain_and_depth_zero():
    d = build_cartan("A1")
    g = generate(highest_weight_empty(d, parse_weight("3*La[1]")))
    assert g.exhaustive and count(g) == 4
    assert g.edges == [[0, 1, 1], [1, 1, 2], [2, 1, 3]]
    g0 = generate(infinity_empty(d), depth=0)
    assert count(g0) == 1 and g0.edges == [] and not g0.exhaustive
    assert generate(highest_weight_empty(d, parse_weight("0*La[1]")), depth=0).exhaustive
    with pytest.raises(ValueError):
        generate(infinity_empty(d), depth=-1)


def test_characters():
    d = build_cartan("A2")
    ch = character(generate(highest_weight_empty(d, parse_weight("La[1]"))))
    assert ch == {parse_weight("La[1]"): 1, parse_weight("-La[1]+La[2]"): 1, parse_weight("-La[2]"): 1}
    adj = character(generate(highest_weight_empty(d, parse_weight("La[1]+La[2]"))))
    assert sum(adj.values()) == 8 == weyl_dimension(d, parse_weight("La[1]+La[2]"))
    assert adj[parse_weight("0*La[1]")] == 2
    assert all(m == 1 for w, m in adj.items() if not w.is_zero())
    with pytest.raises(TruncatedGraphError):
        character(generate(infinity_empty(d), depth=2))


def test_same_graph_distinguishes_chain_lengths():
    d = build_cartan("A1")
    three = generate(highest_weight_empty(d, parse_weight("2*La[1]")))
    four = generate(highest_weight_empty(d, parse_weight("3*La[1]")))
    assert not same_graph(three, four)
    assert same_graph(four, generate(infinity_empty(d), depth=3))


def test_dot_and_json_export():
    _, d, g = affine_a2_graph()
    text = to_json(g)
    back = from_json(text)
    assert back == g
    assert to_json(back) == text
    assert json.loads(text)["exhaustive"] is False
    dot = to_dot(g)
    assert dot.startswith("digraph crystal {") and dot.rstrip().endswith("}")
    assert dot.count(" -> ") == 9
    assert '[label="0"]' in dot
    assert to_dot(g) == dot
    with pytest.raises(ValueError):
        from_json('{"nodes": []}')


def test_budget():
    d = build_cartan("A3")
    with pytest.raises(BudgetExceeded) as info:
        generate(infinity_empty(d), depth=6, budget=50)
    partial = info.value.partial
    assert 50 <= len(partial.nodes) <= 51
    assert not partial.exhaustive


def degree_two_oracle(matrix):
    """dim U^-_{<=2}: 1 + n + n + (commuting pairs count once, other pairs twice)."""
    n = len(matrix)
    pairs = sum(1 if matrix[i][j] == 0 else 2 for i, j in combinations(range(n), 2))
    return 1 + n + n + pairs


@pytest.mark.parametrize("spec", ["A2", "D4", "A2~", "G2", K4])
def test_depth_two_counts(spec):
    d = build_cartan(spec)
    g = generate(infinity_empty(d), depth=2)
    assert count(g) == degree_two_oracle(d.matrix)


def test_complete_graph_depth_two_is_21():
    assert count(generate(infinity_empty(build_cartan(K4)), depth=2)) == 21


def test_non_highest_weight_start_adds_raising_edges():
    d = build_cartan("A2")
    top = highest_weight_empty(d, parse_weight("La[1]"))
    mid = generate(top).elements[1]
    g = generate(mid)
    assert count(g) == 3
    assert len(g.edges) == 2 and g.exhaustive
